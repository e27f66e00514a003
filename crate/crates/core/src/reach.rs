//! Backward operators for `x_k = A ⊗ x_{k−1} ⊕ B ⊗ u_k ⊕ C ⊗ w_k`.
//!
//! The one-step backward reachable set of a target `E` is
//! `Υ(E) = A⁻¹ ∘ γ_𝒰 ∘ φ_𝒲 (E)` where
//!
//! * `A⁻¹(E) = {x : A ⊗ x ∈ E}`,
//! * `γ_𝒰(E) = {x : ∃u ∈ 𝒰, x ⊕ B ⊗ u ∈ E}`,
//! * `φ_𝒲(E) = {x : ∀w ∈ 𝒲, x ⊕ C ⊗ w ∈ E}`.
//!
//! `φ` is computed from the constraint form of the target by intersecting
//! pseudo half-spaces; `A⁻¹` and `γ` encode their defining equations as a
//! symmetric constraint system over an extended vector, solve it for
//! generators, and project.

use crate::error::{Error, Result};
use crate::halfspace::{intersect_all, PseudoHalfSpace};
use crate::maxplus::{dot_slices, MaxPlus, MaxPlusMatrix, MaxPlusVector};
use crate::sets::{ConeM, ConeV, Polyhedron};

/// Matrices and admissible sets of a disturbed max-plus linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemModel {
    a: MaxPlusMatrix,
    b: MaxPlusMatrix,
    c: MaxPlusMatrix,
    control: Polyhedron,
    disturbance: Polyhedron,
}

impl SystemModel {
    pub fn new(
        a: MaxPlusMatrix,
        b: MaxPlusMatrix,
        c: MaxPlusMatrix,
        control: Polyhedron,
        disturbance: Polyhedron,
    ) -> Result<Self> {
        let n = a.nrows();
        let shape = |m: &MaxPlusMatrix| format!("{}x{}", m.nrows(), m.ncols());
        if a.ncols() != n {
            return Err(Error::dims("A", format!("{n}x{n}"), shape(&a)));
        }
        if b.nrows() != n || b.ncols() != control.dim() {
            return Err(Error::dims(
                "B",
                format!("{n}x{}", control.dim()),
                shape(&b),
            ));
        }
        if c.nrows() != n || c.ncols() != disturbance.dim() {
            return Err(Error::dims(
                "C",
                format!("{n}x{}", disturbance.dim()),
                shape(&c),
            ));
        }
        Ok(SystemModel {
            a,
            b,
            c,
            control,
            disturbance,
        })
    }

    pub fn a(&self) -> &MaxPlusMatrix {
        &self.a
    }

    pub fn b(&self) -> &MaxPlusMatrix {
        &self.b
    }

    pub fn c(&self) -> &MaxPlusMatrix {
        &self.c
    }

    pub fn control(&self) -> &Polyhedron {
        &self.control
    }

    pub fn disturbance(&self) -> &Polyhedron {
        &self.disturbance
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    /// One step of the dynamics.
    pub fn step(
        &self,
        x: &MaxPlusVector,
        u: &MaxPlusVector,
        w: &MaxPlusVector,
    ) -> Result<MaxPlusVector> {
        self.a
            .mul_vec(x)?
            .oplus(&self.b.mul_vec(u)?)?
            .oplus(&self.c.mul_vec(w)?)
    }
}

/// A target `⟨lhs, rhs⟩ ∩ ℝ_max^n` in lifted coordinates: each row reads
/// `(lhs_i | (0, x)) ≤ (rhs_i | (0, x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSet {
    constraints: ConeM,
}

impl TargetSet {
    pub fn new(lhs: MaxPlusMatrix, rhs: MaxPlusMatrix) -> Result<Self> {
        let constraints = ConeM::new(lhs, rhs)?;
        if constraints.dim() == 0 {
            return Err(Error::dims("target columns", ">= 1", 0));
        }
        Ok(TargetSet { constraints })
    }

    /// The unconstrained target, all of ℝ_max^n.
    pub fn whole(n: usize) -> Self {
        TargetSet::new(
            MaxPlusMatrix::bottom(0, n + 1),
            MaxPlusMatrix::bottom(0, n + 1),
        )
        .expect("shapes agree")
    }

    /// State dimension `n`.
    pub fn dim(&self) -> usize {
        self.constraints.dim() - 1
    }

    pub fn nrows(&self) -> usize {
        self.constraints.nrows()
    }

    pub fn lhs(&self) -> &MaxPlusMatrix {
        self.constraints.lhs()
    }

    pub fn rhs(&self) -> &MaxPlusMatrix {
        self.constraints.rhs()
    }

    pub fn contains(&self, x: &MaxPlusVector) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::dims("target membership", self.dim(), x.len()));
        }
        self.constraints.contains(&x.prepend(MaxPlus::unit()))
    }

    /// The lifted cone `⟨lhs, rhs⟩` in generator form.
    pub fn lifted_cone(&self) -> ConeV {
        self.constraints.to_cone_v()
    }

    pub fn to_polyhedron(&self) -> Polyhedron {
        self.lifted_cone()
            .restrict_to_plane()
            .expect("target cone has dimension >= 2")
    }
}

/// `{M ⊗ x : x ∈ P}`, generated by the images of `P`'s generators.
pub fn linear_image(m: &MaxPlusMatrix, p: &Polyhedron) -> Result<Polyhedron> {
    if m.ncols() != p.dim() {
        return Err(Error::dims("linear image", m.ncols(), p.dim()));
    }
    let image = |gens: &[MaxPlusVector]| -> Result<Vec<MaxPlusVector>> {
        gens.iter().map(|g| m.mul_vec(g)).collect()
    };
    Polyhedron::new(
        m.nrows(),
        image(p.span_generators())?,
        image(p.conv_generators())?,
    )
}

/// True when every recession direction `r` of `w` satisfies the target rows
/// with the affine column dropped, `lhs_{•,2..} ⊗ r ≤ rhs_{•,2..} ⊗ r`.
/// Failing this makes `φ_w(z)` empty.
pub fn check_recession(w: &Polyhedron, z: &TargetSet) -> Result<bool> {
    if w.dim() != z.dim() {
        return Err(Error::dims("recession check", z.dim(), w.dim()));
    }
    Ok(w.span_generators().iter().all(|r| {
        (0..z.nrows()).all(|i| {
            dot_slices(&z.lhs().row(i)[1..], r.entries())
                <= dot_slices(&z.rhs().row(i)[1..], r.entries())
        })
    }))
}

/// `φ_w(z) = {x : ∀y ∈ w, x ⊕ y ∈ z}`, disturbance added directly.
pub fn phi(w: &Polyhedron, z: &TargetSet) -> Result<Polyhedron> {
    if w.dim() != z.dim() {
        return Err(Error::dims("phi", z.dim(), w.dim()));
    }
    if w.conv_generators().is_empty() {
        return Err(Error::EmptyDisturbance);
    }
    if !check_recession(w, z)? {
        return Ok(Polyhedron::empty(z.dim()));
    }
    let bounded_part: Vec<MaxPlusVector> = w
        .conv_generators()
        .iter()
        .map(|e| e.prepend(MaxPlus::unit()))
        .collect();
    let constraints = (0..z.nrows())
        .map(|i| {
            PseudoHalfSpace::new(
                z.lhs().row_vector(i),
                z.rhs().row_vector(i),
                bounded_part.clone(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    intersect_all(&constraints, z.dim())?.restrict_to_plane()
}

fn check_first_row(what: &'static str, generators: &MaxPlusMatrix) -> Result<()> {
    if generators.nrows() == 0 {
        return Err(Error::dims(what, ">= 1 rows", 0));
    }
    match generators
        .row(0)
        .iter()
        .position(|x| !(x.is_bottom() || x.is_unit()))
    {
        Some(index) => Err(Error::UnnormalizedGenerators {
            index,
            value: generators.get(0, index).clone(),
        }),
        None => Ok(()),
    }
}

/// Solves `lhs ⊗ t = rhs ⊗ t`, keeps the first `n + 1` coordinates of `t`
/// and slices at `t₁ = 0`.
fn project_equalities(lhs: MaxPlusMatrix, rhs: MaxPlusMatrix, n: usize) -> Result<Polyhedron> {
    ConeM::symmetric(lhs, rhs)?
        .to_cone_v()
        .project(n + 1)?
        .remove_redundant()
        .restrict_to_plane()
}

/// `A⁻¹(Z)` where `Z = Span(gens) ∩ {x₁ = 0}` and the generator matrix has
/// first-row entries in `{0, ε}`.
///
/// Over `t = (t₀, x, z)`: `t₀ = M_{1,•} ⊗ z` and `A ⊗ x = M_{2..,•} ⊗ z`.
pub fn a_inverse_from_generators(a: &MaxPlusMatrix, gens: &MaxPlusMatrix) -> Result<Polyhedron> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::dims(
            "A",
            format!("{n}x{n}"),
            format!("{}x{}", n, a.ncols()),
        ));
    }
    if gens.nrows() != n + 1 {
        return Err(Error::dims("target generators", n + 1, gens.nrows()));
    }
    check_first_row("target generators", gens)?;
    let q = gens.ncols();
    let width = 1 + n + q;

    let mut lhs = MaxPlusMatrix::bottom(n + 1, width);
    lhs.set(0, 0, MaxPlus::unit());
    lhs.set_block(1, 1, a);

    let mut rhs = MaxPlusMatrix::bottom(n + 1, width);
    rhs.set_block(0, 1 + n, gens);

    project_equalities(lhs, rhs, n)
}

/// `A⁻¹(Z)` for `Z` given by its lifted cone.
pub fn a_inverse(a: &MaxPlusMatrix, target: &ConeV) -> Result<Polyhedron> {
    if target.dim() != a.nrows() + 1 {
        return Err(Error::dims("lifted target", a.nrows() + 1, target.dim()));
    }
    a_inverse_from_generators(a, &target.generator_matrix())
}

/// `γ_𝒰(Z)` with `𝒰 = Span(control) ∩ {u₁ = 0}` and
/// `Z = Span(target) ∩ {x₁ = 0}`, both generator matrices having first-row
/// entries in `{0, ε}`.
///
/// Over `t = (t₀, x, y, z)`: `x ⊕ B ⊗ R_{2..,•} ⊗ y = M_{2..,•} ⊗ z`,
/// `R_{1,•} ⊗ y = t₀` and `M_{1,•} ⊗ z = t₀`.
pub fn gamma_from_generators(
    b: &MaxPlusMatrix,
    control: &MaxPlusMatrix,
    target: &MaxPlusMatrix,
) -> Result<Polyhedron> {
    let n = b.nrows();
    let m = b.ncols();
    if control.nrows() != m + 1 {
        return Err(Error::dims("control generators", m + 1, control.nrows()));
    }
    if target.nrows() != n + 1 {
        return Err(Error::dims("target generators", n + 1, target.nrows()));
    }
    check_first_row("control generators", control)?;
    check_first_row("target generators", target)?;
    let r = control.ncols();
    let q = target.ncols();
    let width = 1 + n + r + q;
    let control_body = control.submatrix(1..m + 1, 0..r)?;
    let pushed = b.mul(&control_body)?;

    let mut lhs = MaxPlusMatrix::bottom(n + 2, width);
    lhs.set_block(0, 1, &MaxPlusMatrix::identity(n));
    lhs.set_block(0, 1 + n, &pushed);
    lhs.set_block(n, 1 + n, &control.submatrix(0..1, 0..r)?);
    lhs.set_block(n + 1, 1 + n + r, &target.submatrix(0..1, 0..q)?);

    let mut rhs = MaxPlusMatrix::bottom(n + 2, width);
    rhs.set_block(0, 1 + n + r, &target.submatrix(1..n + 1, 0..q)?);
    rhs.set(n, 0, MaxPlus::unit());
    rhs.set(n + 1, 0, MaxPlus::unit());

    project_equalities(lhs, rhs, n)
}

/// `γ_𝒰(Z)` for `Z` given by its lifted cone.
pub fn gamma(b: &MaxPlusMatrix, control: &Polyhedron, target: &ConeV) -> Result<Polyhedron> {
    if control.dim() != b.ncols() {
        return Err(Error::dims("control set", b.ncols(), control.dim()));
    }
    if target.dim() != b.nrows() + 1 {
        return Err(Error::dims("lifted target", b.nrows() + 1, target.dim()));
    }
    gamma_from_generators(
        b,
        &control.lift().generator_matrix(),
        &target.generator_matrix(),
    )
}

/// Generator counts after one pipeline stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSummary {
    pub stage: &'static str,
    pub span: usize,
    pub conv: usize,
    pub note: Option<String>,
}

impl StageSummary {
    fn of(stage: &'static str, p: &Polyhedron) -> Self {
        StageSummary {
            stage,
            span: p.span_generators().len(),
            conv: p.conv_generators().len(),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// `φ_{C⊗𝒲}(target)` together with the stages that produced it.
pub fn phi_traced(
    model: &SystemModel,
    target: &TargetSet,
) -> Result<(Polyhedron, Vec<StageSummary>)> {
    check_target(model, target)?;
    let disturbance = linear_image(model.c(), model.disturbance())
        .map_err(|e| e.in_stage("disturbance image"))?;
    let mut trace = vec![StageSummary::of("disturbance image", &disturbance)];
    let admissible = check_recession(&disturbance, target).map_err(|e| e.in_stage("phi"))?;
    let result = phi(&disturbance, target).map_err(|e| e.in_stage("phi"))?;
    let note = if admissible {
        "recession check passed"
    } else {
        "recession check failed: result is empty"
    };
    trace.push(StageSummary::of("phi", &result).with_note(note));
    Ok((result, trace))
}

fn check_target(model: &SystemModel, target: &TargetSet) -> Result<()> {
    if target.dim() != model.state_dim() {
        return Err(Error::dims("target", model.state_dim(), target.dim()));
    }
    Ok(())
}

/// `Υ(target)` together with per-stage generator counts.
pub fn upsilon_traced(
    model: &SystemModel,
    target: &TargetSet,
) -> Result<(Polyhedron, Vec<StageSummary>)> {
    let (after_phi, mut trace) = phi_traced(model, target)?;
    let n = model.state_dim();
    if after_phi.is_empty() {
        trace.push(StageSummary::of("gamma", &after_phi).with_note("skipped: empty input"));
        trace.push(StageSummary::of("ainv", &after_phi).with_note("skipped: empty input"));
        return Ok((Polyhedron::empty(n), trace));
    }
    let after_gamma =
        gamma(model.b(), model.control(), &after_phi.lift()).map_err(|e| e.in_stage("gamma"))?;
    trace.push(StageSummary::of("gamma", &after_gamma));
    let result = a_inverse(model.a(), &after_gamma.lift()).map_err(|e| e.in_stage("ainv"))?;
    trace.push(StageSummary::of("ainv", &result));
    Ok((result, trace))
}

/// `Υ(target) = A⁻¹ ∘ γ_𝒰 ∘ φ_{C⊗𝒲} (target)`.
pub fn upsilon(model: &SystemModel, target: &TargetSet) -> Result<Polyhedron> {
    upsilon_traced(model, target).map(|(p, _)| p)
}
