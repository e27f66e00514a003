//! Tropical cones and polyhedra.
//!
//! A [`ConeV`] is a finitely generated cone `Span(v₁,…,v_N)`, a [`ConeM`] is
//! a constraint system `{x : lhs ⊗ x ≤ rhs ⊗ x}`, and a [`Polyhedron`] is
//! `Span(span) ⊕ Conv(conv)`. Polyhedra in ℝ_max^n are handled through the
//! cone in ℝ_max^{n+1} whose slice at `x₁ = 0` they are: span generators are
//! lifted as `(ε, r)`, conv generators as `(0, e)`.
//!
//! Generators are kept in canonical form: a generator with finite first
//! coordinate is scaled so that coordinate is 0, any other generator is
//! scaled so its largest finite coordinate is 0, and ε vectors are dropped.
//! Generator lists are sorted and free of duplicates.

use crate::error::{Error, Result};
use crate::maxplus::{dot_slices, MaxPlus, MaxPlusMatrix, MaxPlusVector};

/// Canonical representative of the ray through `v`, or `None` for ε_n.
pub fn normalize(v: &MaxPlusVector) -> Option<MaxPlusVector> {
    let pivot = match v.entries().first()? {
        MaxPlus::Bottom => v.iter().max()?,
        first => first,
    };
    let shift = pivot.inverse()?;
    Some(v.scale(&shift))
}

/// Scales `v` so its largest finite coordinate is 0; `None` for ε_n.
fn normalize_by_max(v: &MaxPlusVector) -> Option<MaxPlusVector> {
    let shift = v.iter().max()?.inverse()?;
    Some(v.scale(&shift))
}

fn sort_dedup(gens: &mut Vec<MaxPlusVector>) {
    gens.sort();
    gens.dedup();
}

fn check_dims(what: &str, dim: usize, vectors: &[MaxPlusVector]) -> Result<()> {
    match vectors.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::dims(what, dim, v.len())),
        None => Ok(()),
    }
}

/// Coefficients `λⱼ` (largest with `λⱼ · gⱼ ≤ x`) if `x ∈ Span(gens)`.
fn residuate<'a, I>(gens: I, x: &MaxPlusVector) -> Option<Vec<MaxPlus>>
where
    I: IntoIterator<Item = &'a MaxPlusVector>,
{
    let mut covered = MaxPlusVector::bottom(x.len());
    let mut witness = Vec::new();
    for g in gens {
        let lambda = g
            .iter()
            .zip(x)
            .filter_map(|(gi, xi)| xi.residual(gi))
            .min()
            .unwrap_or(MaxPlus::Bottom);
        if lambda.is_finite() {
            covered = covered.oplus_unchecked(&g.scale(&lambda));
        }
        witness.push(lambda);
    }
    (covered == *x).then_some(witness)
}

/// `(lhs_row | x) ≤ (rhs_row | x)`.
pub fn mform_satisfied(
    lhs_row: &MaxPlusVector,
    rhs_row: &MaxPlusVector,
    x: &MaxPlusVector,
) -> Result<bool> {
    Ok(lhs_row.dot(x)? <= rhs_row.dot(x)?)
}

/// A finitely generated tropical cone.
///
/// An empty generator list is the cone `{ε_n}`; a cone is never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeV {
    dim: usize,
    generators: Vec<MaxPlusVector>,
}

impl ConeV {
    pub fn new(dim: usize, generators: Vec<MaxPlusVector>) -> Result<Self> {
        check_dims("cone generator", dim, &generators)?;
        Ok(Self::canonical(dim, generators))
    }

    fn canonical(dim: usize, generators: Vec<MaxPlusVector>) -> Self {
        let mut generators: Vec<_> = generators.iter().filter_map(normalize).collect();
        sort_dedup(&mut generators);
        ConeV { dim, generators }
    }

    /// The cone `{ε_n}`.
    pub fn trivial(dim: usize) -> Self {
        ConeV {
            dim,
            generators: Vec::new(),
        }
    }

    /// All of ℝ_max^n, spanned by the canonical basis.
    pub fn full(dim: usize) -> Self {
        Self::canonical(dim, (0..dim).map(|i| MaxPlusVector::unit(dim, i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[MaxPlusVector] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The `dim × len` matrix whose columns are the generators.
    pub fn generator_matrix(&self) -> MaxPlusMatrix {
        MaxPlusMatrix::from_columns(self.dim, &self.generators)
            .expect("generators share the cone dimension")
    }

    fn check_point(&self, x: &MaxPlusVector) -> Result<()> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(Error::dims("cone membership", self.dim, x.len()))
        }
    }

    /// Membership by residuation. On success returns, for each generator, the
    /// largest coefficient it can carry; their combination equals `x`.
    pub fn contains_with_witness(&self, x: &MaxPlusVector) -> Result<Option<Vec<MaxPlus>>> {
        self.check_point(x)?;
        Ok(residuate(&self.generators, x))
    }

    pub fn contains(&self, x: &MaxPlusVector) -> Result<bool> {
        Ok(self.contains_with_witness(x)?.is_some())
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &ConeV) -> Result<bool> {
        if other.dim != self.dim {
            return Err(Error::dims("cone inclusion", self.dim, other.dim));
        }
        Ok(other
            .generators
            .iter()
            .all(|g| residuate(&self.generators, g).is_some()))
    }

    /// Set equality, by mutual inclusion of generators.
    pub fn same_set(&self, other: &ConeV) -> Result<bool> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    /// Projection onto the first `r` coordinates.
    pub fn project(&self, r: usize) -> Result<ConeV> {
        if r == 0 || r > self.dim {
            return Err(Error::IndexOutOfRange {
                index: r,
                max: self.dim,
            });
        }
        Ok(Self::canonical(
            r,
            self.generators.iter().map(|g| g.truncate(r)).collect(),
        ))
    }

    /// Drops every generator lying in the span of the remaining ones.
    ///
    /// Only non-extreme generators are ever redundant, so the result is the
    /// set of extreme rays whatever order the scan runs in.
    pub fn remove_redundant(&self) -> ConeV {
        let mut keep = vec![true; self.generators.len()];
        for i in 0..self.generators.len() {
            let others = self
                .generators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i && keep[j])
                .map(|(_, g)| g);
            if residuate(others, &self.generators[i]).is_some() {
                keep[i] = false;
            }
        }
        let generators = self
            .generators
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(g, _)| g.clone())
            .collect();
        ConeV {
            dim: self.dim,
            generators,
        }
    }

    /// Generators of `Span(self) ∩ {x : (a|x) ≤ (b|x)}`, redundancy-filtered.
    pub fn intersect_halfspace(&self, a: &MaxPlusVector, b: &MaxPlusVector) -> Result<ConeV> {
        if a.len() != self.dim || b.len() != self.dim {
            return Err(Error::dims(
                "half-space",
                self.dim,
                if a.len() != self.dim {
                    a.len()
                } else {
                    b.len()
                },
            ));
        }
        Ok(self.intersect_halfspace_unchecked(a.entries(), b.entries()))
    }

    pub(crate) fn intersect_halfspace_unchecked(&self, a: &[MaxPlus], b: &[MaxPlus]) -> ConeV {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for g in &self.generators {
            let lhs = dot_slices(a, g.entries());
            let rhs = dot_slices(b, g.entries());
            if lhs <= rhs {
                inside.push((g, rhs));
            } else {
                outside.push((g, lhs));
            }
        }
        if outside.is_empty() {
            return self.clone();
        }
        let mut generators: Vec<MaxPlusVector> = inside.iter().map(|(v, _)| (*v).clone()).collect();
        for (v, v_rhs) in &inside {
            for (w, w_lhs) in &outside {
                // (a|w) > (b|w) forces (a|w) finite, so the residual exists.
                let rho = v_rhs.residual(w_lhs).expect("(a|w) is finite");
                if rho.is_finite() {
                    generators.push(v.oplus_unchecked(&w.scale(&rho)));
                }
            }
        }
        Self::canonical(self.dim, generators).remove_redundant()
    }

    /// The polyhedron `{x : (0, x) ∈ self}`.
    pub fn restrict_to_plane(&self) -> Result<Polyhedron> {
        if self.dim < 2 {
            return Err(Error::dims(
                "plane restriction (cone dimension)",
                ">= 2",
                self.dim,
            ));
        }
        let mut span = Vec::new();
        let mut conv = Vec::new();
        for g in &self.generators {
            match g[0].inverse() {
                Some(shift) => conv.push(g.scale(&shift).tail()),
                None => span.push(g.tail()),
            }
        }
        Polyhedron::new(self.dim - 1, span, conv)
    }
}

/// A tropical cone in constraint form `{x : lhs ⊗ x ≤ rhs ⊗ x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeM {
    lhs: MaxPlusMatrix,
    rhs: MaxPlusMatrix,
}

impl ConeM {
    pub fn new(lhs: MaxPlusMatrix, rhs: MaxPlusMatrix) -> Result<Self> {
        if lhs.nrows() != rhs.nrows() || lhs.ncols() != rhs.ncols() {
            return Err(Error::dims(
                "constraint matrices",
                format!("{}x{}", lhs.nrows(), lhs.ncols()),
                format!("{}x{}", rhs.nrows(), rhs.ncols()),
            ));
        }
        Ok(ConeM { lhs, rhs })
    }

    /// `⟨lhs, rhs⟩ ∩ ⟨rhs, lhs⟩`, i.e. `lhs ⊗ x = rhs ⊗ x`.
    pub fn symmetric(lhs: MaxPlusMatrix, rhs: MaxPlusMatrix) -> Result<Self> {
        let cone = ConeM::new(lhs, rhs)?;
        let rows = |top: &MaxPlusMatrix, bottom: &MaxPlusMatrix| {
            top.row_vectors()
                .chain(bottom.row_vectors())
                .map(MaxPlusVector::into_entries)
                .collect()
        };
        let cols = cone.dim();
        ConeM::new(
            MaxPlusMatrix::from_rows(cols, rows(&cone.lhs, &cone.rhs))?,
            MaxPlusMatrix::from_rows(cols, rows(&cone.rhs, &cone.lhs))?,
        )
    }

    pub fn dim(&self) -> usize {
        self.lhs.ncols()
    }

    pub fn nrows(&self) -> usize {
        self.lhs.nrows()
    }

    pub fn lhs(&self) -> &MaxPlusMatrix {
        &self.lhs
    }

    pub fn rhs(&self) -> &MaxPlusMatrix {
        &self.rhs
    }

    pub fn contains(&self, x: &MaxPlusVector) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::dims("constraint membership", self.dim(), x.len()));
        }
        Ok((0..self.nrows()).all(|i| {
            dot_slices(self.lhs.row(i), x.entries()) <= dot_slices(self.rhs.row(i), x.entries())
        }))
    }

    /// Generators, by intersecting the rows one at a time into the full space.
    pub fn to_cone_v(&self) -> ConeV {
        (0..self.nrows()).fold(ConeV::full(self.dim()), |cone, i| {
            cone.intersect_halfspace_unchecked(self.lhs.row(i), self.rhs.row(i))
        })
    }
}

/// A tropical polyhedron `Span(span) ⊕ Conv(conv)` in ℝ_max^n.
///
/// `Conv` of nothing is empty, so a polyhedron without conv generators is
/// the empty set and is stored with no span generators either. A cone viewed
/// as a polyhedron carries the single conv generator ε_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    span: Vec<MaxPlusVector>,
    conv: Vec<MaxPlusVector>,
}

impl Polyhedron {
    pub fn new(dim: usize, span: Vec<MaxPlusVector>, conv: Vec<MaxPlusVector>) -> Result<Self> {
        check_dims("span generator", dim, &span)?;
        check_dims("conv generator", dim, &conv)?;
        let mut conv = conv;
        sort_dedup(&mut conv);
        let mut span: Vec<_> = if conv.is_empty() {
            Vec::new()
        } else {
            span.iter().filter_map(normalize_by_max).collect()
        };
        sort_dedup(&mut span);
        Ok(Polyhedron { dim, span, conv })
    }

    pub fn empty(dim: usize) -> Self {
        Polyhedron {
            dim,
            span: Vec::new(),
            conv: Vec::new(),
        }
    }

    /// All of ℝ_max^n.
    pub fn whole(dim: usize) -> Self {
        Self::from_cone(&ConeV::full(dim))
    }

    /// `Span(cone) ⊕ {ε_n}`.
    pub fn from_cone(cone: &ConeV) -> Self {
        Polyhedron::new(
            cone.dim(),
            cone.generators().to_vec(),
            vec![MaxPlusVector::bottom(cone.dim())],
        )
        .expect("dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn span_generators(&self) -> &[MaxPlusVector] {
        &self.span
    }

    pub fn conv_generators(&self) -> &[MaxPlusVector] {
        &self.conv
    }

    pub fn is_empty(&self) -> bool {
        self.conv.is_empty()
    }

    /// The cone in ℝ_max^{n+1} whose slice at `x₁ = 0` is `self`.
    pub fn lift(&self) -> ConeV {
        let generators = self
            .span
            .iter()
            .map(|r| r.prepend(MaxPlus::Bottom))
            .chain(self.conv.iter().map(|e| e.prepend(MaxPlus::unit())))
            .collect();
        ConeV::canonical(self.dim + 1, generators)
    }

    pub fn contains(&self, x: &MaxPlusVector) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::dims("polyhedron membership", self.dim, x.len()));
        }
        self.lift().contains(&x.prepend(MaxPlus::unit()))
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &Polyhedron) -> Result<bool> {
        if other.dim != self.dim {
            return Err(Error::dims("polyhedron inclusion", self.dim, other.dim));
        }
        self.lift().includes(&other.lift())
    }

    pub fn same_set(&self, other: &Polyhedron) -> Result<bool> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    /// Same set with redundant generators removed.
    pub fn simplify(&self) -> Polyhedron {
        self.lift()
            .remove_redundant()
            .restrict_to_plane()
            .expect("lifted cone has dimension >= 2")
    }

    /// Checks the representation invariants, describing the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (kind, gens) in [("span", &self.span), ("conv", &self.conv)] {
            if let Some(g) = gens.iter().find(|g| g.len() != self.dim) {
                return Err(format!("{kind} generator {g} has dimension {}", g.len()));
            }
            if gens.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("{kind} generators are not strictly sorted"));
            }
        }
        if self.conv.is_empty() && !self.span.is_empty() {
            return Err("span generators without conv generators".into());
        }
        if let Some(r) = self
            .span
            .iter()
            .find(|r| normalize_by_max(r).as_ref() != Some(*r))
        {
            return Err(format!("span generator {r} is not normalized"));
        }
        Ok(())
    }
}
