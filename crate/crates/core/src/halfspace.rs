//! Pseudo half-spaces and the incremental generating-set computation.
//!
//! A pseudo half-space `H = ℋ^𝒰_{c,d}` in ℝ_max^{n+1} is the set of `x` such
//! that `(c | x ⊕ y) ≤ (d | x ⊕ y)` for every `y ∈ 𝒰` with `y₁ = x₁`. With
//! `𝒰 = Span(U)` and every `u ∈ U` having `u₁ = 0`, `H` is the intersection
//! over `u ∈ U` of the ordinary half-spaces
//! `(c | x ⊕ x₁·u) ≤ (d | x ⊕ x₁·u)`, so membership and the maximal step `ρ`
//! only ever look at the finitely many generators in `U`.

use crate::error::{Error, Result};
use crate::maxplus::{MaxPlus, MaxPlusMatrix, MaxPlusVector};
use crate::sets::ConeV;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoHalfSpace {
    c: MaxPlusVector,
    d: MaxPlusVector,
    u_gens: Vec<MaxPlusVector>,
}

/// Both sides of the constraint attached to each `u`, evaluated at
/// `x ⊕ x₁·u`.
struct Profile {
    lhs: Vec<MaxPlus>,
    rhs: Vec<MaxPlus>,
}

impl Profile {
    fn is_member(&self) -> bool {
        self.lhs.iter().zip(&self.rhs).all(|(l, r)| l <= r)
    }
}

impl PseudoHalfSpace {
    /// Fails unless `c`, `d` and every generator share one dimension, there
    /// is at least one generator, and every generator starts with 0.
    pub fn new(c: MaxPlusVector, d: MaxPlusVector, u_gens: Vec<MaxPlusVector>) -> Result<Self> {
        let dim = c.len();
        if d.len() != dim {
            return Err(Error::dims("pseudo half-space d", dim, d.len()));
        }
        if dim == 0 {
            return Err(Error::dims("pseudo half-space", ">= 1", 0));
        }
        if u_gens.is_empty() {
            return Err(Error::PreconditionViolated(
                "pseudo half-space needs at least one generator".into(),
            ));
        }
        for (index, u) in u_gens.iter().enumerate() {
            if u.len() != dim {
                return Err(Error::dims(
                    format!("pseudo half-space generator {index}"),
                    dim,
                    u.len(),
                ));
            }
            if !u[0].is_unit() {
                return Err(Error::UnnormalizedGenerators {
                    index,
                    value: u[0].clone(),
                });
            }
        }
        Ok(PseudoHalfSpace { c, d, u_gens })
    }

    /// The ordinary half-space `(c|x) ≤ (d|x)`, as `𝒰 = Span((0, ε, …, ε))`.
    pub fn ordinary(c: MaxPlusVector, d: MaxPlusVector) -> Result<Self> {
        let anchor = MaxPlusVector::unit(c.len().max(1), 0);
        Self::new(c, d, vec![anchor])
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &MaxPlusVector {
        &self.c
    }

    pub fn d(&self) -> &MaxPlusVector {
        &self.d
    }

    pub fn u_generators(&self) -> &[MaxPlusVector] {
        &self.u_gens
    }

    fn check_input(&self, x: &MaxPlusVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::dims("pseudo half-space point", self.dim(), x.len()));
        }
        if x[0].is_bottom() || x[0].is_unit() {
            Ok(())
        } else {
            Err(Error::UnnormalizedInput(x[0].clone()))
        }
    }

    fn profile(&self, x: &MaxPlusVector) -> Profile {
        let head = &x[0];
        let (lhs, rhs) = self
            .u_gens
            .iter()
            .map(|u| {
                let shifted = x.oplus_unchecked(&u.scale(head));
                (
                    self.c.dot_unchecked(&shifted),
                    self.d.dot_unchecked(&shifted),
                )
            })
            .unzip();
        Profile { lhs, rhs }
    }

    /// `v ∈ H`, for `v` with first coordinate 0 or ε.
    ///
    /// With `v₁ = ε` the only admissible `y` is ε, so this is `(c|v) ≤ (d|v)`.
    pub fn member(&self, v: &MaxPlusVector) -> Result<bool> {
        self.check_input(v)?;
        Ok(self.profile(v).is_member())
    }

    /// `max{λ : v ⊕ λ·w ∈ H}` for `v ∈ H`, `w ∉ H`.
    ///
    /// Equals the minimum, over the generators `u` whose half-space rejects
    /// `w`, of `(d | v ⊕ v₁·u) − (c | w ⊕ w₁·u)`. A result of ε means no
    /// finite multiple of `w` can be added to `v`.
    pub fn rho(&self, v: &MaxPlusVector, w: &MaxPlusVector) -> Result<MaxPlus> {
        self.check_input(v)?;
        self.check_input(w)?;
        let v_profile = self.profile(v);
        if !v_profile.is_member() {
            return Err(Error::PreconditionViolated(format!(
                "{v} is not in the pseudo half-space"
            )));
        }
        rho_from_profiles(&v_profile, &self.profile(w)).ok_or_else(|| {
            Error::PreconditionViolated(format!("{w} already lies in the pseudo half-space"))
        })
    }
}

fn rho_from_profiles(v: &Profile, w: &Profile) -> Option<MaxPlus> {
    w.lhs
        .iter()
        .zip(&w.rhs)
        .zip(&v.rhs)
        .filter(|((w_lhs, w_rhs), _)| w_lhs > w_rhs)
        .map(|((w_lhs, _), v_rhs)| v_rhs.residual(w_lhs).expect("rejected side is finite"))
        .min()
}

/// The matrix `M_u` with `M_u ⊗ x = x ⊕ x₁·u`: first column `u` (top entry
/// `u₁ ⊕ 0`), 0 on the rest of the diagonal, ε elsewhere.
pub fn mu_matrix(u: &MaxPlusVector) -> Result<MaxPlusMatrix> {
    let n = u.len();
    if n == 0 {
        return Err(Error::dims("M_u generator", ">= 1", 0));
    }
    let mut m = MaxPlusMatrix::identity(n);
    m.set(0, 0, u[0].oplus(&MaxPlus::unit()));
    for i in 1..n {
        m.set(i, 0, u[i].clone());
    }
    Ok(m)
}

/// Generators of `Span(cone) ∩ H`: the members of the generating set plus
/// `v ⊕ ρ(v,w)·w` for every member `v` and non-member `w`.
///
/// When no generator is a member the result is `{ε}`.
pub fn intersect_pseudo(cone: &ConeV, h: &PseudoHalfSpace) -> Result<ConeV> {
    if cone.dim() != h.dim() {
        return Err(Error::dims(
            "pseudo half-space intersection",
            cone.dim(),
            h.dim(),
        ));
    }
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for g in cone.generators() {
        h.check_input(g)?;
        let profile = h.profile(g);
        if profile.is_member() {
            inside.push((g, profile));
        } else {
            outside.push((g, profile));
        }
    }
    if outside.is_empty() {
        return Ok(cone.clone());
    }
    let mut generators: Vec<MaxPlusVector> = inside.iter().map(|(v, _)| (*v).clone()).collect();
    for (v, v_profile) in &inside {
        for (w, w_profile) in &outside {
            let rho = rho_from_profiles(v_profile, w_profile).expect("w is rejected by some u");
            if rho.is_finite() {
                generators.push(v.oplus_unchecked(&w.scale(&rho)));
            }
        }
    }
    Ok(ConeV::new(cone.dim(), generators)?.remove_redundant())
}

/// Generators of `⋂ᵢ Hᵢ ⊆ ℝ_max^{n+1}`, folding the constraints in order
/// starting from the canonical basis.
pub fn intersect_all(constraints: &[PseudoHalfSpace], n: usize) -> Result<ConeV> {
    let dim = n + 1;
    constraints.iter().try_fold(ConeV::full(dim), |cone, h| {
        if h.dim() != dim {
            return Err(Error::dims("pseudo half-space list", dim, h.dim()));
        }
        intersect_pseudo(&cone, h)
    })
}
