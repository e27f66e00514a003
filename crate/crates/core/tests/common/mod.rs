//! Brute-force reference semantics over small integers.
//!
//! Everything here is a separate, deliberately naive max-plus implementation
//! (`None` is ε) so the library is checked against definitions, not against
//! itself. Quantifiers over infinite sets are replaced by coefficient grids.
#![allow(dead_code)]

pub mod instances;
#[allow(unused_imports)]
pub use instances::*;

use rand::Rng;
use treach_core::{MaxPlus, MaxPlusMatrix, MaxPlusVector, Polyhedron};

pub type I = Option<i64>;
pub type IVec = Vec<I>;

pub fn oplus(a: I, b: I) -> I {
    a.max(b)
}

pub fn otimes(a: I, b: I) -> I {
    Some(a? + b?)
}

pub fn dot(a: &[I], b: &[I]) -> I {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| otimes(x, y))
        .max()
        .unwrap_or(None)
}

pub fn vsum(a: &[I], b: &[I]) -> IVec {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| oplus(x, y)).collect()
}

pub fn scale(l: I, a: &[I]) -> IVec {
    a.iter().map(|&x| otimes(l, x)).collect()
}

pub fn mat_vec(m: &[IVec], x: &[I]) -> IVec {
    m.iter().map(|row| dot(row, x)).collect()
}

/// `lhs ⊗ x ≤ rhs ⊗ x` row by row.
pub fn rows_ok(lhs: &[IVec], rhs: &[IVec], x: &[I]) -> bool {
    lhs.iter().zip(rhs).all(|(l, r)| dot(l, x) <= dot(r, x))
}

/// Every `⊕ λ_j g_j` with `λ_j` drawn from `lambdas`; with `bounded`, only
/// combinations whose largest coefficient is exactly 0 (and at least one
/// generator) are kept.
pub fn combos(gens: &[IVec], lambdas: &[I], bounded: bool) -> Vec<IVec> {
    let dim = gens.first().map_or(0, Vec::len);
    let mut out: Vec<(IVec, I)> = vec![(vec![None; dim], None)];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * lambdas.len());
        for (acc, top) in &out {
            for &l in lambdas {
                next.push((vsum(acc, &scale(l, g)), oplus(*top, l)));
            }
        }
        next.sort();
        next.dedup();
        out = next;
    }
    let mut points: Vec<IVec> = out
        .into_iter()
        .filter(|(_, top)| !bounded || *top == Some(0))
        .map(|(p, _)| p)
        .collect();
    points.sort();
    points.dedup();
    points
}

pub fn lambda_grid(lo: i64, hi: i64) -> Vec<I> {
    std::iter::once(None).chain((lo..=hi).map(Some)).collect()
}

/// Points of a polyhedron `Span(span) ⊕ Conv(conv)` on a coefficient grid.
pub fn polyhedron_points(span: &[IVec], conv: &[IVec], ray: &[I], point: &[I]) -> Vec<IVec> {
    if conv.is_empty() {
        return Vec::new();
    }
    let bounded = combos(conv, point, true);
    let rays = if span.is_empty() {
        vec![vec![None; conv[0].len()]]
    } else {
        combos(span, ray, false)
    };
    let mut out: Vec<IVec> = bounded
        .iter()
        .flat_map(|b| rays.iter().map(move |r| vsum(b, r)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// All vectors of length `n` with entries from `values`.
pub fn grid(n: usize, values: &[I]) -> Vec<IVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: IVec| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Membership in the pseudo half-space `{x : ∀y ∈ Span(u), y₁ = x₁ ⇒
/// (c | x ⊕ y) ≤ (d | x ⊕ y)}` for `x₁ ∈ {0, ε}`. `ys` are samples of
/// `Span(u) ∩ {y₁ = 0}`.
pub fn pseudo_member(c: &[I], d: &[I], ys: &[IVec], x: &[I]) -> bool {
    match x[0] {
        None => dot(c, x) <= dot(d, x),
        Some(0) => ys.iter().all(|y| {
            let z = vsum(x, y);
            dot(c, &z) <= dot(d, &z)
        }),
        Some(t) => {
            let shifted = scale(Some(-t), x);
            pseudo_member(c, d, ys, &shifted)
        }
    }
}

pub fn to_i(x: &MaxPlus) -> I {
    match x {
        MaxPlus::Bottom => None,
        MaxPlus::Finite(r) => {
            assert!(r.is_integer(), "non-integer value {x} in integer oracle");
            Some(r.to_integer().try_into().expect("small integer"))
        }
    }
}

pub fn from_i(x: I) -> MaxPlus {
    x.map_or(MaxPlus::Bottom, MaxPlus::int)
}

pub fn vec_to_i(v: &MaxPlusVector) -> IVec {
    v.iter().map(to_i).collect()
}

pub fn vec_from_i(v: &[I]) -> MaxPlusVector {
    v.iter().map(|&x| from_i(x)).collect()
}

pub fn mat_to_i(m: &MaxPlusMatrix) -> Vec<IVec> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(to_i).collect())
        .collect()
}

pub fn mat_from_i(cols: usize, rows: &[IVec]) -> MaxPlusMatrix {
    MaxPlusMatrix::from_rows(
        cols,
        rows.iter()
            .map(|r| r.iter().map(|&x| from_i(x)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn poly_from_i(dim: usize, span: &[IVec], conv: &[IVec]) -> Polyhedron {
    Polyhedron::new(
        dim,
        span.iter().map(|g| vec_from_i(g)).collect(),
        conv.iter().map(|g| vec_from_i(g)).collect(),
    )
    .unwrap()
}

/// A random entry in `[lo, hi]`, ε with probability `p_bottom`.
pub fn rand_entry(rng: &mut impl Rng, lo: i64, hi: i64, p_bottom: f64) -> I {
    if rng.gen_bool(p_bottom) {
        None
    } else {
        Some(rng.gen_range(lo..=hi))
    }
}

pub fn rand_vec(rng: &mut impl Rng, n: usize, lo: i64, hi: i64, p_bottom: f64) -> IVec {
    (0..n).map(|_| rand_entry(rng, lo, hi, p_bottom)).collect()
}

pub fn rand_mat(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    p_bottom: f64,
) -> Vec<IVec> {
    (0..rows)
        .map(|_| rand_vec(rng, cols, lo, hi, p_bottom))
        .collect()
}
