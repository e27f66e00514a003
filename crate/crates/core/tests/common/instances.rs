//! Random instances shared by the property suites and acceptance checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treach_core::{Polyhedron, PseudoHalfSpace, SystemModel, TargetSet};

use super::*;

/// A random pseudo half-space in ℝ_max^{n+1}, entries scaled by `unit`.
pub struct Instance {
    pub c: IVec,
    pub d: IVec,
    pub u: Vec<IVec>,
    /// Samples of `Span(u) ∩ {y₁ = 0}` for the oracle.
    pub ys: Vec<IVec>,
}

impl Instance {
    pub fn random(rng: &mut impl Rng, n: usize, unit: i64) -> Self {
        let times = |v: IVec| -> IVec { v.into_iter().map(|x| x.map(|x| x * unit)).collect() };
        let c = times(rand_vec(rng, n + 1, -3, 3, 0.4));
        let d = times(rand_vec(rng, n + 1, -3, 3, 0.4));
        let k = rng.gen_range(1..=3);
        let u: Vec<IVec> = (0..k)
            .map(|_| {
                let mut g = vec![Some(0)];
                g.extend(times(rand_vec(rng, n, -3, 3, 0.25)));
                g
            })
            .collect();
        let lambdas: Vec<I> = lambda_grid(-6, 0)
            .into_iter()
            .map(|l| l.map(|l| l * unit))
            .collect();
        let ys = combos(&u, &lambdas, true);
        Instance { c, d, u, ys }
    }

    pub fn lib(&self) -> PseudoHalfSpace {
        PseudoHalfSpace::new(
            vec_from_i(&self.c),
            vec_from_i(&self.d),
            self.u.iter().map(|g| vec_from_i(g)).collect(),
        )
        .unwrap()
    }

    pub fn member(&self, x: &[I]) -> bool {
        pseudo_member(&self.c, &self.d, &self.ys, x)
    }
}

/// Lifted grid points with first coordinate in {0, ε}.
pub fn lifted_grid(n: usize, values: &[I]) -> Vec<IVec> {
    grid(n, values)
        .into_iter()
        .flat_map(|tail| {
            [None, Some(0)].into_iter().map(move |head| {
                let mut x = vec![head];
                x.extend(tail.iter().copied());
                x
            })
        })
        .collect()
}

pub fn random_lifted(rng: &mut impl Rng, n: usize, unit: i64) -> IVec {
    let mut x = vec![if rng.gen_bool(0.7) { Some(0) } else { None }];
    x.extend(
        rand_vec(rng, n, -6, 6, 0.2)
            .into_iter()
            .map(|v| v.map(|v| v * unit)),
    );
    x
}

/// Rescales so the first coordinate is 0 or ε, as `member` requires.
pub fn normalized(x: &[I]) -> treach_core::MaxPlusVector {
    match x[0] {
        Some(t) => vec_from_i(&scale(Some(-t), x)),
        None => vec_from_i(x),
    }
}

/// A random integer instance: system, admissible sets and target rows.
#[derive(Debug)]
pub struct Sys {
    pub n: usize,
    pub m: usize,
    pub a: Vec<IVec>,
    pub b: Vec<IVec>,
    pub c: Vec<IVec>,
    pub u_span: Vec<IVec>,
    pub u_conv: Vec<IVec>,
    pub w_span: Vec<IVec>,
    pub w_conv: Vec<IVec>,
    pub lhs: Vec<IVec>,
    pub rhs: Vec<IVec>,
}

impl Sys {
    pub fn random(rng: &mut impl Rng, with_rays: bool) -> Self {
        let n = rng.gen_range(1..=2);
        let m = 1;
        let rows = rng.gen_range(1..=2);
        let some = |rng: &mut ChaCha8Rng| rng.gen_range(1..=2);
        let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
        let u_conv_count = some(&mut r);
        let w_conv_count = some(&mut r);
        Sys {
            n,
            m,
            a: rand_mat(rng, n, n, -3, 3, 0.3),
            b: rand_mat(rng, n, m, -3, 3, 0.3),
            c: rand_mat(rng, n, n, -3, 3, 0.4),
            u_span: (0..rng.gen_range(0..=1))
                .map(|_| rand_vec(rng, m, -3, 3, 0.0))
                .collect(),
            u_conv: (0..u_conv_count)
                .map(|_| rand_vec(rng, m, -3, 3, 0.3))
                .collect(),
            w_span: if with_rays {
                (0..rng.gen_range(0..=1))
                    .map(|_| rand_vec(rng, n, -3, 3, 0.3))
                    .collect()
            } else {
                Vec::new()
            },
            w_conv: (0..w_conv_count)
                .map(|_| rand_vec(rng, n, -3, 3, 0.2))
                .collect(),
            lhs: Vec::new(),
            rhs: Vec::new(),
        }
        .with_target(rng, rows)
    }

    /// Mostly difference constraints `x_i + a ≤ x_j + b` (coordinate 0 is
    /// the affine one), occasionally a dense random row.
    pub fn with_target(mut self, rng: &mut impl Rng, rows: usize) -> Self {
        let n = self.n;
        for _ in 0..rows {
            if rng.gen_bool(0.3) {
                self.lhs.push(rand_vec(rng, n + 1, -3, 3, 0.4));
                self.rhs.push(rand_vec(rng, n + 1, -3, 3, 0.4));
                continue;
            }
            let i = rng.gen_range(0..=n);
            let j = (i + rng.gen_range(1..=n)) % (n + 1);
            let mut l = vec![None; n + 1];
            let mut r = vec![None; n + 1];
            l[i] = Some(rng.gen_range(-3..=3));
            r[j] = Some(rng.gen_range(-3..=3));
            self.lhs.push(l);
            self.rhs.push(r);
        }
        self
    }

    pub fn target(&self) -> TargetSet {
        TargetSet::new(
            mat_from_i(self.n + 1, &self.lhs),
            mat_from_i(self.n + 1, &self.rhs),
        )
        .unwrap()
    }

    pub fn control(&self) -> Polyhedron {
        poly_from_i(self.m, &self.u_span, &self.u_conv)
    }

    pub fn model(&self) -> SystemModel {
        SystemModel::new(
            mat_from_i(self.n, &self.a),
            mat_from_i(self.m, &self.b),
            mat_from_i(self.n, &self.c),
            self.control(),
            poly_from_i(self.n, &self.w_span, &self.w_conv),
        )
        .unwrap()
    }

    pub fn in_target(&self, x: &[I]) -> bool {
        let mut lifted = vec![Some(0)];
        lifted.extend_from_slice(x);
        rows_ok(&self.lhs, &self.rhs, &lifted)
    }

    pub fn controls(&self) -> Vec<IVec> {
        polyhedron_points(
            &self.u_span,
            &self.u_conv,
            &lambda_grid(-12, 12),
            &lambda_grid(-12, 0),
        )
    }

    /// Disturbance samples `C ⊗ w`: all conv combinations on a grid plus
    /// rays scaled by λ ∈ {−4..0}.
    pub fn disturbances(&self) -> Vec<IVec> {
        let image =
            |gens: &[IVec]| -> Vec<IVec> { gens.iter().map(|g| mat_vec(&self.c, g)).collect() };
        polyhedron_points(
            &image(&self.w_span),
            &image(&self.w_conv),
            &lambda_grid(-4, 0),
            &lambda_grid(-3, 0),
        )
    }

    /// `x ⊕ w ∈ target` for every sampled disturbance.
    pub fn robust(&self, x: &[I], ws: &[IVec]) -> bool {
        ws.iter().all(|w| self.in_target(&vsum(x, w)))
    }

    pub fn bu(&self, u: &[I]) -> IVec {
        mat_vec(&self.b, u)
    }
}

pub fn state_grid(n: usize) -> Vec<IVec> {
    grid(n, &lambda_grid(-6, 6))
}

/// Generators plus a few points along each ray, as integer test points.
pub fn sample_points(p: &Polyhedron) -> Vec<IVec> {
    let conv: Vec<IVec> = p.conv_generators().iter().map(vec_to_i).collect();
    let span: Vec<IVec> = p.span_generators().iter().map(vec_to_i).collect();
    let mut out = conv.clone();
    for e in &conv {
        for r in &span {
            for l in [0, 3] {
                out.push(vsum(e, &scale(Some(l), r)));
            }
        }
    }
    out
}
