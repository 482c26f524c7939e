//! LP relaxations: a bounded-variable simplex engine, lexicographic solves,
//! sensitivity analysis and the parametric generation of a relaxation's
//! nondominated frontier.

mod parametric;
mod simplex;

use alloc::vec;
use alloc::vec::Vec;

pub use parametric::{
    curve_from_engine, fr0_check, fr0_walk, fr3_check, fr3_walk, parametric_front, walk_front, DualBoundCurve, Fr0Outcome,
    FrontPiece, FrontWalk, WalkControl,
};

use crate::geometry::ObjPoint;
use crate::model::{Instance, Row};
use simplex::Simplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("LP relaxation is infeasible")]
    Infeasible,
    #[error("simplex failed to converge")]
    NumericalFailure,
    #[error("basis is not optimal for the requested objective")]
    NotOptimal,
}

/// Warm-start state: the basic columns (one per row) and the at-upper flag
/// of every column. Slack of row `i` is column `n + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpBasis {
    pub n: usize,
    pub m: usize,
    pub basic: Vec<usize>,
    pub at_upper: Vec<bool>,
}

/// Range `[alpha_lo, alpha_hi]` of weights for which the current basis stays
/// optimal for `min f1 + α f2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityInterval {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub basis: LpBasis,
}

/// An LP relaxation of one node together with its current basis.
#[derive(Debug, Clone)]
pub struct LpEngine {
    sx: Simplex,
    c1: Vec<f64>,
    c2: Vec<f64>,
    n_int: usize,
    /// Number of LP optimizations run on this engine.
    pub solves: usize,
}

impl LpEngine {
    /// Relaxation of `inst` with the given variable bounds plus `extra` rows.
    pub fn new(inst: &Instance, lower: &[f64], upper: &[f64], extra: &[Row]) -> Self {
        let n = inst.n();
        let m = inst.rows.len() + extra.len();
        let mut a = vec![0.0; m * n];
        let mut b = Vec::with_capacity(m);
        for (r, row) in inst.rows.iter().chain(extra.iter()).enumerate() {
            for &(j, v) in &row.coefs {
                a[r * n + j] += v;
            }
            b.push(row.rhs);
        }
        Self {
            sx: Simplex::new(m, n, a, b, lower.to_vec(), upper.to_vec()),
            c1: inst.c1.clone(),
            c2: inst.c2.clone(),
            n_int: inst.n_int,
            solves: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.sx.n
    }

    /// Replaces the structural bounds, keeping the current basis.
    pub fn set_bounds(&mut self, lower: &[f64], upper: &[f64]) {
        self.sx.set_structural_bounds(lower, upper);
    }

    pub fn lower(&self) -> &[f64] {
        &self.sx.lo[..self.sx.n]
    }

    pub fn upper(&self) -> &[f64] {
        &self.sx.up[..self.sx.n]
    }

    pub fn m(&self) -> usize {
        self.sx.m
    }

    pub fn n_int(&self) -> usize {
        self.n_int
    }

    pub fn c1(&self) -> &[f64] {
        &self.c1
    }

    pub fn c2(&self) -> &[f64] {
        &self.c2
    }

    /// Reuses `basis` if it is compatible. Rows appended since the basis was
    /// taken get their slacks as basic variables.
    pub fn warm_start(&mut self, basis: &LpBasis) {
        let (n, m) = (self.sx.n, self.sx.m);
        if basis.n != n || basis.m > m {
            return;
        }
        let mut basic = basis.basic.clone();
        basic.extend((basis.m..m).map(|i| n + i));
        let mut at_up = basis.at_upper.clone();
        at_up.resize(n + m, false);
        self.sx.set_basis(&basic, &at_up);
    }

    pub fn basis(&self) -> LpBasis {
        LpBasis {
            n: self.sx.n,
            m: self.sx.m,
            basic: self.sx.basis.clone(),
            at_upper: self.sx.at_up.clone(),
        }
    }

    pub fn x(&self) -> Vec<f64> {
        self.sx.structural_x()
    }

    pub fn image(&self) -> ObjPoint {
        let x = self.x();
        ObjPoint::new(dot(&self.c1, &x), dot(&self.c2, &x))
    }

    pub fn is_integral(&self) -> bool {
        (0..self.n_int).all(|j| crate::tol::is_integral(self.sx.value(j)))
    }

    pub fn pivots(&self) -> usize {
        self.sx.pivots
    }

    /// Minimizes `w1·f1 + w2·f2`.
    pub fn solve(&mut self, w1: f64, w2: f64) -> Result<f64, LpError> {
        let c = self.weighted(w1, w2);
        self.solves += 1;
        self.sx.optimize(&c, &[])?;
        Ok(dot(&c, &self.x()))
    }

    /// Minimizes an arbitrary cost vector over the structural columns.
    pub fn solve_cost(&mut self, cost: &[f64]) -> Result<f64, LpError> {
        self.solves += 1;
        self.sx.optimize(cost, &[])?;
        Ok(dot(cost, &self.x()))
    }

    /// Lexicographic minimum: `first` (1 or 2) is minimized, then the other
    /// objective over the optimal face of the first.
    pub fn solve_lex(&mut self, first: u8) -> Result<ObjPoint, LpError> {
        let (p, q) = if first == 1 {
            (self.c1.clone(), self.c2.clone())
        } else {
            (self.c2.clone(), self.c1.clone())
        };
        self.solves += 1;
        self.sx.optimize(&p, &[])?;
        self.sx.optimize(&q, &[&p])?;
        Ok(self.image())
    }

    /// Minimizes `cost` over the optimal face of `guard`, assuming the
    /// current basis is optimal for `guard`.
    pub(crate) fn solve_on_face(&mut self, cost: &[f64], guard: &[f64]) -> Result<(), LpError> {
        self.sx.optimize(cost, &[guard])
    }

    pub(crate) fn weighted(&self, w1: f64, w2: f64) -> Vec<f64> {
        self.c1.iter().zip(&self.c2).map(|(a, b)| w1 * a + w2 * b).collect()
    }

    /// Reduced costs of both objectives and the movement direction of every
    /// nonbasic column (`0` for basic or fixed columns).
    pub(crate) fn pricing(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let d1 = self.sx.reduced_costs(&self.c1);
        let d2 = self.sx.reduced_costs(&self.c2);
        let dir = (0..self.sx.ncol())
            .map(|j| if self.sx.is_basic(j) { 0.0 } else { self.sx.move_dir(j) })
            .collect();
        (d1, d2, dir)
    }

    /// Interval of `α ≥ 0` for which the current basis is optimal for
    /// `min f1 + α f2`; errors if it is not optimal at `alpha` itself.
    pub fn sensitivity_interval(&self, alpha: f64) -> Result<SensitivityInterval, LpError> {
        let (d1, d2, dir) = self.pricing();
        let tol = 1e-9 * (1.0 + max_abs(&self.c1) + alpha * max_abs(&self.c2)) * 10.0;
        let mut lo: f64 = 0.0;
        let mut hi = f64::INFINITY;
        for j in 0..dir.len() {
            let s = dir[j];
            if s == 0.0 {
                continue;
            }
            let (g, h) = (s * d1[j], s * d2[j]);
            if g + alpha * h < -tol {
                return Err(LpError::NotOptimal);
            }
            // need g + a h >= 0
            if h < 0.0 {
                hi = hi.min((g / -h).max(0.0));
            } else if h > 0.0 {
                lo = lo.max(-g / h);
            } else if g < -tol {
                return Err(LpError::NotOptimal);
            }
        }
        Ok(SensitivityInterval {
            alpha_lo: lo.min(alpha),
            alpha_hi: hi.max(alpha),
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, c| a.max(c.abs()))
}

/// Solves `min w1·f1 + w2·f2` over the relaxation with the given bounds and
/// extra rows, optionally warm-started.
pub fn lp_solve(
    inst: &Instance,
    weights: (f64, f64),
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
    warm: Option<&LpBasis>,
) -> Result<LpSolution, LpError> {
    let mut e = LpEngine::new(inst, lower, upper, extra_rows);
    if let Some(b) = warm {
        e.warm_start(b);
    }
    let value = e.solve(weights.0, weights.1)?;
    Ok(LpSolution {
        x: e.x(),
        value,
        basis: e.basis(),
    })
}

/// Sensitivity interval of `basis` for `min f1 + α f2` at `alpha`.
pub fn sensitivity_interval(
    inst: &Instance,
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
    basis: &LpBasis,
    alpha: f64,
) -> Result<SensitivityInterval, LpError> {
    let mut e = LpEngine::new(inst, lower, upper, extra_rows);
    e.warm_start(basis);
    e.sensitivity_interval(alpha)
}
