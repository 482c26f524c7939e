//! Dense bounded-variable primal simplex on the tableau `B⁻¹[A I | b]`.
//!
//! Columns `0..n` are structural variables with finite bounds, columns
//! `n..n+m` are row slacks with bounds `[0, +inf)`. There are no artificial
//! variables: phase 1 minimizes the sum of bound violations of the basic
//! variables starting from whatever basis is current, so a warm basis that
//! became infeasible after a bound change is repaired in place.

use alloc::vec;
use alloc::vec::Vec;

use super::LpError;
use crate::tol;

const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 100;
const BLAND_AFTER: usize = 50;

#[derive(Debug, Clone)]
pub(crate) struct Simplex {
    pub m: usize,
    pub n: usize,
    ncol: usize,
    /// Original constraint matrix, row-major `m × n`.
    a: Vec<f64>,
    b: Vec<f64>,
    pub lo: Vec<f64>,
    pub up: Vec<f64>,
    /// `B⁻¹[A I | b]`, row-major `m × (ncol + 1)`.
    tab: Vec<f64>,
    pub basis: Vec<usize>,
    /// Row of a basic column, `usize::MAX` for nonbasic ones.
    pos: Vec<usize>,
    pub at_up: Vec<bool>,
    beta: Vec<f64>,
    since_refactor: usize,
    pub pivots: usize,
}

/// Outcome of one pricing + ratio test step.
enum Step {
    Optimal,
    Moved { degenerate: bool },
}

impl Simplex {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>, lo: Vec<f64>, up: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), m * n);
        let ncol = n + m;
        let mut lo_all = lo;
        let mut up_all = up;
        lo_all.resize(ncol, 0.0);
        up_all.resize(ncol, f64::INFINITY);
        let mut s = Self {
            m,
            n,
            ncol,
            a,
            b,
            lo: lo_all,
            up: up_all,
            tab: Vec::new(),
            basis: (n..ncol).collect(),
            pos: vec![usize::MAX; ncol],
            at_up: vec![false; ncol],
            beta: vec![0.0; m],
            since_refactor: 0,
            pivots: 0,
        };
        s.slack_basis();
        s
    }

    #[inline]
    fn w(&self) -> usize {
        self.ncol + 1
    }

    pub fn ncol(&self) -> usize {
        self.ncol
    }

    pub fn is_basic(&self, j: usize) -> bool {
        self.pos[j] != usize::MAX
    }

    /// Current value of column `j`.
    #[inline]
    pub fn value(&self, j: usize) -> f64 {
        let p = self.pos[j];
        if p != usize::MAX {
            self.beta[p]
        } else if self.at_up[j] {
            self.up[j]
        } else {
            self.lo[j]
        }
    }

    pub fn structural_x(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.value(j)).collect()
    }

    pub fn set_structural_bounds(&mut self, lo: &[f64], up: &[f64]) {
        self.lo[..self.n].copy_from_slice(lo);
        self.up[..self.n].copy_from_slice(up);
        self.compute_beta();
    }

    fn slack_basis(&mut self) {
        let (m, n, ncol) = (self.m, self.n, self.ncol);
        self.basis = (n..ncol).collect();
        self.pos.iter_mut().for_each(|p| *p = usize::MAX);
        for (r, &j) in self.basis.iter().enumerate() {
            self.pos[j] = r;
        }
        for j in n..ncol {
            self.at_up[j] = false;
        }
        let w = ncol + 1;
        self.tab = vec![0.0; m * w];
        for r in 0..m {
            self.tab[r * w..r * w + n].copy_from_slice(&self.a[r * n..(r + 1) * n]);
            self.tab[r * w + n + r] = 1.0;
            self.tab[r * w + ncol] = self.b[r];
        }
        self.since_refactor = 0;
        self.compute_beta();
    }

    /// Installs a basis given as the list of basic columns (one per row) and
    /// the at-upper flags of all columns. Falls back to the slack basis if
    /// the list is malformed or numerically singular.
    pub fn set_basis(&mut self, basic: &[usize], at_up: &[bool]) {
        for j in 0..self.ncol {
            let up_ok = self.up[j].is_finite();
            self.at_up[j] = at_up.get(j).copied().unwrap_or(false) && up_ok;
        }
        let mut seen = vec![false; self.ncol];
        let ok = basic.len() == self.m
            && basic.iter().all(|&j| {
                let fresh = j < self.ncol && !seen[j];
                if fresh {
                    seen[j] = true;
                }
                fresh
            });
        if !ok {
            self.slack_basis();
            return;
        }
        self.basis = basic.to_vec();
        if !self.refactor() {
            self.slack_basis();
        }
    }

    /// Rebuilds the tableau from the original data for the current basis
    /// list using Gauss-Jordan elimination with partial pivoting.
    /// Returns false if the basis matrix is singular.
    fn refactor(&mut self) -> bool {
        let (m, n, ncol) = (self.m, self.n, self.ncol);
        let w = ncol + 1;
        let mut t = vec![0.0; m * w];
        for r in 0..m {
            t[r * w..r * w + n].copy_from_slice(&self.a[r * n..(r + 1) * n]);
            t[r * w + n + r] = 1.0;
            t[r * w + ncol] = self.b[r];
        }
        let mut row_of = vec![usize::MAX; m];
        let mut used = vec![false; m];
        for (k, &j) in self.basis.iter().enumerate() {
            let mut best = usize::MAX;
            let mut bv = 1e-11;
            for r in 0..m {
                if !used[r] {
                    let v = t[r * w + j].abs();
                    if v > bv {
                        bv = v;
                        best = r;
                    }
                }
            }
            if best == usize::MAX {
                return false;
            }
            used[best] = true;
            row_of[k] = best;
            pivot_rows(&mut t, w, best, j);
        }
        // reorder rows so that row k holds basic column basis[k]
        let mut nt = vec![0.0; m * w];
        for k in 0..m {
            let r = row_of[k];
            nt[k * w..(k + 1) * w].copy_from_slice(&t[r * w..(r + 1) * w]);
        }
        self.tab = nt;
        self.pos.iter_mut().for_each(|p| *p = usize::MAX);
        for (k, &j) in self.basis.iter().enumerate() {
            self.pos[j] = k;
            self.at_up[j] = false;
        }
        self.since_refactor = 0;
        self.compute_beta();
        true
    }

    fn compute_beta(&mut self) {
        let w = self.w();
        let ncol = self.ncol;
        let nonbasic: Vec<(usize, f64)> = (0..ncol)
            .filter(|&j| self.pos[j] == usize::MAX)
            .map(|j| (j, if self.at_up[j] { self.up[j] } else { self.lo[j] }))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        for r in 0..self.m {
            let row = &self.tab[r * w..(r + 1) * w];
            let mut v = row[ncol];
            for &(j, x) in &nonbasic {
                v -= row[j] * x;
            }
            self.beta[r] = v;
        }
    }

    fn pivot(&mut self, r: usize, j: usize, leave_at_up: bool) {
        let w = self.w();
        pivot_rows(&mut self.tab, w, r, j);
        let leaving = self.basis[r];
        self.pos[leaving] = usize::MAX;
        self.at_up[leaving] = leave_at_up;
        self.basis[r] = j;
        self.pos[j] = r;
        self.at_up[j] = false;
        self.pivots += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
            // keep the incrementally updated tableau; next refactor retries
            self.since_refactor = 0;
        }
        self.compute_beta();
    }

    #[inline]
    fn feas_tol(bound: f64) -> f64 {
        1e-9 * (1.0 + bound.abs())
    }

    /// Largest bound violation among basic variables.
    pub fn max_violation(&self) -> f64 {
        let mut v: f64 = 0.0;
        for r in 0..self.m {
            let j = self.basis[r];
            let x = self.beta[r];
            v = v.max(self.lo[j] - x).max(x - self.up[j]);
        }
        v
    }

    /// Reduced costs `c_j - c_B·B⁻¹a_j` for every column (zero for basics).
    pub fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let w = self.w();
        let mut d: Vec<f64> = (0..self.ncol).map(|j| cost.get(j).copied().unwrap_or(0.0)).collect();
        for r in 0..self.m {
            let cb = cost.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb == 0.0 {
                continue;
            }
            let row = &self.tab[r * w..r * w + self.ncol];
            for (dj, t) in d.iter_mut().zip(row) {
                *dj -= cb * t;
            }
        }
        for &j in &self.basis {
            d[j] = 0.0;
        }
        d
    }

    /// Direction in which nonbasic `j` may move: `+1` from lower, `-1` from
    /// upper, `0` if fixed.
    #[inline]
    pub fn move_dir(&self, j: usize) -> f64 {
        if self.up[j] - self.lo[j] <= 0.0 {
            0.0
        } else if self.at_up[j] {
            -1.0
        } else {
            1.0
        }
    }

    /// Ratio test for entering column `j` moving in direction `dir`.
    /// With `phase1`, infeasible basics block on reaching their violated
    /// bound. Returns `(theta, leaving row or None for a bound flip,
    /// leaving goes to upper)`.
    fn ratio(&self, j: usize, dir: f64, phase1: bool, bland: bool) -> Option<(f64, Option<usize>, bool)> {
        let mut best_t = self.up[j] - self.lo[j];
        let mut best: Option<usize> = None;
        let mut best_up = false;
        let mut best_piv = 0.0;
        let w = self.w();
        for r in 0..self.m {
            let alpha = self.tab[r * w + j] * dir;
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let k = self.basis[r];
            let x = self.beta[r];
            let (lo, up) = (self.lo[k], self.up[k]);
            // basic moves by -alpha * theta
            let cand = if alpha > 0.0 {
                if phase1 && x > up + Self::feas_tol(up) {
                    Some(((x - up) / alpha, true))
                } else if phase1 && x < lo - Self::feas_tol(lo) {
                    None
                } else {
                    Some((((x - lo) / alpha).max(0.0), false))
                }
            } else if phase1 && x < lo - Self::feas_tol(lo) {
                Some(((lo - x) / -alpha, false))
            } else if phase1 && x > up + Self::feas_tol(up) {
                None
            } else if up.is_finite() {
                Some((((up - x) / -alpha).max(0.0), true))
            } else {
                None
            };
            if let Some((t, to_up)) = cand {
                let piv = alpha.abs();
                let better = if t < best_t - 1e-12 {
                    true
                } else if t <= best_t + 1e-12 {
                    match best {
                        None => false,
                        Some(br) => {
                            if bland {
                                k < self.basis[br]
                            } else {
                                piv > best_piv
                            }
                        }
                    }
                } else {
                    false
                };
                if better {
                    best_t = t;
                    best = Some(r);
                    best_up = to_up;
                    best_piv = piv;
                }
            }
        }
        if best.is_none() && !best_t.is_finite() {
            return None;
        }
        Some((best_t.max(0.0), best, best_up))
    }

    fn apply(&mut self, j: usize, dir: f64, leave: Option<usize>, leave_up: bool) {
        match leave {
            None => {
                // bound flip of the entering column
                self.at_up[j] = dir > 0.0;
                self.compute_beta();
            }
            Some(r) => self.pivot(r, j, leave_up),
        }
    }

    /// Phase 1: drive all basic variables inside their bounds.
    fn phase1(&mut self, budget: &mut usize) -> Result<(), LpError> {
        let mut degen = 0usize;
        loop {
            let mut cb = vec![0.0; self.m];
            let mut any = false;
            for r in 0..self.m {
                let k = self.basis[r];
                let x = self.beta[r];
                if x < self.lo[k] - Self::feas_tol(self.lo[k]) {
                    cb[r] = -1.0;
                    any = true;
                } else if x > self.up[k] + Self::feas_tol(self.up[k]) {
                    cb[r] = 1.0;
                    any = true;
                }
            }
            if !any {
                return Ok(());
            }
            if *budget == 0 {
                return Err(LpError::NumericalFailure);
            }
            *budget -= 1;
            let w = self.w();
            let mut d = vec![0.0; self.ncol];
            for r in 0..self.m {
                if cb[r] != 0.0 {
                    let row = &self.tab[r * w..r * w + self.ncol];
                    for (dj, t) in d.iter_mut().zip(row) {
                        *dj -= cb[r] * t;
                    }
                }
            }
            let bland = degen >= BLAND_AFTER;
            let mut enter: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..self.ncol {
                if self.is_basic(j) {
                    continue;
                }
                let dir = self.move_dir(j);
                if dir == 0.0 {
                    continue;
                }
                let rate = d[j] * dir;
                if rate < -1e-9 {
                    if bland {
                        enter = Some((j, dir));
                        break;
                    }
                    if -rate > best {
                        best = -rate;
                        enter = Some((j, dir));
                    }
                }
            }
            let Some((j, dir)) = enter else {
                // no improving direction: infeasible unless the residual is
                // within the acceptance tolerance
                if self.max_violation() <= tol::FEAS {
                    return Ok(());
                }
                return Err(LpError::Infeasible);
            };
            let Some((theta, leave, leave_up)) = self.ratio(j, dir, true, bland) else {
                return Err(LpError::NumericalFailure);
            };
            degen = if theta <= 1e-12 { degen + 1 } else { 0 };
            self.apply(j, dir, leave, leave_up);
        }
    }

    /// Phase 2 on `cost`, only letting a column enter if its reduced cost
    /// under each `guard` objective is (numerically) zero in the direction of
    /// motion. With no guards this is the ordinary primal simplex.
    fn phase2(&mut self, cost: &[f64], guards: &[&[f64]], budget: &mut usize) -> Result<(), LpError> {
        let scale = 1.0 + cost.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
        let dtol = tol::DUAL * scale;
        let gtols: Vec<f64> = guards
            .iter()
            .map(|g| tol::DUAL * (1.0 + g.iter().fold(0.0_f64, |a, c| a.max(c.abs()))) * 10.0)
            .collect();
        let mut degen = 0usize;
        loop {
            if *budget == 0 {
                return Err(LpError::NumericalFailure);
            }
            *budget -= 1;
            let d = self.reduced_costs(cost);
            let gd: Vec<Vec<f64>> = guards.iter().map(|g| self.reduced_costs(g)).collect();
            let bland = degen >= BLAND_AFTER;
            let mut enter: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..self.ncol {
                if self.is_basic(j) {
                    continue;
                }
                let dir = self.move_dir(j);
                if dir == 0.0 {
                    continue;
                }
                let rate = d[j] * dir;
                if rate >= -dtol {
                    continue;
                }
                if gd.iter().zip(&gtols).any(|(g, t)| g[j] * dir > *t) {
                    continue;
                }
                if bland {
                    enter = Some((j, dir));
                    break;
                }
                if -rate > best {
                    best = -rate;
                    enter = Some((j, dir));
                }
            }
            let step = match enter {
                None => Step::Optimal,
                Some((j, dir)) => {
                    let Some((theta, leave, leave_up)) = self.ratio(j, dir, false, bland) else {
                        return Err(LpError::NumericalFailure);
                    };
                    self.apply(j, dir, leave, leave_up);
                    Step::Moved {
                        degenerate: theta <= 1e-12,
                    }
                }
            };
            match step {
                Step::Optimal => return Ok(()),
                Step::Moved { degenerate } => {
                    degen = if degenerate { degen + 1 } else { 0 };
                }
            }
        }
    }

    fn budget(&self) -> usize {
        50 * (self.m + self.ncol) + 2000
    }

    /// Minimizes `cost` (length `n` or `ncol`) subject to the guards (see
    /// [`Self::phase2`]), repairing feasibility first.
    pub fn optimize(&mut self, cost: &[f64], guards: &[&[f64]]) -> Result<(), LpError> {
        if (0..self.n).any(|j| self.lo[j] > self.up[j] + Self::feas_tol(self.up[j])) {
            return Err(LpError::Infeasible);
        }
        let mut budget = self.budget();
        for attempt in 0..3 {
            self.phase1(&mut budget)?;
            self.phase2(cost, guards, &mut budget)?;
            if !self.refactor() {
                self.slack_basis();
                continue;
            }
            let viol = self.max_violation();
            if viol <= 1e-9 * (1.0 + self.max_abs_bound()) {
                return Ok(());
            }
            if attempt == 2 && viol <= tol::FEAS {
                return Ok(());
            }
        }
        Err(LpError::NumericalFailure)
    }

    fn max_abs_bound(&self) -> f64 {
        let mut v: f64 = 0.0;
        for &k in &self.basis {
            if self.lo[k].is_finite() {
                v = v.max(self.lo[k].abs());
            }
            if self.up[k].is_finite() {
                v = v.max(self.up[k].abs());
            }
        }
        v
    }
}

/// Gauss-Jordan pivot of a row-major `m × w` matrix on entry `(r, j)`.
fn pivot_rows(t: &mut [f64], w: usize, r: usize, j: usize) {
    let p = t[r * w + j];
    let inv = 1.0 / p;
    for v in &mut t[r * w..(r + 1) * w] {
        *v *= inv;
    }
    t[r * w + j] = 1.0;
    let (before, rest) = t.split_at_mut(r * w);
    let (prow, after) = rest.split_at_mut(w);
    for block in [before, after] {
        for row in block.chunks_exact_mut(w) {
            let f = row[j];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[j] = 0.0;
            }
        }
    }
}
