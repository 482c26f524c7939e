//! Dual presolve for biobjective problems and probing on integer bounds.
//!
//! Every reduction here keeps the set of nondominated images intact: a
//! fixing may discard efficient solutions only when another solution with a
//! weakly better image survives.

use alloc::vec::Vec;

use crate::geometry::ParetoStore;
use crate::lp::{parametric_front, LpError};
use crate::model::{Instance, Row};

/// Coefficients with magnitude below this count as structural zeros.
const ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixReason {
    Duality,
    Singleton,
    ProbeLower,
    ProbeUpper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixing {
    pub var: usize,
    pub value: f64,
    pub reason: FixReason,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixingReport {
    pub fixings: Vec<Fixing>,
    /// Ordered pairs `(j, i)` where column `j` dominates column `i`.
    pub pairs: Vec<(usize, usize)>,
}

impl FixingReport {
    /// Fixes every reported variable in the given bound vectors.
    pub fn apply(&self, lower: &mut [f64], upper: &mut [f64]) {
        for f in &self.fixings {
            lower[f.var] = f.value;
            upper[f.var] = f.value;
        }
    }

    fn fix(&mut self, var: usize, value: f64, reason: FixReason) {
        if !self.fixings.iter().any(|f| f.var == var) {
            self.fixings.push(Fixing { var, value, reason });
        }
    }
}

/// Column `j` as (row index, coefficient) pairs, zeros skipped.
fn columns(inst: &Instance) -> Vec<Vec<(usize, f64)>> {
    let mut cols = alloc::vec![Vec::new(); inst.n()];
    for (r, row) in inst.rows.iter().enumerate() {
        for &(j, a) in &row.coefs {
            if a.abs() >= ZERO {
                cols[j].push((r, a));
            }
        }
    }
    cols
}

/// Fixes variables whose objective coefficients and column all share a
/// sign: nonnegative everywhere to the lower bound, nonpositive everywhere
/// to the upper bound.
pub fn duality_fix(inst: &Instance) -> FixingReport {
    let cols = columns(inst);
    let mut rep = FixingReport::default();
    for j in 0..inst.n() {
        if inst.lower[j] == inst.upper[j] {
            continue;
        }
        let (c1, c2) = (inst.c1[j], inst.c2[j]);
        if c1 >= 0.0 && c2 >= 0.0 && cols[j].iter().all(|&(_, a)| a >= 0.0) {
            rep.fix(j, inst.lower[j], FixReason::Duality);
        } else if c1 <= 0.0 && c2 <= 0.0 && cols[j].iter().all(|&(_, a)| a <= 0.0) {
            rep.fix(j, inst.upper[j], FixReason::Duality);
        }
    }
    rep
}

/// Singleton-column fixing, applied row by row until nothing changes.
///
/// For row `r`, `J(r)` holds the free singleton columns with `a_rj > 0` and
/// both objective coefficients negative (the mirror case `a_rj < 0`, both
/// positive, is handled by negating the variable). Raising the best-ratio
/// member `s` to its upper bound is only sound if the exchange argument
/// behind it can move the other members of `J(r)` continuously, so `s` is
/// fixed only when every other member is continuous.
pub fn singleton_fix(inst: &Instance) -> FixingReport {
    let cols = columns(inst);
    let mut lower = inst.lower.clone();
    let mut upper = inst.upper.clone();
    let mut rep = FixingReport::default();
    loop {
        let mut changed = false;
        for (r, row) in inst.rows.iter().enumerate() {
            for sign in [1.0, -1.0] {
                if let Some((s, v)) = singleton_candidate(inst, &cols, r, row, sign, &lower, &upper) {
                    rep.fix(s, v, FixReason::Singleton);
                    lower[s] = v;
                    upper[s] = v;
                    changed = true;
                }
            }
        }
        if !changed {
            return rep;
        }
    }
}

/// Candidate for row `r` in the orientation `sign` (`-1` substitutes
/// `x' = -x`, turning the mirror case into the primary one).
fn singleton_candidate(
    inst: &Instance,
    cols: &[Vec<(usize, f64)>],
    r: usize,
    row: &Row,
    sign: f64,
    lower: &[f64],
    upper: &[f64],
) -> Option<(usize, f64)> {
    // bounds of the (possibly negated) variable
    let lo = |j: usize| if sign > 0.0 { lower[j] } else { -upper[j] };
    let up = |j: usize| if sign > 0.0 { upper[j] } else { -lower[j] };
    let in_j = |j: usize, a: f64| {
        sign * a > ZERO
            && sign * inst.c1[j] < 0.0
            && sign * inst.c2[j] < 0.0
            && cols[j].len() == 1
            && cols[j][0].0 == r
            && lower[j] < upper[j]
    };
    let members: Vec<usize> = row.coefs.iter().filter(|&&(j, a)| in_j(j, a)).map(|&(j, _)| j).collect();
    if members.is_empty() {
        return None;
    }
    // max activity of the row with J(r) at its (substituted) lower bounds
    let mut u_r = 0.0;
    for &(j, a) in &row.coefs {
        if members.contains(&j) {
            u_r += sign * a * lo(j);
        } else if a > 0.0 {
            u_r += a * upper[j];
        } else {
            u_r += a * lower[j];
        }
    }
    let ratio = |j: usize, c: &[f64]| (sign * c[j]) / (sign * row.coef(j));
    let best = members.iter().copied().find(|&s| {
        members
            .iter()
            .all(|&t| t == s || (ratio(s, &inst.c1) <= ratio(t, &inst.c1) && ratio(s, &inst.c2) <= ratio(t, &inst.c2)))
    })?;
    if members.iter().any(|&t| t != best && inst.is_int(t)) {
        return None;
    }
    let a_s = sign * row.coef(best);
    if a_s * (up(best) - lo(best)) <= row.rhs - u_r {
        Some((best, sign * up(best) + 0.0))
    } else {
        None
    }
}

/// All ordered pairs `(j, i)` of same-kind variables where `j` dominates
/// `i`: `c^k_j <= c^k_i` for both objectives and `a_rj <= a_ri` in every row.
pub fn dominating_pairs(inst: &Instance) -> Vec<(usize, usize)> {
    let n = inst.n();
    let mut dense = alloc::vec![alloc::vec![0.0; inst.rows.len()]; n];
    for (r, row) in inst.rows.iter().enumerate() {
        for &(j, a) in &row.coefs {
            dense[j][r] = a;
        }
    }
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if i == j || inst.is_int(i) != inst.is_int(j) {
                continue;
            }
            if inst.c1[j] <= inst.c1[i]
                && inst.c2[j] <= inst.c2[i]
                && dense[j].iter().zip(&dense[i]).all(|(aj, ai)| aj <= ai)
            {
                out.push((j, i));
            }
        }
    }
    out
}

/// Linear relaxations of the disjunctions `x_j = u_j or x_i = l_i`:
/// `(x_i - l_i)/(u_i - l_i) + (u_j - x_j)/(u_j - l_j) <= 1`.
///
/// Only an acyclic subset of pairs is used: for identical columns (which
/// dominate each other) just the pair with `j < i` is kept, otherwise the
/// two cuts together would exclude solutions that no exchange can repair.
pub fn disjunction_cuts(inst: &Instance, pairs: &[(usize, usize)], lower: &[f64], upper: &[f64]) -> Vec<Row> {
    let mut cuts = Vec::new();
    for &(j, i) in pairs {
        if j > i && pairs.contains(&(i, j)) {
            continue;
        }
        let (di, dj) = (upper[i] - lower[i], upper[j] - lower[j]);
        if di <= 0.0 || dj <= 0.0 {
            continue;
        }
        let mut a = alloc::vec![0.0; inst.n()];
        a[i] = 1.0 / di;
        a[j] = -1.0 / dj;
        cuts.push(Row::from_dense(&a, 1.0 + lower[i] / di - upper[j] / dj));
    }
    cuts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeSide {
    Lower,
    Upper,
}

/// Probes one side of integer variable `i`: with `x_i` fixed at that bound
/// (integrality of the others relaxed), if the relaxation is infeasible or
/// its whole frontier is dominated by `store`, the bound can move inward by
/// one. Returns the tightened bound, or `None` if the probe fails.
#[allow(clippy::too_many_arguments)]
pub fn probe_variable(
    inst: &Instance,
    store: &ParetoStore,
    i: usize,
    side: ProbeSide,
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
) -> Result<Option<f64>, LpError> {
    let v = match side {
        ProbeSide::Lower => lower[i],
        ProbeSide::Upper => upper[i],
    };
    let mut lo = lower.to_vec();
    let mut up = upper.to_vec();
    lo[i] = v;
    up[i] = v;
    let dominated = match parametric_front(inst, &lo, &up, extra_rows) {
        Err(LpError::Infeasible) => true,
        Err(e) => return Err(e),
        Ok(curve) => !store.is_empty() && curve.elements().iter().all(|e| store.is_dominated(e)),
    };
    Ok(dominated.then_some(match side {
        ProbeSide::Lower => v + 1.0,
        ProbeSide::Upper => v - 1.0,
    }))
}

/// Result of probing both sides of a variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeOutcome {
    /// New bounds (possibly unchanged).
    Bounds(f64, f64),
    /// Every value of the variable was eliminated.
    Empty,
}

/// Probes both sides of integer variable `i`, each up to `rounds` times.
/// An LP failure simply stops probing that side.
#[allow(clippy::too_many_arguments)]
pub fn probe_bounds(
    inst: &Instance,
    store: &ParetoStore,
    i: usize,
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
    rounds: usize,
) -> ProbeOutcome {
    let mut lo = lower.to_vec();
    let mut up = upper.to_vec();
    for side in [ProbeSide::Lower, ProbeSide::Upper] {
        for _ in 0..rounds {
            if lo[i] > up[i] {
                return ProbeOutcome::Empty;
            }
            match probe_variable(inst, store, i, side, &lo, &up, extra_rows) {
                Ok(Some(b)) => match side {
                    ProbeSide::Lower => lo[i] = b,
                    ProbeSide::Upper => up[i] = b,
                },
                _ => break,
            }
        }
    }
    if lo[i] > up[i] {
        ProbeOutcome::Empty
    } else {
        ProbeOutcome::Bounds(lo[i], up[i])
    }
}
