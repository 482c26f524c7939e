//! Single-objective MILP by LP-based branch-and-bound.
//!
//! Used as a subroutine for endpoint computation, preprocessing and node
//! processing. Best-bound node selection (ties first-in first-out),
//! most-fractional branching (ties to the lowest index), child LPs
//! warm-started from the parent basis.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::clock::Deadline;
use crate::lp::{LpBasis, LpEngine, LpError};
use crate::model::{Instance, Row};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    Optimal,
    /// Stopped by the time or node limit; the incumbent may be absent.
    FeasibleTimeout,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct MilpResult {
    pub status: MilpStatus,
    pub x: Option<Vec<f64>>,
    /// Incumbent value, `+inf` without incumbent.
    pub value: f64,
    /// Best proven lower bound on the optimum.
    pub bound: f64,
    /// Every integer-feasible point met during the search, one per distinct
    /// integer part.
    pub pool: Vec<Vec<f64>>,
    pub nodes: usize,
    pub lp_solves: usize,
}

impl MilpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == MilpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MilpOptions {
    /// Seconds per solve.
    pub time_limit: f64,
    /// Maximum number of branch-and-bound nodes per solve.
    pub node_limit: usize,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            time_limit: 60.0,
            node_limit: usize::MAX,
        }
    }
}

struct OpenNode {
    bound: f64,
    seq: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    basis: Option<LpBasis>,
}

impl PartialEq for OpenNode {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for OpenNode {}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for OpenNode {
    // BinaryHeap is a max-heap: smaller bound, then smaller seq, is "greater"
    fn cmp(&self, o: &Self) -> Ordering {
        o.bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| o.seq.cmp(&self.seq))
    }
}

/// Most fractional integer variable, ties to the lowest index.
fn branching_var(x: &[f64], n_int: usize) -> Option<usize> {
    let mut best = None;
    let mut best_f = tol::INT;
    for (j, &v) in x.iter().enumerate().take(n_int) {
        let f = v - tol::floor(v);
        let d = f.min(1.0 - f);
        if d > best_f {
            best_f = d;
            best = Some(j);
        }
    }
    best
}

fn same_int_part(a: &[f64], b: &[f64], n_int: usize) -> bool {
    (0..n_int).all(|j| (a[j] - b[j]).abs() <= 0.5)
}

/// Minimizes `w1·f1 + w2·f2` over the integer points of the relaxation with
/// the given bounds and extra rows.
pub fn milp_solve(
    inst: &Instance,
    weights: (f64, f64),
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
    opts: &MilpOptions,
    deadline: &Deadline<'_>,
) -> MilpResult {
    let cost = inst.weighted(weights.0, weights.1);
    milp_solve_cost(inst, &cost, lower, upper, extra_rows, opts, deadline)
}

/// As [`milp_solve`] with an explicit cost vector.
pub fn milp_solve_cost(
    inst: &Instance,
    cost: &[f64],
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
    opts: &MilpOptions,
    deadline: &Deadline<'_>,
) -> MilpResult {
    let deadline = deadline.min_after(opts.time_limit);
    let n_int = inst.n_int;
    let mut eng = LpEngine::new(inst, lower, upper, extra_rows);
    let mut res = MilpResult {
        status: MilpStatus::Infeasible,
        x: None,
        value: f64::INFINITY,
        bound: f64::NEG_INFINITY,
        pool: Vec::new(),
        nodes: 0,
        lp_solves: 0,
    };
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(OpenNode {
        bound: f64::NEG_INFINITY,
        seq,
        lower: lower.to_vec(),
        upper: upper.to_vec(),
        basis: None,
    });
    // nodes whose bound reaches the cutoff cannot improve the incumbent
    let cutoff = |v: f64| if v.is_finite() { v - 1e-9 * (1.0 + v.abs()) } else { v };
    while let Some(node) = heap.pop() {
        if node.bound >= cutoff(res.value) {
            continue;
        }
        if res.nodes >= opts.node_limit || deadline.expired() {
            heap.push(node);
            break;
        }
        res.nodes += 1;
        eng.set_bounds(&node.lower, &node.upper);
        if let Some(b) = &node.basis {
            eng.warm_start(b);
        }
        res.lp_solves += 1;
        let val = match eng.solve_cost(cost) {
            Ok(v) => v,
            Err(LpError::Infeasible) => continue,
            Err(_) => {
                // retry cold once before giving up on the node
                let mut cold = LpEngine::new(inst, &node.lower, &node.upper, extra_rows);
                match cold.solve_cost(cost) {
                    Ok(v) => {
                        eng = cold;
                        v
                    }
                    Err(_) => continue,
                }
            }
        };
        if val >= cutoff(res.value) {
            continue;
        }
        let x = eng.x();
        match branching_var(&x, n_int) {
            None => {
                let mut xi = x;
                for v in xi.iter_mut().take(n_int) {
                    *v = tol::round(*v);
                }
                if !res.pool.iter().any(|p| same_int_part(p, &xi, n_int)) {
                    res.pool.push(xi.clone());
                }
                res.value = val;
                res.x = Some(xi);
            }
            Some(j) => {
                let basis = eng.basis();
                let v = x[j];
                let fl = tol::floor(v);
                let mut up_lo = node.lower.clone();
                up_lo[j] = fl + 1.0;
                let mut down_up = node.upper.clone();
                down_up[j] = fl;
                seq += 1;
                heap.push(OpenNode {
                    bound: val,
                    seq,
                    lower: node.lower.clone(),
                    upper: down_up,
                    basis: Some(basis.clone()),
                });
                seq += 1;
                heap.push(OpenNode {
                    bound: val,
                    seq,
                    lower: up_lo,
                    upper: node.upper,
                    basis: Some(basis),
                });
            }
        }
    }
    let open_bound = heap
        .iter()
        .filter(|n| n.bound < res.value)
        .map(|n| n.bound)
        .fold(f64::INFINITY, f64::min);
    if heap.iter().any(|n| n.bound < cutoff(res.value)) {
        res.status = MilpStatus::FeasibleTimeout;
        res.bound = open_bound.min(res.value);
        if res.bound == f64::NEG_INFINITY {
            // root never solved: fall back to the LP relaxation bound
            let mut root = LpEngine::new(inst, lower, upper, extra_rows);
            res.bound = match root.solve_cost(cost) {
                Ok(v) => v,
                Err(LpError::Infeasible) => {
                    res.status = MilpStatus::Infeasible;
                    f64::INFINITY
                }
                Err(_) => f64::NEG_INFINITY,
            };
        }
    } else if res.x.is_some() {
        res.status = MilpStatus::Optimal;
        res.bound = res.value;
    } else {
        res.status = MilpStatus::Infeasible;
        res.bound = f64::INFINITY;
    }
    res
}

/// The globally valid cut `w1·f1 + w2·f2 >= bound`, written as
/// `-(w1·c1 + w2·c2)·x <= -bound`.
pub fn level_curve_cut(inst: &Instance, weights: (f64, f64), bound: f64) -> Row {
    let c = inst.weighted(weights.0, weights.1);
    Row::from_dense(&c.iter().map(|v| -v).collect::<Vec<_>>(), -bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::NoClock;
    use alloc::vec;

    fn run(inst: &Instance, w: (f64, f64), extra: &[Row]) -> MilpResult {
        let clock = NoClock;
        let d = Deadline::never(&clock);
        milp_solve(inst, w, &inst.lower, &inst.upper, extra, &MilpOptions::default(), &d)
    }

    #[test]
    fn rounding_up() {
        // min x1, x1 in {0..3}, x1 >= 0.5
        let inst = Instance::new(
            "t",
            1,
            0,
            vec![1.0],
            vec![0.0],
            vec![Row::from_dense(&[-1.0], -0.5)],
            vec![0.0],
            vec![3.0],
        )
        .unwrap();
        let r = run(&inst, (1.0, 0.0), &[]);
        assert!(r.is_optimal());
        assert_eq!(r.value, 1.0);
        // epsilon row f1 <= 0.7 makes it infeasible
        let r = run(&inst, (1.0, 0.0), &[Row::from_dense(&[1.0], 0.7)]);
        assert_eq!(r.status, MilpStatus::Infeasible);
    }

    #[test]
    fn knapsack_known_optimum() {
        // max 5a + 4b + 3c s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8
        let inst = Instance::new(
            "t",
            3,
            0,
            vec![-5.0, -4.0, -3.0],
            vec![0.0; 3],
            vec![
                Row::from_dense(&[2.0, 3.0, 1.0], 5.0),
                Row::from_dense(&[4.0, 1.0, 2.0], 11.0),
                Row::from_dense(&[3.0, 4.0, 2.0], 8.0),
            ],
            vec![0.0; 3],
            vec![3.0; 3],
        )
        .unwrap();
        let r = run(&inst, (1.0, 0.0), &[]);
        assert!(r.is_optimal());
        assert_eq!(r.value, -13.0);
        assert!(!r.pool.is_empty());
        for x in &r.pool {
            assert!(inst.is_feasible(x, 1e-6) && inst.is_integral(x));
        }
    }

    #[test]
    fn level_cut_transcription() {
        let inst = Instance::new("t", 0, 2, vec![1.0, 2.0], vec![3.0, 0.0], vec![], vec![0.0; 2], vec![1.0; 2])
            .unwrap();
        let r = level_curve_cut(&inst, (1.0, 0.0), 3.0);
        assert_eq!(r.coefs, vec![(0, -1.0), (1, -2.0)]);
        assert_eq!(r.rhs, -3.0);
        let r = level_curve_cut(&inst, (0.5, 0.5), 0.0);
        assert_eq!(r.coefs, vec![(0, -2.0), (1, -1.0)]);
    }

    #[test]
    fn node_limit_gives_timeout_with_bound() {
        // max x + y s.t. 2x + 2y <= 3: LP bound -1.5, integer optimum -1
        let inst = Instance::new(
            "t",
            2,
            0,
            vec![-1.0, -1.0],
            vec![0.0; 2],
            vec![Row::from_dense(&[2.0, 2.0], 3.0)],
            vec![0.0; 2],
            vec![3.0; 2],
        )
        .unwrap();
        let clock = NoClock;
        let d = Deadline::never(&clock);
        let opts = MilpOptions {
            node_limit: 1,
            ..Default::default()
        };
        let r = milp_solve(&inst, (1.0, 0.0), &inst.lower, &inst.upper, &[], &opts, &d);
        assert_eq!(r.status, MilpStatus::FeasibleTimeout);
        assert!((r.bound + 1.5).abs() < 1e-9);
        let r = run(&inst, (1.0, 0.0), &[]);
        assert_eq!(r.value, -1.0);
        assert_eq!(r.pool.len(), 1);
    }
}
