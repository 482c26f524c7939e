//! Seeding the primal bound before branch-and-bound: lexicographic
//! endpoints, then either an adaptive ε-constraint sweep or rounds of
//! weighted-sum solves over bisected weights.
//!
//! The sweeps talk to the single-objective solver through [`ScalarOracle`],
//! so their step-size and weight bookkeeping can be traced against scripted
//! answers. Every event of a run is recorded in a [`TraceEvent`] list.

use alloc::vec;
use alloc::vec::Vec;

use crate::bb::slice_front;
use crate::clock::Deadline;
use crate::geometry::{FrontElement, ObjPoint, ParetoStore};
use crate::milp::{level_curve_cut, milp_solve, MilpOptions, MilpStatus};
use crate::model::{Instance, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreprocessMethod {
    Eps,
    Ws,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rho {
    Auto,
    Fixed(u32),
}

#[derive(Debug, Clone, Copy)]
pub struct PreprocessConfig {
    pub method: PreprocessMethod,
    pub rho: Rho,
    /// Weighted-sum rounds never exceed this count, successful or not.
    pub ws_max_rounds: usize,
    /// ε-steps per sweep direction never exceed this count.
    pub eps_max_steps: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            method: PreprocessMethod::Eps,
            rho: Rho::Auto,
            ws_max_rounds: 8,
            eps_max_steps: 600,
        }
    }
}

/// `clamp(round(n / 80), 2, 5)` for `n` variables.
pub fn rho_auto(inst: &Instance) -> u32 {
    let r = crate::tol::round(inst.n() as f64 / 80.0) as u32;
    r.clamp(2, 5)
}

impl Rho {
    pub fn resolve(self, inst: &Instance) -> u32 {
        match self {
            Rho::Auto => rho_auto(inst),
            Rho::Fixed(r) => r,
        }
    }
}

/// Weights `(λ1, λ2)`, summing to one, whose level curves are parallel to
/// the chord from `y1` to `y2`. A degenerate chord gives `(1/2, 1/2)`.
pub fn chord_weights(y1: &ObjPoint, y2: &ObjPoint) -> (f64, f64) {
    let a = (y1.f2 - y2.f2).max(0.0);
    let b = (y2.f1 - y1.f1).max(0.0);
    let s = a + b;
    if s <= 1e-12 * (1.0 + y1.f1.abs() + y1.f2.abs() + y2.f1.abs() + y2.f2.abs()) {
        (0.5, 0.5)
    } else {
        (a / s, b / s)
    }
}

/// Answer of one scalarized solve.
#[derive(Debug, Clone, Default)]
pub struct ScalarSolve {
    /// Image of the best solution found, if any.
    pub image: Option<ObjPoint>,
    /// Valid lower bound on the scalarized objective.
    pub bound: f64,
    /// Every integer-feasible solution met during the solve.
    pub pool: Vec<Vec<f64>>,
}

/// Single-objective access used by the sweeps.
pub trait ScalarOracle {
    /// `min w1·f1 + w2·f2` over the integer-feasible set.
    fn weighted(&mut self, w: (f64, f64)) -> ScalarSolve;
    /// `min f_other` subject to `f_k <= eps` (`k` is 1 or 2).
    fn eps_constrained(&mut self, k: u8, eps: f64) -> ScalarSolve;
    /// Adds the globally valid cut `w1·f1 + w2·f2 >= bound`.
    fn add_level_cut(&mut self, w: (f64, f64), bound: f64);
    /// Frontier elements contributed by an integer-feasible solution.
    fn slice(&mut self, x: &[f64]) -> Vec<FrontElement>;
    /// True once further solves are pointless (time is up).
    fn expired(&self) -> bool {
        false
    }
}

/// State transitions of the sweeps, in order.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    /// The chord-weighted solve.
    Lambda { weights: (f64, f64), image: Option<ObjPoint> },
    /// Initial steps and ε values of both directions.
    EpsInit { h: [f64; 2], eps: [f64; 2] },
    /// One ε-constrained solve: its ε, whether the image was new, and the
    /// step after the update.
    EpsStep { k: u8, eps: f64, new: bool, h: f64 },
    /// One weighted-sum round: the weights solved, `σ`, `τ` and the count
    /// `t` of unsuccessful rounds after the round.
    WsRound { weights: Vec<f64>, sigma: usize, tau: usize, t: u32 },
}

fn absorb(oracle: &mut dyn ScalarOracle, store: &mut ParetoStore, pool: &[Vec<f64>]) {
    for x in pool {
        for e in oracle.slice(x) {
            store.insert(e);
        }
    }
}

fn is_new(store: &ParetoStore, y: Option<ObjPoint>) -> bool {
    y.is_some_and(|y| !store.dominates_point(&y))
}

/// Adaptive ε-constraint sweep from the chord-weighted solution toward
/// both endpoints. `y1`, `y2` are the lexicographic endpoint images.
///
/// Direction `k` raises `ε_k` from the weighted image toward the opposite
/// endpoint's `k`-th coordinate, solving `min f_other s.t. f_k <= ε_k`. A new
/// nondominated image divides the step by `1 + ρ`; otherwise the step is
/// multiplied by `max(5 - ρ, 1)`. Steps never fall below a thousandth of
/// their initial value.
pub fn preprocess_eps(
    oracle: &mut dyn ScalarOracle,
    y1: &ObjPoint,
    y2: &ObjPoint,
    rho: u32,
    max_steps: usize,
) -> (ParetoStore, Vec<TraceEvent>) {
    let mut store = ParetoStore::new();
    let mut trace = Vec::new();
    let w = chord_weights(y1, y2);
    let s = oracle.weighted(w);
    trace.push(TraceEvent::Lambda { weights: w, image: s.image });
    if s.bound.is_finite() {
        oracle.add_level_cut(w, s.bound);
    }
    absorb(oracle, &mut store, &s.pool);
    let Some(yl) = s.image else {
        return (store, trace);
    };
    let h0 = [(y2.f1 - yl.f1) / 60.0, (y1.f2 - yl.f2) / 60.0];
    let mut h = h0;
    let mut eps = [yl.f1 + h[0], yl.f2 + h[1]];
    let target = [y2.f1, y1.f2];
    trace.push(TraceEvent::EpsInit { h, eps });
    let grow = (5.0 - rho as f64).max(1.0);
    for k in 0..2 {
        if h0[k] <= 0.0 {
            continue;
        }
        let mut steps = 0;
        while eps[k] < target[k] && steps < max_steps && !oracle.expired() {
            steps += 1;
            let r = oracle.eps_constrained(k as u8 + 1, eps[k]);
            let new = is_new(&store, r.image);
            if new {
                h[k] /= 1.0 + rho as f64;
            } else {
                h[k] *= grow;
            }
            h[k] = h[k].max(1e-3 * h0[k]);
            absorb(oracle, &mut store, &r.pool);
            trace.push(TraceEvent::EpsStep { k: k as u8 + 1, eps: eps[k], new, h: h[k] });
            eps[k] += h[k];
        }
    }
    (store, trace)
}

/// Weighted-sum rounds over bisected weights. `λ` is the weight on `f1`
/// (`f2` gets `1 - λ`); the first round solves the chord weight alone.
/// A round is successful when at least a fifth of its solves reveal an
/// image not yet dominated; the sweep stops after `ρ + 1` unsuccessful
/// rounds or `max_rounds` rounds in total.
pub fn preprocess_ws(
    oracle: &mut dyn ScalarOracle,
    y1: &ObjPoint,
    y2: &ObjPoint,
    rho: u32,
    max_rounds: usize,
) -> (ParetoStore, Vec<TraceEvent>) {
    let mut store = ParetoStore::new();
    let mut trace = Vec::new();
    let mut todo: Vec<f64> = vec![chord_weights(y1, y2).0];
    let mut used: Vec<f64> = vec![0.0, 1.0];
    let mut t = 0u32;
    let mut rounds = 0;
    while t <= rho && rounds < max_rounds && !todo.is_empty() && !oracle.expired() {
        rounds += 1;
        let mut tau = 0;
        let sigma = todo.len();
        let batch = core::mem::take(&mut todo);
        for &l in &batch {
            let pos = used.partition_point(|&u| u < l);
            used.insert(pos, l);
            let w = (l, 1.0 - l);
            let s = oracle.weighted(w);
            if s.bound.is_finite() {
                oracle.add_level_cut(w, s.bound);
            }
            if is_new(&store, s.image) {
                tau += 1;
            }
            absorb(oracle, &mut store, &s.pool);
        }
        for p in used.windows(2) {
            todo.push((p[0] + p[1]) / 2.0);
        }
        if (tau as f64) < sigma as f64 / 5.0 {
            t += 1;
        }
        trace.push(TraceEvent::WsRound { weights: batch, sigma, tau, t });
    }
    (store, trace)
}

/// [`ScalarOracle`] backed by [`milp_solve`] on an instance with local
/// bounds. Level cuts accumulate in [`MilpOracle::cuts`].
pub struct MilpOracle<'a, 'c> {
    pub inst: &'a Instance,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Rows applied to every solve (for example objective caps).
    pub rows: Vec<Row>,
    pub cuts: Vec<Row>,
    pub opts: MilpOptions,
    pub deadline: Deadline<'c>,
    pub milps: usize,
    pub lps: usize,
}

impl<'a, 'c> MilpOracle<'a, 'c> {
    pub fn new(inst: &'a Instance, lower: &[f64], upper: &[f64], opts: MilpOptions, deadline: Deadline<'c>) -> Self {
        Self {
            inst,
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            rows: Vec::new(),
            cuts: Vec::new(),
            opts,
            deadline,
            milps: 0,
            lps: 0,
        }
    }

    fn run(&mut self, w: (f64, f64), extra: Option<Row>) -> ScalarSolve {
        let mut rows = self.rows.clone();
        rows.extend(self.cuts.iter().cloned());
        rows.extend(extra);
        let r = milp_solve(self.inst, w, &self.lower, &self.upper, &rows, &self.opts, &self.deadline);
        self.milps += 1;
        self.lps += r.lp_solves;
        ScalarSolve {
            image: r.x.as_ref().map(|x| self.inst.objectives(x)),
            bound: if r.status == MilpStatus::Infeasible { f64::INFINITY } else { r.bound },
            pool: r.pool,
        }
    }
}

impl ScalarOracle for MilpOracle<'_, '_> {
    fn weighted(&mut self, w: (f64, f64)) -> ScalarSolve {
        self.run(w, None)
    }

    fn eps_constrained(&mut self, k: u8, eps: f64) -> ScalarSolve {
        let (c, w) = if k == 1 { (&self.inst.c1, (0.0, 1.0)) } else { (&self.inst.c2, (1.0, 0.0)) };
        let cap = Row::from_dense(c, eps);
        self.run(w, Some(cap))
    }

    fn add_level_cut(&mut self, w: (f64, f64), bound: f64) {
        self.cuts.push(level_curve_cut(self.inst, w, bound));
    }

    fn slice(&mut self, x: &[f64]) -> Vec<FrontElement> {
        slice_front(self.inst, x).unwrap_or_default()
    }

    fn expired(&self) -> bool {
        self.deadline.expired()
    }
}

/// Lexicographic endpoints of the integer-feasible image set.
#[derive(Debug, Clone)]
pub struct Endpoints {
    pub y1: ObjPoint,
    pub y2: ObjPoint,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// Every integer-feasible solution met.
    pub pool: Vec<Vec<f64>>,
    pub milps: usize,
    pub lps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EndpointError {
    #[error("no integer-feasible solution exists")]
    Infeasible,
    #[error("an endpoint MILP hit its time limit")]
    Timeout,
}

/// Minimizes `f_k`, then the other objective with `f_k` held at its
/// optimum, for `k = 1, 2`.
pub fn lex_endpoints(
    inst: &Instance,
    lower: &[f64],
    upper: &[f64],
    rows: &[Row],
    opts: &MilpOptions,
    deadline: &Deadline<'_>,
) -> Result<Endpoints, EndpointError> {
    let mut pool = Vec::new();
    let mut milps = 0;
    let mut lps = 0;
    let mut ends: [(ObjPoint, Vec<f64>); 2] = Default::default();
    for (k, end) in ends.iter_mut().enumerate() {
        let (first, second, c) = if k == 0 {
            ((1.0, 0.0), (0.0, 1.0), &inst.c1)
        } else {
            ((0.0, 1.0), (1.0, 0.0), &inst.c2)
        };
        let r = milp_solve(inst, first, lower, upper, rows, opts, deadline);
        milps += 1;
        lps += r.lp_solves;
        pool.extend(r.pool.iter().cloned());
        match r.status {
            MilpStatus::Infeasible => return Err(EndpointError::Infeasible),
            MilpStatus::FeasibleTimeout => return Err(EndpointError::Timeout),
            MilpStatus::Optimal => {}
        }
        let v = r.value;
        let mut rows2 = rows.to_vec();
        rows2.push(Row::from_dense(c, v + 1e-9 * (1.0 + v.abs())));
        let r2 = milp_solve(inst, second, lower, upper, &rows2, opts, deadline);
        milps += 1;
        lps += r2.lp_solves;
        pool.extend(r2.pool.iter().cloned());
        let x = match (r2.status, r2.x) {
            (MilpStatus::Optimal, Some(x)) => x,
            (MilpStatus::FeasibleTimeout, _) => return Err(EndpointError::Timeout),
            // numerically lost the face: keep the first optimum
            _ => r.x.clone().unwrap_or_default(),
        };
        *end = (inst.objectives(&x), x);
    }
    let [(y1, x1), (y2, x2)] = ends;
    Ok(Endpoints {
        y1,
        y2,
        x1,
        x2,
        pool,
        milps,
        lps,
    })
}
