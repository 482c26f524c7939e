//! Biobjective branch-and-bound: node processing, fathoming, branching and
//! the top-level driver.
//!
//! A solve runs in three phases so that objective-space subregions can be
//! farmed out to threads by the caller:
//!
//! 1. [`prepare`]: presolve, lexicographic endpoints, primal-bound seeding
//!    and (optionally) splitting objective space into slabs;
//! 2. [`solve_region`] for every slab, each with a private copy of the
//!    seeded store;
//! 3. [`finish`]: merges the slab stores in order and reports the gap.
//!
//! [`bb_solve`] and [`bb_solve_with`] chain the three phases sequentially.

mod branch;
mod gap;
mod node;
mod slice;
mod split;

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use branch::{branch_on_variable, choose_branch_var, os_fathom, split_value, Interval, OsFathom, VarBranch};
pub use gap::{gap_checkpoint, global_dual_bound};
pub use node::{
    clipped_level_segment, has_integer_point, ideal_points_lp, lp_ideal_segment, milp_ideal_segment, mixed_ideal_points, process_node,
    Node, NodeCtx, NodeImages, NodeStatus, Processed, Rule,
};
pub use slice::{slice_front, slice_front_with};
pub use split::{gap_cuts, split_os, Region, Split};

use crate::clock::{Clock, Deadline, NoClock};
use crate::geometry::{FrontElement, GapReport, ObjPoint, OsRect, ParetoStore};
use crate::lp::{curve_from_engine, parametric_front, LpError};
use crate::milp::MilpOptions;
use crate::model::{Instance, Row};
use crate::preprocess::{
    lex_endpoints, preprocess_eps, preprocess_ws, EndpointError, MilpOracle, PreprocessConfig, PreprocessMethod,
};
use crate::presolve::{disjunction_cuts, dominating_pairs, duality_fix, probe_bounds, singleton_fix, ProbeOutcome};

/// Objective-space branchings allowed in a row before variable branching
/// is forced, so that repeated splits at touching store points cannot
/// stall the search.
const MAX_PARETO_CHAIN: u32 = 8;

/// Which dominance rules may fathom a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSet {
    pub fr0: bool,
    pub fr1a: bool,
    pub fr2a: bool,
    pub fr3: bool,
    pub fr1b: bool,
    pub fr2b: bool,
}

impl RuleSet {
    pub const TOGGLEABLE: [Rule; 6] = [Rule::Fr0, Rule::Fr1a, Rule::Fr2a, Rule::Fr3, Rule::Fr1b, Rule::Fr2b];

    pub fn all() -> Self {
        Self {
            fr0: true,
            fr1a: true,
            fr2a: true,
            fr3: true,
            fr1b: true,
            fr2b: true,
        }
    }

    pub fn none() -> Self {
        Self {
            fr0: false,
            fr1a: false,
            fr2a: false,
            fr3: false,
            fr1b: false,
            fr2b: false,
        }
    }

    /// Sets the flag of `rule`; rules outside [`RuleSet::TOGGLEABLE`] are
    /// ignored.
    pub fn set(&mut self, rule: Rule, on: bool) {
        match rule {
            Rule::Fr0 => self.fr0 = on,
            Rule::Fr1a => self.fr1a = on,
            Rule::Fr2a => self.fr2a = on,
            Rule::Fr3 => self.fr3 = on,
            Rule::Fr1b => self.fr1b = on,
            Rule::Fr2b => self.fr2b = on,
            _ => {}
        }
    }

    pub fn only(rule: Rule) -> Self {
        let mut r = Self::none();
        r.set(rule, true);
        r
    }

    pub fn without(rule: Rule) -> Self {
        let mut r = Self::all();
        r.set(rule, false);
        r
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::all()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresolveFlags {
    pub duality: bool,
    pub singleton: bool,
    /// Add disjunction cuts for dominating column pairs.
    pub dominating_cuts: bool,
    pub root_probing: bool,
    pub branch_probing: bool,
}

impl Default for PresolveFlags {
    fn default() -> Self {
        Self {
            duality: true,
            singleton: false,
            dominating_cuts: false,
            root_probing: false,
            branch_probing: true,
        }
    }
}

impl PresolveFlags {
    pub fn off() -> Self {
        Self {
            duality: false,
            singleton: false,
            dominating_cuts: false,
            root_probing: false,
            branch_probing: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BbConfig {
    /// Wall-clock limit in seconds for the whole solve.
    pub time_limit: f64,
    pub milp: MilpOptions,
    pub preprocess: PreprocessConfig,
    pub presolve: PresolveFlags,
    pub rules: RuleSet,
    /// Fathom nodes whose frontier the store dominates entirely, and cap
    /// objectives to the surviving part.
    pub os_fathoming: bool,
    pub pareto_branching: bool,
    /// Keep the chord level-curve row from node MILPs in the subtree.
    pub local_cuts: bool,
    pub split_gaps: bool,
    pub theta: f64,
    pub gap_checkpoints: bool,
    pub checkpoint_every: usize,
    pub probe_rounds: usize,
    /// Compute the gap report when the time limit interrupts the search.
    pub final_gap: bool,
}

impl Default for BbConfig {
    fn default() -> Self {
        Self {
            time_limit: f64::INFINITY,
            milp: MilpOptions::default(),
            preprocess: PreprocessConfig::default(),
            presolve: PresolveFlags::default(),
            rules: RuleSet::all(),
            os_fathoming: true,
            pareto_branching: true,
            local_cuts: false,
            split_gaps: false,
            theta: 0.1,
            gap_checkpoints: false,
            checkpoint_every: 25,
            probe_rounds: 3,
            final_gap: true,
        }
    }
}

/// Gap measures after `nodes` processed nodes of `region`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub region: usize,
    pub nodes: usize,
    pub gap: GapReport,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub nodes: usize,
    pub milps: usize,
    pub lps: usize,
    pub fathomed_infeasible: usize,
    pub fathomed_optimality: usize,
    pub fathomed_dominance: usize,
    /// Nodes fathomed because probing emptied both children; also counted
    /// as dominance or infeasibility fathomings by their cause.
    pub fathomed_probe: usize,
    /// Count per [`Rule`], indexed by [`Rule::index`].
    pub rule_counts: [usize; 13],
    pub pareto_branchings: usize,
    pub variable_branchings: usize,
    pub presolve_fixings: usize,
    pub disjunction_cuts: usize,
    pub level_cuts: usize,
    /// Store size after preprocessing.
    pub preprocess_points: usize,
    pub regions: usize,
    pub lp_failures: usize,
    pub checkpoints: Vec<Checkpoint>,
    pub final_gap: Option<GapReport>,
}

impl SolveStats {
    fn add(&mut self, o: &SolveStats) {
        self.nodes += o.nodes;
        self.milps += o.milps;
        self.lps += o.lps;
        self.fathomed_infeasible += o.fathomed_infeasible;
        self.fathomed_optimality += o.fathomed_optimality;
        self.fathomed_dominance += o.fathomed_dominance;
        self.fathomed_probe += o.fathomed_probe;
        for (a, b) in self.rule_counts.iter_mut().zip(&o.rule_counts) {
            *a += b;
        }
        self.pareto_branchings += o.pareto_branchings;
        self.variable_branchings += o.variable_branchings;
        self.lp_failures += o.lp_failures;
        self.checkpoints.extend(o.checkpoints.iter().copied());
    }

    /// Share of dominance fathomings among fathomings by dominance and
    /// infeasibility.
    pub fn dominance_share(&self) -> f64 {
        let total = self.fathomed_dominance + self.fathomed_infeasible;
        if total == 0 {
            1.0
        } else {
            self.fathomed_dominance as f64 / total as f64
        }
    }

    pub fn rule_count(&self, r: Rule) -> usize {
        self.rule_counts[r.index()]
    }

    fn fathomed(&mut self, status: NodeStatus, rule: Rule) {
        self.rule_counts[rule.index()] += 1;
        if rule == Rule::Probe {
            self.fathomed_probe += 1;
        }
        match status {
            NodeStatus::Infeasible => self.fathomed_infeasible += 1,
            NodeStatus::Optimality => self.fathomed_optimality += 1,
            NodeStatus::Dominance => self.fathomed_dominance += 1,
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The store is the complete nondominated set.
    Complete,
    /// The time limit stopped the search; the store is a subset.
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub store: ParetoStore,
    pub stats: SolveStats,
    /// Lexicographic endpoint images.
    pub y1: ObjPoint,
    pub y2: ObjPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum BbError {
    #[error("the instance has no integer-feasible solution")]
    Infeasible,
    #[error("the time limit expired before both lexicographic endpoints were found")]
    EndpointTimeout,
}

/// One line of the node log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeEvent {
    pub region: usize,
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub status: NodeStatus,
    /// Fathoming rule, or the kind of branching.
    pub rule: Option<Rule>,
}

/// Receives node and checkpoint events as they happen.
pub trait Observer {
    fn node(&mut self, _ev: &NodeEvent) {}
    fn checkpoint(&mut self, _ev: &Checkpoint) {}
}

/// Discards every event.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl Observer for NoObserver {}

/// State shared by all regions after presolve and preprocessing.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// The instance with presolve fixings applied to its bounds.
    pub inst: Instance,
    /// Globally valid rows: disjunction cuts and preprocessing level cuts.
    pub rows: Vec<Row>,
    pub y1: ObjPoint,
    pub y2: ObjPoint,
    pub store: ParetoStore,
    pub regions: Vec<Region>,
    pub stats: SolveStats,
}

/// Outcome of one region's search.
#[derive(Debug, Clone)]
pub struct RegionResult {
    pub store: ParetoStore,
    pub stats: SolveStats,
    pub complete: bool,
    /// Frontiers of the nodes left open by the time limit.
    pub open_curves: Vec<FrontElement>,
}

fn absorb_pool(inst: &Instance, store: &mut ParetoStore, pool: &[Vec<f64>]) {
    for x in pool {
        if let Ok(front) = slice_front(inst, x) {
            for e in front {
                store.insert(e);
            }
        }
    }
}

/// Presolve, endpoints, primal-bound seeding and objective-space
/// splitting.
pub fn prepare(inst: &Instance, cfg: &BbConfig, deadline: &Deadline<'_>) -> Result<Prepared, BbError> {
    let mut w = inst.clone();
    let mut stats = SolveStats::default();
    let p = cfg.presolve;
    for (on, fix) in [(p.duality, duality_fix as fn(&Instance) -> _), (p.singleton, singleton_fix)] {
        if on {
            let rep = fix(&w);
            stats.presolve_fixings += rep.fixings.len();
            let (mut lo, mut up) = (w.lower.clone(), w.upper.clone());
            rep.apply(&mut lo, &mut up);
            w.lower = lo;
            w.upper = up;
        }
    }
    let mut rows = Vec::new();
    if p.dominating_cuts {
        let pairs = dominating_pairs(&w);
        rows = disjunction_cuts(&w, &pairs, &w.lower, &w.upper);
        stats.disjunction_cuts = rows.len();
    }
    let ends = lex_endpoints(&w, &w.lower, &w.upper, &rows, &cfg.milp, deadline).map_err(|e| match e {
        EndpointError::Infeasible => BbError::Infeasible,
        EndpointError::Timeout => BbError::EndpointTimeout,
    })?;
    stats.milps += ends.milps;
    stats.lps += ends.lps;
    let mut store = ParetoStore::new();
    absorb_pool(&w, &mut store, &ends.pool);

    if cfg.preprocess.method != PreprocessMethod::None {
        let mut oracle = MilpOracle::new(&w, &w.lower, &w.upper, cfg.milp, *deadline);
        oracle.rows = rows.clone();
        let rho = cfg.preprocess.rho.resolve(&w);
        let (seeded, _) = match cfg.preprocess.method {
            PreprocessMethod::Eps => preprocess_eps(&mut oracle, &ends.y1, &ends.y2, rho, cfg.preprocess.eps_max_steps),
            _ => preprocess_ws(&mut oracle, &ends.y1, &ends.y2, rho, cfg.preprocess.ws_max_rounds),
        };
        store.merge(&seeded);
        stats.milps += oracle.milps;
        stats.lps += oracle.lps;
        stats.level_cuts = oracle.cuts.len();
        rows.extend(oracle.cuts);
    }
    stats.preprocess_points = store.len();

    let regions = if cfg.split_gaps {
        let s = split_os(&w, &rows, &store, &ends.y1, &ends.y2, cfg.theta, &cfg.milp, deadline);
        stats.milps += s.milps;
        stats.lps += s.lps;
        absorb_pool(&w, &mut store, &s.pool);
        s.regions
    } else {
        vec![Region::whole()]
    };
    stats.regions = regions.len();
    Ok(Prepared {
        inst: w,
        rows,
        y1: ends.y1,
        y2: ends.y2,
        store,
        regions,
        stats,
    })
}

struct Queued {
    priority: f64,
    seq: usize,
    node: Node,
}

impl PartialEq for Queued {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Queued {
    // max-heap: the smaller priority, then the older node, pops first
    fn cmp(&self, o: &Self) -> Ordering {
        o.priority
            .partial_cmp(&self.priority)
            .unwrap_or(Ordering::Equal)
            .then_with(|| o.seq.cmp(&self.seq))
    }
}

fn open_curves<'a>(inst: &Instance, rows: &[Row], nodes: impl Iterator<Item = &'a Node>) -> Vec<FrontElement> {
    let mut out = Vec::new();
    for n in nodes {
        if let Ok(c) = parametric_front(inst, &n.lower, &n.upper, &n.rows(inst, rows)) {
            out.extend(c.elements());
        }
    }
    out
}

fn min_caps(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0].min(b[0]), a[1].min(b[1])]
}

/// Branch-and-bound over one region of objective space.
pub fn solve_region(
    prep: &Prepared,
    region: usize,
    cfg: &BbConfig,
    deadline: &Deadline<'_>,
    obs: &mut dyn Observer,
) -> RegionResult {
    let inst = &prep.inst;
    let reg = &prep.regions[region];
    let mut rows = prep.rows.clone();
    rows.extend(reg.rows(inst));
    let mut store = prep.store.clone();
    let mut stats = SolveStats::default();
    let rect = OsRect::from_endpoints(&prep.y1, &prep.y2);
    let ctx = NodeCtx {
        inst,
        rows: &rows,
        rules: cfg.rules,
        local_cuts: cfg.local_cuts,
        milp: cfg.milp,
        deadline: *deadline,
    };
    let probe = cfg.presolve.branch_probing.then_some(cfg.probe_rounds);

    let mut root = Node::root(inst, reg.caps);
    if cfg.presolve.root_probing {
        let root_rows = root.rows(inst, &rows);
        for j in 0..inst.n_int {
            match probe_bounds(inst, &store, j, &root.lower, &root.upper, &root_rows, cfg.probe_rounds) {
                ProbeOutcome::Bounds(l, u) => {
                    root.lower[j] = l;
                    root.upper[j] = u;
                }
                ProbeOutcome::Empty => {
                    return RegionResult {
                        store,
                        stats,
                        complete: true,
                        open_curves: Vec::new(),
                    };
                }
            }
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Queued {
        priority: root.priority,
        seq,
        node: root,
    });
    let mut next_id = 1usize;
    let mut complete = true;
    while let Some(q) = heap.pop() {
        if deadline.expired() {
            heap.push(q);
            complete = false;
            break;
        }
        let node = q.node;
        stats.nodes += 1;
        let mut out = process_node(&ctx, &node, &mut store);
        stats.lps += out.lps;
        stats.milps += out.milps;
        stats.lp_failures += out.lp_failure as usize;
        let mut event = NodeEvent {
            region,
            id: node.id,
            parent: node.parent,
            depth: node.depth,
            status: out.status,
            rule: out.rule,
        };

        let mut caps = node.caps;
        let mut groups = Vec::new();
        if out.status == NodeStatus::Open && cfg.os_fathoming {
            if let Some(eng) = out.engine.as_mut() {
                let before = eng.solves;
                match curve_from_engine(eng) {
                    Ok(curve) => {
                        let os = os_fathom(&curve.elements(), &store);
                        if os.intervals.is_empty() {
                            event.status = NodeStatus::Dominance;
                            event.rule = Some(Rule::Os);
                        } else {
                            caps = min_caps(caps, os.caps);
                            groups = os.intervals;
                        }
                    }
                    Err(LpError::Infeasible) => {
                        event.status = NodeStatus::Infeasible;
                        event.rule = Some(Rule::Infeasible);
                    }
                    Err(_) => stats.lp_failures += 1,
                }
                stats.lps += eng.solves - before;
            }
        }

        if event.status == NodeStatus::Open {
            let priority = out
                .images
                .map(|im| im.weights.0 * im.yl.f1 + im.weights.1 * im.yl.f2)
                .unwrap_or(node.priority);
            let mut cuts = node.cuts.clone();
            cuts.extend(out.local_cut.take());
            let child = |lower: Vec<f64>, upper: Vec<f64>, caps: [f64; 2], chain: u32, id: usize| Node {
                id,
                parent: Some(node.id),
                depth: node.depth + 1,
                lower,
                upper,
                caps,
                cuts: cuts.clone(),
                priority,
                basis: out.basis.clone(),
                pareto_chain: chain,
            };
            let mut kids = Vec::new();
            if cfg.pareto_branching && groups.len() >= 2 && node.pareto_chain < MAX_PARETO_CHAIN {
                for g in &groups {
                    kids.push(child(node.lower.clone(), node.upper.clone(), min_caps(caps, g.caps()), node.pareto_chain + 1, 0));
                }
                stats.pareto_branchings += 1;
                event.status = NodeStatus::Branched;
                event.rule = Some(Rule::Pareto);
            } else {
                let tmp = Node {
                    caps,
                    cuts: cuts.clone(),
                    ..node.clone()
                };
                let child_rows = tmp.rows(inst, &rows);
                match branch_on_variable(inst, &store, &child_rows, &node.lower, &node.upper, &out.scores, &out.frac, probe) {
                    VarBranch::Empty => {
                        stats.milps += 1;
                        event.status = if has_integer_point(inst, &node.lower, &node.upper, &ctx) {
                            NodeStatus::Dominance
                        } else {
                            NodeStatus::Infeasible
                        };
                        event.rule = Some(Rule::Probe);
                    }
                    VarBranch::Children(boxes) => {
                        for (l, u) in boxes {
                            kids.push(child(l, u, caps, 0, 0));
                        }
                        stats.variable_branchings += 1;
                        event.status = NodeStatus::Branched;
                        event.rule = Some(Rule::Variable);
                    }
                }
            }
            for mut k in kids {
                k.id = next_id;
                next_id += 1;
                seq += 1;
                heap.push(Queued {
                    priority: k.priority,
                    seq,
                    node: k,
                });
            }
        }
        if event.status == NodeStatus::Branched {
            if let Some(r) = event.rule {
                stats.rule_counts[r.index()] += 1;
            }
        } else if let Some(r) = event.rule {
            stats.fathomed(event.status, r);
        }
        obs.node(&event);

        if cfg.gap_checkpoints && cfg.checkpoint_every > 0 && stats.nodes % cfg.checkpoint_every == 0 {
            let curves = open_curves(inst, &rows, heap.iter().map(|q| &q.node));
            let db = global_dual_bound(curves, &store);
            let cp = Checkpoint {
                region,
                nodes: stats.nodes,
                gap: gap_checkpoint(&db, &store, &prep.y1, &prep.y2, &rect),
            };
            obs.checkpoint(&cp);
            stats.checkpoints.push(cp);
        }
    }
    let open = if complete || !cfg.final_gap {
        Vec::new()
    } else {
        open_curves(inst, &rows, heap.iter().map(|q| &q.node))
    };
    if cfg.gap_checkpoints && complete {
        let cp = Checkpoint {
            region,
            nodes: stats.nodes,
            gap: gap_checkpoint(&store, &store, &prep.y1, &prep.y2, &rect),
        };
        obs.checkpoint(&cp);
        stats.checkpoints.push(cp);
    }
    RegionResult {
        store,
        stats,
        complete,
        open_curves: open,
    }
}

/// Merges region results in order and reports the final gap.
pub fn finish(prep: Prepared, results: Vec<RegionResult>, cfg: &BbConfig) -> SolveOutcome {
    let mut store = prep.store;
    let mut stats = prep.stats;
    let mut complete = true;
    let mut curves = Vec::new();
    for (region, r) in prep.regions.iter().zip(&results) {
        for e in r.store.elements() {
            if let Some(c) = region.clip(e) {
                store.insert(c);
            }
        }
        stats.add(&r.stats);
        complete &= r.complete;
        curves.extend(r.open_curves.iter().copied());
    }
    if !complete && cfg.final_gap {
        let db = global_dual_bound(curves, &store);
        let rect = OsRect::from_endpoints(&prep.y1, &prep.y2);
        stats.final_gap = Some(gap_checkpoint(&db, &store, &prep.y1, &prep.y2, &rect));
    } else if complete {
        stats.final_gap = Some(GapReport {
            g: 0.0,
            gbar: 100.0,
            hv: 0.0,
        });
    }
    SolveOutcome {
        status: if complete {
            SolveStatus::Complete
        } else {
            SolveStatus::TimeLimit
        },
        store,
        stats,
        y1: prep.y1,
        y2: prep.y2,
    }
}

/// Solves `inst` to completion without a time limit.
pub fn bb_solve(inst: &Instance, cfg: &BbConfig) -> Result<SolveOutcome, BbError> {
    bb_solve_with(inst, cfg, &NoClock, &mut NoObserver)
}

/// Solves `inst`, measuring `cfg.time_limit` on `clock` and reporting
/// events to `obs`. Regions are processed one after another.
pub fn bb_solve_with(
    inst: &Instance,
    cfg: &BbConfig,
    clock: &dyn Clock,
    obs: &mut dyn Observer,
) -> Result<SolveOutcome, BbError> {
    let deadline = if cfg.time_limit.is_finite() {
        Deadline::after(clock, cfg.time_limit)
    } else {
        Deadline::never(clock)
    };
    let prep = prepare(inst, cfg, &deadline)?;
    let results = (0..prep.regions.len())
        .map(|r| solve_region(&prep, r, cfg, &deadline, obs))
        .collect();
    Ok(finish(prep, results, cfg))
}
