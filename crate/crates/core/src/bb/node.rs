//! Processing of a single node: relaxation endpoints, the chord-weighted
//! solve, and the dominance tests that may fathom the node.

use alloc::vec;
use alloc::vec::Vec;

use super::slice::slice_front;
use super::RuleSet;
use crate::clock::Deadline;
use crate::geometry::{FrontElement, ObjPoint, ParetoStore};
use crate::lp::{fr0_walk, fr3_walk, LpBasis, LpEngine, LpError};
use crate::milp::{level_curve_cut, milp_solve, MilpOptions, MilpStatus};
use crate::model::{Instance, Row};
use crate::preprocess::chord_weights;
use crate::tol;

/// An open subproblem.
#[derive(Debug, Clone)]
pub struct Node {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Objective caps `f1 <= caps[0]`, `f2 <= caps[1]`.
    pub caps: [f64; 2],
    /// Level-curve rows valid in this subtree only.
    pub cuts: Vec<Row>,
    /// Selection key, smaller first.
    pub priority: f64,
    pub basis: Option<LpBasis>,
    /// Consecutive objective-space branchings on the path to this node.
    pub pareto_chain: u32,
}

impl Node {
    pub fn root(inst: &Instance, caps: [f64; 2]) -> Self {
        Self {
            id: 0,
            parent: None,
            depth: 0,
            lower: inst.lower.clone(),
            upper: inst.upper.clone(),
            caps,
            cuts: Vec::new(),
            priority: f64::NEG_INFINITY,
            basis: None,
            pareto_chain: 0,
        }
    }

    /// Shared rows, then objective caps, then local cuts.
    pub fn rows(&self, inst: &Instance, shared: &[Row]) -> Vec<Row> {
        let mut rows = shared.to_vec();
        if self.caps[0].is_finite() {
            rows.push(Row::from_dense(&inst.c1, self.caps[0]));
        }
        if self.caps[1].is_finite() {
            rows.push(Row::from_dense(&inst.c2, self.caps[1]));
        }
        rows.extend(self.cuts.iter().cloned());
        rows
    }

    pub fn all_integers_fixed(&self, n_int: usize) -> bool {
        (0..n_int).all(|j| self.lower[j] == self.upper[j])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Open,
    Infeasible,
    Optimality,
    Dominance,
    Branched,
}

impl NodeStatus {
    pub fn name(self) -> &'static str {
        match self {
            NodeStatus::Open => "open",
            NodeStatus::Infeasible => "infeasible",
            NodeStatus::Optimality => "optimality",
            NodeStatus::Dominance => "dominance",
            NodeStatus::Branched => "branched",
        }
    }
}

/// Reason a node was fathomed (or branched).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// The relaxation's whole frontier is integer-feasible.
    Fr0,
    /// Both LP ideal points are dominated.
    Fr1a,
    /// The LP chord segment is dominated.
    Fr2a,
    /// Every edge of the relaxation's frontier is dominated.
    Fr3,
    /// Both mixed LP/MILP ideal points are dominated.
    Fr1b,
    /// The MILP chord segment is dominated.
    Fr2b,
    /// No part of the frontier survives the store.
    Os,
    /// All integers fixed: the slice frontier was inserted.
    Leaf,
    /// Probing emptied both children.
    Probe,
    /// Single-objective infeasibility (LP or MILP).
    Infeasible,
    /// The node has integer-feasible points, but none meets its objective
    /// bounds (caps and level cuts derived from the store, region bounds).
    Bound,
    Pareto,
    Variable,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::Fr0,
        Rule::Fr1a,
        Rule::Fr2a,
        Rule::Fr3,
        Rule::Fr1b,
        Rule::Fr2b,
        Rule::Os,
        Rule::Leaf,
        Rule::Probe,
        Rule::Infeasible,
        Rule::Bound,
        Rule::Pareto,
        Rule::Variable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Fr0 => "fr0",
            Rule::Fr1a => "fr1a",
            Rule::Fr2a => "fr2a",
            Rule::Fr3 => "fr3",
            Rule::Fr1b => "fr1b",
            Rule::Fr2b => "fr2b",
            Rule::Os => "os",
            Rule::Leaf => "leaf",
            Rule::Probe => "probe",
            Rule::Infeasible => "infeasible",
            Rule::Bound => "bound",
            Rule::Pareto => "pareto",
            Rule::Variable => "variable",
        }
    }

    pub fn index(self) -> usize {
        Rule::ALL.iter().position(|r| *r == self).unwrap_or(0)
    }
}

/// Relaxation images of a processed node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeImages {
    pub y1: ObjPoint,
    pub y2: ObjPoint,
    pub yl: ObjPoint,
    pub weights: (f64, f64),
}

/// `[ideal({y2, yλ}), ideal({y1, yλ})]`: the ideal points of the two
/// halves of the relaxation frontier split at `yλ`.
pub fn ideal_points_lp(y1: &ObjPoint, y2: &ObjPoint, yl: &ObjPoint) -> [ObjPoint; 2] {
    [y2.ideal(yl), y1.ideal(yl)]
}

/// As [`ideal_points_lp`] with every image `i` for which `milp[i]` is
/// given replaced by it (index 0 = `f1`, 1 = `f2`, 2 = chord weight).
pub fn mixed_ideal_points(lp: &[ObjPoint; 3], milp: &[Option<ObjPoint>; 3]) -> [ObjPoint; 2] {
    let pick = |i: usize| milp[i].unwrap_or(lp[i]);
    ideal_points_lp(&pick(0), &pick(1), &pick(2))
}

/// The part of the line `λ·y = level` inside `anchor + R²≥0`, as a frontier
/// element whose dominated region is `{y >= anchor, λ·y >= level}`.
pub fn clipped_level_segment(anchor: ObjPoint, weights: (f64, f64), level: f64) -> FrontElement {
    let (l1, l2) = weights;
    let at_anchor = l1 * anchor.f1 + l2 * anchor.f2;
    if at_anchor >= level {
        return FrontElement::Point(anchor);
    }
    if l2 <= 1e-12 {
        return FrontElement::Point(ObjPoint::new(anchor.f1.max(level / l1), anchor.f2));
    }
    if l1 <= 1e-12 {
        return FrontElement::Point(ObjPoint::new(anchor.f1, anchor.f2.max(level / l2)));
    }
    let p = ObjPoint::new(anchor.f1, (level - l1 * anchor.f1) / l2);
    let q = ObjPoint::new((level - l2 * anchor.f2) / l1, anchor.f2);
    FrontElement::from_endpoints(p, q)
}

/// Chord segment of the relaxation: the level line of `f_λ` through `yλ`
/// clipped to the quadrant of the LP ideal point `(y1.f1, y2.f2)`.
pub fn lp_ideal_segment(im: &NodeImages) -> FrontElement {
    let level = im.weights.0 * im.yl.f1 + im.weights.1 * im.yl.f2;
    clipped_level_segment(ObjPoint::new(im.y1.f1, im.y2.f2), im.weights, level)
}

/// Chord segment from MILP information: anchor from the MILP (or LP)
/// endpoint images and the MILP level of `f_λ`.
pub fn milp_ideal_segment(anchor: ObjPoint, weights: (f64, f64), level: f64) -> FrontElement {
    clipped_level_segment(anchor, weights, level)
}

/// Read-only solver context shared by all nodes of a region.
pub struct NodeCtx<'a, 'c> {
    pub inst: &'a Instance,
    /// Rows valid everywhere in the region.
    pub rows: &'a [Row],
    pub rules: RuleSet,
    pub local_cuts: bool,
    pub milp: MilpOptions,
    pub deadline: Deadline<'c>,
}

/// Result of processing a node.
pub struct Processed {
    pub status: NodeStatus,
    pub rule: Option<Rule>,
    /// Branching score of every integer variable.
    pub scores: Vec<u32>,
    /// A fractional relaxation value of each integer variable, if seen.
    pub frac: Vec<Option<f64>>,
    pub images: Option<NodeImages>,
    pub local_cut: Option<Row>,
    pub basis: Option<LpBasis>,
    /// The node's relaxation, kept for objective-space fathoming.
    pub engine: Option<LpEngine>,
    pub lps: usize,
    pub milps: usize,
    pub lp_failure: bool,
}

impl Processed {
    fn new(n_int: usize) -> Self {
        Self {
            status: NodeStatus::Open,
            rule: None,
            scores: vec![0; n_int],
            frac: vec![None; n_int],
            images: None,
            local_cut: None,
            basis: None,
            engine: None,
            lps: 0,
            milps: 0,
            lp_failure: false,
        }
    }

    fn fathom(mut self, status: NodeStatus, rule: Rule) -> Self {
        self.status = status;
        self.rule = Some(rule);
        self
    }

    /// Scores the fractional integers of `x`; true if none is fractional.
    fn note(&mut self, x: &[f64]) -> bool {
        let mut integral = true;
        for (j, &v) in x.iter().enumerate().take(self.scores.len()) {
            if !tol::is_integral(v) {
                integral = false;
                self.scores[j] += 1;
                self.frac[j].get_or_insert(v);
            }
        }
        integral
    }
}

fn absorb(inst: &Instance, store: &mut ParetoStore, x: &[f64]) {
    if let Ok(front) = slice_front(inst, x) {
        for e in front {
            store.insert(e);
        }
    }
}

/// Runs the node's relaxation solves and dominance tests, updating `store`
/// with the frontier of every integer-feasible solution met.
pub fn process_node(ctx: &NodeCtx<'_, '_>, node: &Node, store: &mut ParetoStore) -> Processed {
    let inst = ctx.inst;
    let mut out = Processed::new(inst.n_int);
    if node.all_integers_fixed(inst.n_int) {
        return match slice_front(inst, &node.lower) {
            Ok(front) => {
                for e in front {
                    store.insert(e);
                }
                out.fathom(NodeStatus::Optimality, Rule::Leaf)
            }
            Err(LpError::Infeasible) => out.fathom(NodeStatus::Infeasible, Rule::Infeasible),
            Err(_) => {
                out.lp_failure = true;
                out.fathom(NodeStatus::Optimality, Rule::Leaf)
            }
        };
    }
    let rows = node.rows(inst, ctx.rows);
    let mut eng = LpEngine::new(inst, &node.lower, &node.upper, &rows);
    if let Some(b) = &node.basis {
        if b.n == eng.n() && b.m == eng.m() {
            eng.warm_start(b);
        }
    }
    let out = relaxation_tests(ctx, node, store, &mut eng, &rows, out);
    let mut out = out;
    out.lps += eng.solves;
    if out.status == NodeStatus::Infeasible && !rows.is_empty() {
        out = classify_infeasible(ctx, node, out);
    }
    if out.status == NodeStatus::Open {
        out.engine = Some(eng);
    }
    out
}

/// True if the instance rows alone admit an integer-feasible point in the
/// box. Telling such a box apart from one without integer points separates
/// dominance fathomings (the points exist but violate objective-space rows
/// or are dominated) from infeasibility. A search that does not finish
/// answers false.
pub fn has_integer_point(inst: &Instance, lower: &[f64], upper: &[f64], ctx: &NodeCtx<'_, '_>) -> bool {
    milp_solve(inst, (1.0, 0.0), lower, upper, &[], &ctx.milp, &ctx.deadline).x.is_some()
}

fn classify_infeasible(ctx: &NodeCtx<'_, '_>, node: &Node, mut out: Processed) -> Processed {
    out.milps += 1;
    if has_integer_point(ctx.inst, &node.lower, &node.upper, ctx) {
        out.status = NodeStatus::Dominance;
        out.rule = Some(Rule::Bound);
    }
    out
}

fn relaxation_tests(
    ctx: &NodeCtx<'_, '_>,
    node: &Node,
    store: &mut ParetoStore,
    eng: &mut LpEngine,
    rows: &[Row],
    mut out: Processed,
) -> Processed {
    let inst = ctx.inst;
    macro_rules! lp {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(LpError::Infeasible) => return out.fathom(NodeStatus::Infeasible, Rule::Infeasible),
                Err(_) => {
                    out.lp_failure = true;
                    return out;
                }
            }
        };
    }
    let y1 = lp!(eng.solve_lex(1));
    let x1 = eng.x();
    out.basis = Some(eng.basis());
    let int1 = out.note(&x1);
    if int1 {
        absorb(inst, store, &x1);
    }
    let y2 = lp!(eng.solve_lex(2));
    let x2 = eng.x();
    let int2 = out.note(&x2);
    if int2 {
        absorb(inst, store, &x2);
    }
    if int1 && int2 && ctx.rules.fr0 {
        let walk = lp!(fr0_walk(eng, &y1, &y2));
        for x in &walk.preimages {
            absorb(inst, store, x);
        }
        for j in walk.changed {
            out.scores[j] += 1;
        }
        if walk.fathom {
            return out.fathom(NodeStatus::Optimality, Rule::Fr0);
        }
    }
    let w = chord_weights(&y1, &y2);
    lp!(eng.solve(w.0, w.1));
    let xl = eng.x();
    let yl = eng.image();
    if out.note(&xl) {
        absorb(inst, store, &xl);
    }
    let im = NodeImages { y1, y2, yl, weights: w };
    out.images = Some(im);
    let r = ctx.rules;

    let dominated = [y1, y2, yl].iter().all(|y| store.dominates_point(y));
    let ideals = ideal_points_lp(&y1, &y2, &yl);
    if dominated {
        if r.fr1a && ideals.iter().all(|p| store.dominates_point(p)) {
            return out.fathom(NodeStatus::Dominance, Rule::Fr1a);
        }
        if r.fr2a && store.is_dominated(&lp_ideal_segment(&im)) {
            return out.fathom(NodeStatus::Dominance, Rule::Fr2a);
        }
        if r.fr3 && lp!(fr3_walk(eng, &y1, &y2, store)) {
            return out.fathom(NodeStatus::Dominance, Rule::Fr3);
        }
        return out;
    }
    if !(r.fr1b || r.fr2b) {
        return out;
    }

    // MILPs replace the LP images whose ideal points escape the store.
    let mut in_i = [false; 3];
    if !store.dominates_point(&ideals[0]) {
        in_i[1] = true;
        in_i[2] = true;
    }
    if !store.dominates_point(&ideals[1]) {
        in_i[0] = true;
        in_i[2] = true;
    }
    let lp_im = [y1, y2, yl];
    let weights = [(1.0, 0.0), (0.0, 1.0), w];
    let mut milp_im: [Option<ObjPoint>; 3] = [None; 3];
    let mut level = f64::NAN;
    let mut optima: Vec<Vec<f64>> = Vec::new();
    for i in 0..3 {
        if !in_i[i] {
            continue;
        }
        let res = milp_solve(inst, weights[i], &node.lower, &node.upper, rows, &ctx.milp, &ctx.deadline);
        out.milps += 1;
        out.lps += res.lp_solves;
        for x in &res.pool {
            absorb(inst, store, x);
        }
        match res.status {
            MilpStatus::Infeasible => return out.fathom(NodeStatus::Infeasible, Rule::Infeasible),
            MilpStatus::Optimal => {
                let x = res.x.clone().unwrap_or_default();
                milp_im[i] = Some(inst.objectives(&x));
                optima.push(x);
                if i == 2 {
                    level = res.value;
                }
            }
            MilpStatus::FeasibleTimeout => {
                let b = res.bound;
                if !b.is_finite() {
                    continue;
                }
                // bound surrogates weakly dominate every integer image
                milp_im[i] = Some(match i {
                    0 => ObjPoint::new(b, y1.f2),
                    1 => ObjPoint::new(y2.f1, b),
                    _ => {
                        let t = (b - (w.0 * yl.f1 + w.1 * yl.f2)) / (w.0 * w.0 + w.1 * w.1);
                        ObjPoint::new(yl.f1 + t * w.0, yl.f2 + t * w.1)
                    }
                });
                if i == 2 {
                    level = b;
                }
            }
        }
    }
    for j in 0..inst.n_int {
        if optima.iter().any(|x| (x[j] - optima[0][j]).abs() > 0.5) {
            out.scores[j] += 1;
        }
    }
    if ctx.local_cuts && level.is_finite() {
        out.local_cut = Some(level_curve_cut(inst, w, level));
    }
    if r.fr1b && mixed_ideal_points(&lp_im, &milp_im).iter().all(|p| store.dominates_point(p)) {
        return out.fathom(NodeStatus::Dominance, Rule::Fr1b);
    }
    if r.fr2b && level.is_finite() {
        let anchor = ObjPoint::new(milp_im[0].map_or(y1.f1, |p| p.f1), milp_im[1].map_or(y2.f2, |p| p.f2));
        if store.is_dominated(&milp_ideal_segment(anchor, w, level)) {
            return out.fathom(NodeStatus::Dominance, Rule::Fr2b);
        }
    }
    out
}
