//! Objective-space fathoming, Pareto branching and variable branching.

use alloc::vec::Vec;

use crate::geometry::{FrontElement, ObjPoint, ParetoStore};
use crate::model::{Instance, Row};
use crate::presolve::{probe_bounds, ProbeOutcome};
use crate::tol;

/// A connected stretch of the relaxation frontier not dominated by the
/// store.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub left: ObjPoint,
    pub right: ObjPoint,
    /// The stretch starts at the west end of the frontier.
    pub west_end: bool,
    /// The stretch stops at the east end of the frontier.
    pub east_end: bool,
}

impl Interval {
    /// Caps `f1 <= right.f1`, `f2 <= left.f2`, loosened by the objective
    /// tolerance. A stretch reaching an end of the frontier leaves the
    /// corresponding objective uncapped: images above that end may lie
    /// beyond it.
    pub fn caps(&self) -> [f64; 2] {
        [
            if self.east_end { f64::INFINITY } else { loosen(self.right.f1) },
            if self.west_end { f64::INFINITY } else { loosen(self.left.f2) },
        ]
    }
}

fn loosen(v: f64) -> f64 {
    v + tol::OBJ * (1.0 + v.abs())
}

/// Outcome of objective-space fathoming.
#[derive(Debug, Clone, PartialEq)]
pub struct OsFathom {
    /// Caps covering every surviving interval.
    pub caps: [f64; 2],
    /// Surviving intervals, west to east; empty when the node is fathomed.
    pub intervals: Vec<Interval>,
}

/// Surviving parts of the frontier `curve` (elements west to east) and the
/// objective caps implied by them.
///
/// Every integer image of the node that the store does not dominate lies
/// above a surviving frontier point, and the stretch of frontier below-left
/// of it survives entirely; so its `f1` is at most the right end and its
/// `f2` at most the left end of one connected interval, unless that
/// interval reaches the respective end of the frontier.
pub fn os_fathom(curve: &[FrontElement], store: &ParetoStore) -> OsFathom {
    let close = |a: &ObjPoint, b: &ObjPoint| {
        let scale = 1.0 + a.f1.abs() + a.f2.abs();
        (a.f1 - b.f1).abs() <= tol::OBJ * scale && (a.f2 - b.f2).abs() <= tol::OBJ * scale
    };
    let mut intervals: Vec<Interval> = Vec::new();
    for e in curve {
        for piece in store.undominated_pieces(e) {
            let (l, r) = (piece.left(), piece.right());
            if let Some(last) = intervals.last_mut() {
                if close(&last.right, &l) {
                    last.right = r;
                    continue;
                }
            }
            intervals.push(Interval {
                left: l,
                right: r,
                west_end: false,
                east_end: false,
            });
        }
    }
    if let (Some(first), Some(last)) = (curve.first(), curve.last()) {
        let (west, east) = (first.left(), last.right());
        if let Some(i) = intervals.first_mut() {
            i.west_end = close(&west, &i.left);
        }
        if let Some(i) = intervals.last_mut() {
            i.east_end = close(&east, &i.right);
        }
    }
    let caps = match (intervals.first(), intervals.last()) {
        (Some(a), Some(b)) => [b.caps()[0], a.caps()[1]],
        _ => [f64::NEG_INFINITY; 2],
    };
    OsFathom { caps, intervals }
}

/// Highest-scoring free integer variable not in `skip`, ties to the highest
/// index (so all-zero scores pick the last free integer).
pub fn choose_branch_var(scores: &[u32], lower: &[f64], upper: &[f64], skip: &[usize]) -> Option<usize> {
    let mut best: Option<(u32, usize)> = None;
    for (j, &s) in scores.iter().enumerate() {
        if lower[j] >= upper[j] || skip.contains(&j) {
            continue;
        }
        if best.is_none_or(|(b, _)| s >= b) {
            best = Some((s, j));
        }
    }
    best.map(|(_, j)| j)
}

/// Value `v` for the split `x <= v` / `x >= v + 1`: the floor of a
/// fractional relaxation value inside the bounds, else the bound midpoint.
pub fn split_value(frac: Option<f64>, lo: f64, up: f64) -> f64 {
    match frac {
        Some(v) if v > lo && v < up && !tol::is_integral(v) => tol::floor(v),
        _ => tol::floor((lo + up) / 2.0),
    }
}

/// Bounds of the children of a variable branching.
#[derive(Debug, Clone, PartialEq)]
pub enum VarBranch {
    Children(Vec<(Vec<f64>, Vec<f64>)>),
    /// Probing eliminated every value of the node.
    Empty,
}

/// Branches on the best-scoring variable. With probing, a child whose
/// probe proves it empty is dropped, its sibling's bounds are adopted and
/// the next variable is tried; a node reduced this way to a single box is
/// returned as one child.
#[allow(clippy::too_many_arguments)]
pub fn branch_on_variable(
    inst: &Instance,
    store: &ParetoStore,
    rows: &[Row],
    lower: &[f64],
    upper: &[f64],
    scores: &[u32],
    frac: &[Option<f64>],
    probe_rounds: Option<usize>,
) -> VarBranch {
    let n_int = inst.n_int;
    let mut lo = lower.to_vec();
    let mut up = upper.to_vec();
    let mut skip = Vec::new();
    let mut narrowed = false;
    loop {
        let Some(j) = choose_branch_var(&scores[..n_int], &lo[..n_int], &up[..n_int], &skip) else {
            return VarBranch::Children(alloc::vec![(lo, up)]);
        };
        let v = split_value(if narrowed { None } else { frac[j] }, lo[j], up[j]);
        let mut kids = [(lo.clone(), up.clone()), (lo.clone(), up.clone())];
        kids[0].1[j] = v;
        kids[1].0[j] = v + 1.0;
        let mut alive = [true; 2];
        if let Some(rounds) = probe_rounds {
            for (k, kid) in kids.iter_mut().enumerate() {
                match probe_bounds(inst, store, j, &kid.0, &kid.1, rows, rounds) {
                    ProbeOutcome::Bounds(l, u) => {
                        kid.0[j] = l;
                        kid.1[j] = u;
                    }
                    ProbeOutcome::Empty => alive[k] = false,
                }
            }
        }
        match alive {
            [true, true] => return VarBranch::Children(kids.into()),
            [false, false] => return VarBranch::Empty,
            _ => {
                let [a, b] = kids;
                (lo, up) = if alive[0] { a } else { b };
                skip.push(j);
                narrowed = true;
            }
        }
    }
}
