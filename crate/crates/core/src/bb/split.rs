//! Splitting objective space at large gaps of the seeded store.

use alloc::vec::Vec;

use crate::clock::Deadline;
use crate::geometry::{FrontElement, ObjPoint, ParetoStore};
use crate::milp::MilpOptions;
use crate::model::{Instance, Row};
use crate::preprocess::{lex_endpoints, EndpointError};
use crate::tol;

/// A slab `f1_lo <= f1` of objective space with caps on both objectives.
///
/// The searched slab is slightly wider than the nominal one, `slab`, so that
/// neighbouring regions overlap; results are clipped back to `slab` before
/// they are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub f1_lo: f64,
    pub caps: [f64; 2],
    pub slab: [f64; 2],
}

impl Region {
    pub fn whole() -> Self {
        Self {
            f1_lo: f64::NEG_INFINITY,
            caps: [f64::INFINITY; 2],
            slab: [f64::NEG_INFINITY, f64::INFINITY],
        }
    }

    /// The part of `e` inside the nominal slab.
    pub fn clip(&self, e: &FrontElement) -> Option<FrontElement> {
        let [a, b] = self.slab;
        let (l, r) = (e.left(), e.right());
        if r.f1 < a || l.f1 > b {
            return None;
        }
        if l.f1 >= a && r.f1 <= b {
            return Some(*e);
        }
        let d = r.f1 - l.f1;
        let s = if l.f1 < a { (a - l.f1) / d } else { 0.0 };
        let t = if r.f1 > b { (b - l.f1) / d } else { 1.0 };
        Some(e.sub(s, t))
    }

    /// The `f1 >= f1_lo` row, if bounded.
    pub fn rows(&self, inst: &Instance) -> Vec<Row> {
        if self.f1_lo.is_finite() {
            let neg: Vec<f64> = inst.c1.iter().map(|v| -v).collect();
            alloc::vec![Row::from_dense(&neg, -self.f1_lo)]
        } else {
            Vec::new()
        }
    }
}

/// Cut points: midpoints of the `f1`-gaps between consecutive store
/// elements wider than `theta` times the `f1` span of the endpoints.
pub fn gap_cuts(store: &ParetoStore, y1: &ObjPoint, y2: &ObjPoint, theta: f64) -> Vec<f64> {
    let span = y2.f1 - y1.f1;
    if span <= 0.0 {
        return Vec::new();
    }
    store
        .elements()
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0].right().f1, w[1].left().f1);
            (b - a > theta * span).then_some(0.5 * (a + b))
        })
        .collect()
}

/// Result of [`split_os`].
#[derive(Debug, Clone)]
pub struct Split {
    pub regions: Vec<Region>,
    /// Integer-feasible solutions met by the shrinking MILPs.
    pub pool: Vec<Vec<f64>>,
    pub milps: usize,
    pub lps: usize,
}

fn loosen(v: f64) -> f64 {
    v + tol::OBJ * (1.0 + v.abs())
}

/// Splits objective space at the large gaps of `store` and shrinks every
/// slab to the lexicographic endpoints of the integer images inside it.
/// Infeasible slabs are dropped; a slab whose MILPs time out keeps its
/// unshrunk caps.
#[allow(clippy::too_many_arguments)]
pub fn split_os(
    inst: &Instance,
    rows: &[Row],
    store: &ParetoStore,
    y1: &ObjPoint,
    y2: &ObjPoint,
    theta: f64,
    opts: &MilpOptions,
    deadline: &Deadline<'_>,
) -> Split {
    let cuts = gap_cuts(store, y1, y2, theta);
    let mut out = Split {
        regions: Vec::new(),
        pool: Vec::new(),
        milps: 0,
        lps: 0,
    };
    if cuts.is_empty() {
        out.regions.push(Region::whole());
        return out;
    }
    let mut bounds = Vec::with_capacity(cuts.len() + 1);
    let mut lo = f64::NEG_INFINITY;
    for &c in &cuts {
        bounds.push((lo, c));
        lo = c;
    }
    bounds.push((lo, f64::INFINITY));
    for (lo, hi) in bounds {
        let slab = [lo, hi];
        let lo = if lo.is_finite() { lo - tol::OBJ * (1.0 + lo.abs()) } else { lo };
        let hi = if hi.is_finite() { loosen(hi) } else { hi };
        let mut region = Region {
            f1_lo: lo,
            caps: [hi, f64::INFINITY],
            slab,
        };
        let mut r = rows.to_vec();
        r.extend(region.rows(inst));
        if hi.is_finite() {
            r.push(Row::from_dense(&inst.c1, hi));
        }
        match lex_endpoints(inst, &inst.lower, &inst.upper, &r, opts, deadline) {
            Ok(e) => {
                out.milps += e.milps;
                out.lps += e.lps;
                out.pool.extend(e.pool);
                region.caps = [loosen(e.y2.f1).min(hi), loosen(e.y1.f2)];
                out.regions.push(region);
            }
            Err(EndpointError::Infeasible) => {}
            Err(EndpointError::Timeout) => out.regions.push(region),
        }
    }
    out
}
