//! Duality-gap measures between a dual bound set and the primal archive.

use alloc::vec::Vec;

use super::point::{FrontElement, ObjPoint};
use super::store::ParetoStore;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GapError {
    #[error("gap measure needs a nonempty dual bound and primal store")]
    EmptyInput,
    #[error("dual bound region has zero area inside the objective-space rectangle")]
    ZeroArea,
}

/// Gap measures at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GapReport {
    /// Distance surrogate in objective units.
    pub g: f64,
    /// Normalized distance, a percentage in `[0,100]`.
    pub gbar: f64,
    /// Hypervolume gap, a percentage in `[0,100]`.
    pub hv: f64,
}

/// Axis-aligned rectangle `[f1_lo,f1_hi] × [f2_lo,f2_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsRect {
    pub f1_lo: f64,
    pub f1_hi: f64,
    pub f2_lo: f64,
    pub f2_hi: f64,
}

impl OsRect {
    /// Rectangle spanned by the two lexicographic endpoints.
    pub fn from_endpoints(y1: &ObjPoint, y2: &ObjPoint) -> Self {
        Self {
            f1_lo: y1.f1.min(y2.f1),
            f1_hi: y1.f1.max(y2.f1),
            f2_lo: y1.f2.min(y2.f2),
            f2_hi: y1.f2.max(y2.f2),
        }
    }

    pub fn area(&self) -> f64 {
        (self.f1_hi - self.f1_lo).max(0.0) * (self.f2_hi - self.f2_lo).max(0.0)
    }
}

const SAMPLES: usize = 1000;

fn nearest(store: &ParetoStore, p: &ObjPoint) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, s) in store.elements().iter().enumerate() {
        let d = s.dist_to_region(p);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// `sup_{p ∈ DB} d(p, U)`: the directed Hausdorff distance from the dual
/// bound region to the primal bound region `U = ∪ (S + R²≥0)`.
///
/// Along a dual-bound segment each `d(·, S + R²≥0)` is convex, so the
/// supremum is attained at a segment end or where the nearest store element
/// changes. Those switch points are located by uniform sampling followed by
/// bisection.
fn directed_distance(db: &ParetoStore, store: &ParetoStore) -> f64 {
    let mut g: f64 = 0.0;
    let elems = store.elements();
    for e in db.elements() {
        match e {
            FrontElement::Point(p) => g = g.max(nearest(store, p).1),
            FrontElement::Segment(_) => {
                let mut prev: Option<(f64, usize, f64)> = None;
                for k in 0..=SAMPLES {
                    let t = k as f64 / SAMPLES as f64;
                    let (i, d) = nearest(store, &e.at(t));
                    g = g.max(d);
                    if let Some((t0, i0, _)) = prev {
                        if i0 != i {
                            // bisect d_i0 - d_i on [t0, t]
                            let f = |s: f64| {
                                let q = e.at(s);
                                elems[i0].dist_to_region(&q) - elems[i].dist_to_region(&q)
                            };
                            let (mut a, mut b) = (t0, t);
                            let fa = f(a);
                            for _ in 0..60 {
                                let m = 0.5 * (a + b);
                                if (f(m) > 0.0) == (fa > 0.0) {
                                    a = m;
                                } else {
                                    b = m;
                                }
                            }
                            let m = 0.5 * (a + b);
                            g = g.max(nearest(store, &e.at(m)).1);
                        }
                    }
                    prev = Some((t, i, d));
                }
            }
        }
    }
    g
}

/// Distance gap `G` and its normalization `Ḡ = 100·|span − G| / span`,
/// where `span = max(y2.f1 − y1.f1, y1.f2 − y2.f2)`.
pub fn hausdorff_gap(
    db: &ParetoStore,
    store: &ParetoStore,
    y1: &ObjPoint,
    y2: &ObjPoint,
) -> Result<(f64, f64), GapError> {
    if db.is_empty() || store.is_empty() {
        return Err(GapError::EmptyInput);
    }
    let g = directed_distance(db, store);
    let span = (y2.f1 - y1.f1).max(y1.f2 - y2.f2);
    let gbar = if span <= tol::OBJ * (1.0 + y1.f1.abs() + y2.f1.abs()) {
        if g <= tol::OBJ {
            100.0
        } else {
            0.0
        }
    } else {
        100.0 * (span - g).abs() / span
    };
    Ok((g, gbar.clamp(0.0, 100.0)))
}

/// Area of `(∪ S + R²≥0) ∩ rect`, exact for piecewise-linear boundaries.
pub fn dominated_area(store: &ParetoStore, rect: &OsRect) -> f64 {
    let (x0, x1, y0, y1) = (rect.f1_lo, rect.f1_hi, rect.f2_lo, rect.f2_hi);
    if x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    let mut xs: Vec<f64> = Vec::with_capacity(4 * store.len() + 2);
    xs.push(x0);
    xs.push(x1);
    for e in store.elements() {
        xs.push(e.left().f1);
        xs.push(e.right().f1);
        if let FrontElement::Segment(s) = e {
            let sl = s.slope();
            for y in [y0, y1] {
                let x = s.left.f1 + (y - s.left.f2) / sl;
                if x > s.left.f1 && x < s.right.f1 {
                    xs.push(x);
                }
            }
        }
    }
    xs.retain(|x| *x >= x0 && *x <= x1);
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    xs.dedup();
    let mut area = 0.0;
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let m = 0.5 * (a + b);
        let lo = store.envelope_at(m).clamp(y0, y1);
        area += (b - a) * (y1 - lo);
    }
    area
}

/// Hypervolume gap `100·(hv(DB) − hv(U)) / hv(DB)` inside `rect`.
pub fn hypervolume_gap(db: &ParetoStore, store: &ParetoStore, rect: &OsRect) -> Result<f64, GapError> {
    let hv_db = dominated_area(db, rect);
    if hv_db <= 0.0 {
        return Err(GapError::ZeroArea);
    }
    let hv_u = dominated_area(store, rect);
    Ok((100.0 * (hv_db - hv_u) / hv_db).clamp(0.0, 100.0))
}
