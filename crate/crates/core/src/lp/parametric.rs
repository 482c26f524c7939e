//! West-to-east generation of the nondominated frontier of a biobjective LP.
//!
//! Starting from the lexicographic minimizer of `(f1, f2)`, the walk keeps a
//! basis that is optimal for `min f1 + α f2` and raises `α` to the upper end
//! of the basis' sensitivity interval. At that weight the optimal face is a
//! frontier edge; minimizing `f2` over the face (only columns with zero
//! parametric reduced cost may enter) reaches the edge's eastern end with a
//! basis optimal just beyond the breakpoint. The walk ends when no column
//! can decrease `f2`, i.e. at the lexicographic minimizer of `(f2, f1)`.

use alloc::vec;
use alloc::vec::Vec;

use super::{LpEngine, LpError};
use crate::geometry::{FrontElement, ObjPoint, ParetoStore};
use crate::model::{Instance, Row};
use crate::tol;

/// Convex piecewise-linear nondominated frontier of an LP relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBoundCurve {
    /// Breakpoints, `f1` strictly increasing and `f2` strictly decreasing.
    pub points: Vec<ObjPoint>,
    /// Preimage of each breakpoint.
    pub preimages: Vec<Vec<f64>>,
    /// Per segment: certified integer-feasible (both ends integral in the
    /// integer variables with identical integer parts).
    pub seg_int: Vec<bool>,
    /// Integer variables whose value changed between adjacent breakpoints.
    pub int_changes: Vec<usize>,
}

impl DualBoundCurve {
    pub fn elements(&self) -> Vec<FrontElement> {
        if self.points.len() == 1 {
            return vec![FrontElement::Point(self.points[0])];
        }
        self.points
            .windows(2)
            .map(|w| FrontElement::from_endpoints(w[0], w[1]))
            .collect()
    }

    pub fn left(&self) -> ObjPoint {
        self.points[0]
    }

    pub fn right(&self) -> ObjPoint {
        self.points[self.points.len() - 1]
    }

    /// Slopes `Δf2/Δf1` of consecutive segments.
    pub fn slopes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[1].f2 - w[0].f2) / (w[1].f1 - w[0].f1))
            .collect()
    }
}

/// One frontier edge produced by the walk.
#[derive(Debug, Clone)]
pub struct FrontPiece {
    pub a: ObjPoint,
    pub b: ObjPoint,
    pub xa: Vec<f64>,
    pub xb: Vec<f64>,
    pub integral: bool,
    pub changed: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkControl {
    Continue,
    Stop,
}

/// Result of a (possibly interrupted) frontier walk.
#[derive(Debug, Clone)]
pub struct FrontWalk {
    pub start: ObjPoint,
    pub start_x: Vec<f64>,
    /// True if the walk reached the eastern end without being stopped.
    pub complete: bool,
}

fn integer_parts_match(xa: &[f64], xb: &[f64], n_int: usize) -> (bool, Vec<usize>) {
    let mut ok = true;
    let mut changed = Vec::new();
    for i in 0..n_int {
        let (a, b) = (xa[i], xb[i]);
        if !tol::is_integral(a) || !tol::is_integral(b) {
            ok = false;
        }
        if (a - b).abs() > tol::INT {
            ok = false;
            changed.push(i);
        }
    }
    (ok, changed)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, c| a.max(c.abs()))
}

/// Walks the frontier of the engine's relaxation from west to east, calling
/// `visit` on every edge. `target` (the eastern endpoint, if known) ends the
/// walk as soon as it is reached.
pub fn walk_front(
    eng: &mut LpEngine,
    target: Option<ObjPoint>,
    mut visit: impl FnMut(&FrontPiece) -> WalkControl,
) -> Result<FrontWalk, LpError> {
    let mut y = eng.solve_lex(1)?;
    let mut x = eng.x();
    let start = FrontWalk {
        start: y,
        start_x: x.clone(),
        complete: false,
    };
    let c2 = eng.c2().to_vec();
    let htol = tol::DUAL * (1.0 + max_abs(&c2)) * 10.0;
    let cap = (eng.m() + eng.n() + eng.m()) * 10 + 10;
    let mut alpha = 0.0_f64;
    let mut stalls = 0usize;
    let mut eps_scale = 1.0;
    for _ in 0..cap {
        if let Some(t) = target {
            if y.approx_eq(&t) {
                return Ok(FrontWalk { complete: true, ..start });
            }
        }
        let (d1, d2, dir) = eng.pricing();
        let mut next = f64::INFINITY;
        for j in 0..dir.len() {
            let s = dir[j];
            if s == 0.0 {
                continue;
            }
            let (g, h) = (s * d1[j], s * d2[j]);
            if h < -htol {
                next = next.min(g.max(0.0) / -h);
            }
        }
        if !next.is_finite() || next > 1e15 {
            return Ok(FrontWalk { complete: true, ..start });
        }
        let stalled = next <= alpha * (1.0 + 1e-12) + 1e-15 && stalls > 0;
        let a_new = if stalled {
            // The exact step made no progress: fall back to re-solving
            // slightly beyond the breakpoint, never beyond the chord to the
            // eastern endpoint.
            let chord = match target {
                Some(t) if !tol::obj_eq(t.f1, y.f1) => {
                    let slope = (t.f2 - y.f2) / (t.f1 - y.f1);
                    if slope < 0.0 {
                        -1.0 / slope
                    } else {
                        f64::INFINITY
                    }
                }
                _ => f64::INFINITY,
            };
            let eps = (1e-7 * (1.0 + alpha) * eps_scale).min((chord - alpha).max(1e-12));
            eps_scale *= 4.0;
            let a = alpha + eps;
            let w = eng.weighted(1.0 / (1.0 + a), a / (1.0 + a));
            eng.solve_cost(&w)?;
            a
        } else {
            next.max(alpha)
        };
        let guard = eng.weighted(1.0 / (1.0 + a_new), a_new / (1.0 + a_new));
        eng.solve_on_face(&c2, &guard)?;
        let y_new = eng.image();
        let x_new = eng.x();
        alpha = a_new;
        if y_new.approx_eq(&y) || y_new.f2 >= y.f2 {
            stalls += 1;
            if stalls > 60 {
                return Err(LpError::NumericalFailure);
            }
            continue;
        }
        stalls = 0;
        eps_scale = 1.0;
        let (integral, changed) = integer_parts_match(&x, &x_new, eng.n_int());
        let piece = FrontPiece {
            a: y,
            b: y_new,
            xa: core::mem::take(&mut x),
            xb: x_new.clone(),
            integral,
            changed,
        };
        y = y_new;
        x = x_new;
        if visit(&piece) == WalkControl::Stop {
            return Ok(FrontWalk { complete: false, ..start });
        }
    }
    Err(LpError::NumericalFailure)
}

/// Builds the full frontier curve of the engine's relaxation.
pub fn curve_from_engine(eng: &mut LpEngine) -> Result<DualBoundCurve, LpError> {
    let mut points: Vec<ObjPoint> = Vec::new();
    let mut pre: Vec<Vec<f64>> = Vec::new();
    let mut seg_int: Vec<bool> = Vec::new();
    let mut changes: Vec<usize> = Vec::new();
    let walk = walk_front(eng, None, |p| {
        if points.is_empty() {
            points.push(p.a);
            pre.push(p.xa.clone());
        }
        let k = points.len();
        // merge with the previous segment when collinear
        if k >= 2 {
            let (u, v) = (points[k - 2], points[k - 1]);
            let cross = (v.f1 - u.f1) * (p.b.f2 - u.f2) - (v.f2 - u.f2) * (p.b.f1 - u.f1);
            let scale = (v.f1 - u.f1).abs().max((v.f2 - u.f2).abs()) * (p.b.f1 - u.f1).abs().max((p.b.f2 - u.f2).abs());
            if cross.abs() <= 1e-9 * (1.0 + scale) {
                points[k - 1] = p.b;
                pre[k - 1] = p.xb.clone();
                let last = seg_int.len() - 1;
                seg_int[last] = seg_int[last] && p.integral;
                changes.extend_from_slice(&p.changed);
                return WalkControl::Continue;
            }
        }
        points.push(p.b);
        pre.push(p.xb.clone());
        seg_int.push(p.integral);
        changes.extend_from_slice(&p.changed);
        WalkControl::Continue
    })?;
    if points.is_empty() {
        points.push(walk.start);
        pre.push(walk.start_x);
    }
    changes.sort_unstable();
    changes.dedup();
    Ok(DualBoundCurve {
        points,
        preimages: pre,
        seg_int,
        int_changes: changes,
    })
}

/// Frontier of the LP relaxation with the given bounds and extra rows.
pub fn parametric_front(
    inst: &Instance,
    lower: &[f64],
    upper: &[f64],
    extra_rows: &[Row],
) -> Result<DualBoundCurve, LpError> {
    let mut eng = LpEngine::new(inst, lower, upper, extra_rows);
    curve_from_engine(&mut eng)
}

/// Outcome of the integer-feasibility walk.
#[derive(Debug, Clone, Default)]
pub struct Fr0Outcome {
    pub fathom: bool,
    /// Certified integer-feasible edges found before stopping.
    pub segments: Vec<FrontElement>,
    /// One preimage per distinct integer assignment along those edges.
    /// Their images are exact only up to the integrality tolerance, so
    /// callers should re-derive the frontier from the rounded assignment.
    pub preimages: Vec<Vec<f64>>,
    /// Integer variables changing value along visited edges.
    pub changed: Vec<usize>,
}

/// Walks the frontier until an edge cannot be certified integer-feasible.
pub fn fr0_walk(eng: &mut LpEngine, y1: &ObjPoint, y2: &ObjPoint) -> Result<Fr0Outcome, LpError> {
    let mut out = Fr0Outcome::default();
    if y1.approx_eq(y2) {
        out.fathom = true;
        return Ok(out);
    }
    let n_int = eng.n_int();
    let walk = walk_front(eng, Some(*y2), |p| {
        out.changed.extend_from_slice(&p.changed);
        if p.integral {
            out.segments.push(FrontElement::from_endpoints(p.a, p.b));
            let same = |x: &Vec<f64>| x.iter().zip(&p.xa).take(n_int).all(|(a, b)| (a - b).abs() <= tol::INT);
            if !out.preimages.iter().any(same) {
                out.preimages.push(p.xa.clone());
            }
            WalkControl::Continue
        } else {
            WalkControl::Stop
        }
    })?;
    out.fathom = walk.complete;
    out.changed.sort_unstable();
    out.changed.dedup();
    Ok(out)
}

/// True iff every edge of the relaxation's frontier is integer-feasible.
/// `y1`, `y2` are the frontier's endpoint images.
pub fn fr0_check(
    inst: &Instance,
    lower: &[f64],
    upper: &[f64],
    y1: &ObjPoint,
    y2: &ObjPoint,
) -> Result<bool, LpError> {
    let mut eng = LpEngine::new(inst, lower, upper, &[]);
    Ok(fr0_walk(&mut eng, y1, y2)?.fathom)
}

/// Walks the frontier until an edge is found that `store` does not dominate.
pub fn fr3_walk(eng: &mut LpEngine, y1: &ObjPoint, y2: &ObjPoint, store: &ParetoStore) -> Result<bool, LpError> {
    if y1.approx_eq(y2) {
        return Ok(store.dominates_point(y1));
    }
    if store.is_empty() {
        return Ok(false);
    }
    let walk = walk_front(eng, Some(*y2), |p| {
        if store.is_dominated(&FrontElement::from_endpoints(p.a, p.b)) {
            WalkControl::Continue
        } else {
            WalkControl::Stop
        }
    })?;
    Ok(walk.complete)
}

/// True iff the relaxation's frontier lies in the store's dominated region.
pub fn fr3_check(
    inst: &Instance,
    lower: &[f64],
    upper: &[f64],
    y1: &ObjPoint,
    y2: &ObjPoint,
    store: &ParetoStore,
) -> Result<bool, LpError> {
    let mut eng = LpEngine::new(inst, lower, upper, &[]);
    fr3_walk(&mut eng, y1, y2, store)
}
