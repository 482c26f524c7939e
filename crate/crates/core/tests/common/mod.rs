//! Independent reference machinery for integration tests: random instance
//! generation, vertex enumeration of small polytopes, exact biobjective LP
//! frontiers from vertex images, lattice enumeration, and region comparison
//! of fronts by breakpoints and by sampling.
//!
//! Nothing here calls the simplex engine; polytope vertices come from dense
//! linear solves over every choice of active constraints.

#![allow(dead_code)]

use bobb_core::geometry::{FrontElement, ObjPoint};
use bobb_core::model::{Instance, Row};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for [`random_instance`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_int: usize,
    pub max_dom: usize,
    pub max_cont: usize,
    pub max_rows: usize,
}

pub const TOY: Shape = Shape {
    max_int: 6,
    max_dom: 4,
    max_cont: 4,
    max_rows: 8,
};

/// A random feasible bounded BOMILP. A random lattice point with random
/// continuous part satisfies every row by construction. Objectives are
/// drawn to conflict more often than not.
pub fn random_instance(rng: &mut TestRng, shape: Shape) -> Instance {
    let n_int = rng.gen_range(1..=shape.max_int);
    let n_cont = rng.gen_range(0..=shape.max_cont);
    let n = n_int + n_cont;
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut x0 = vec![0.0; n];
    for j in 0..n {
        if j < n_int {
            let lo = rng.gen_range(-1..=1) as f64;
            let dom = rng.gen_range(2..=shape.max_dom) as f64;
            lower[j] = lo;
            upper[j] = lo + dom - 1.0;
            x0[j] = lo + rng.gen_range(0..dom as i64) as f64;
        } else {
            upper[j] = rng.gen_range(1..=4) as f64;
            x0[j] = rng.gen_range(0.0..upper[j]);
        }
    }
    let m = rng.gen_range(1..=shape.max_rows);
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut a = vec![0.0; n];
        for v in a.iter_mut() {
            if rng.gen_bool(0.6) {
                *v = rng.gen_range(-5..=5) as f64;
            }
        }
        let act: f64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
        let slack = rng.gen_range(0..=4) as f64 + rng.gen_range(0.0..1.0);
        rows.push(Row::from_dense(&a, act + slack));
    }
    let c1: Vec<f64> = (0..n).map(|_| rng.gen_range(-10..=10) as f64).collect();
    let conflict = rng.gen_bool(0.7);
    let c2: Vec<f64> = c1
        .iter()
        .map(|&c| {
            if conflict {
                -c + rng.gen_range(-3..=3) as f64
            } else {
                rng.gen_range(-10..=10) as f64
            }
        })
        .collect();
    Instance::new("random", n_int, n_cont, c1, c2, rows, lower, upper).expect("generated instance is valid")
}

/// A random bounded biobjective LP with `n` continuous variables.
pub fn random_bolp(rng: &mut TestRng, max_vars: usize, max_rows: usize) -> Instance {
    let n = rng.gen_range(2..=max_vars);
    let m = rng.gen_range(1..=max_rows);
    let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=5) as f64).collect();
    let x0: Vec<f64> = upper.iter().map(|&u| rng.gen_range(0.0..u)).collect();
    let mut rows = Vec::new();
    for _ in 0..m {
        let a: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.7) { rng.gen_range(-6.0..6.0) } else { 0.0 })
            .collect();
        let act: f64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
        rows.push(Row::from_dense(&a, act + rng.gen_range(0.0..3.0)));
    }
    let c1: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
    let c2: Vec<f64> = c1.iter().map(|&c| -c + rng.gen_range(-4.0..4.0)).collect();
    Instance::new("bolp", 0, n, c1, c2, rows, vec![0.0; n], upper).expect("generated instance is valid")
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All vertices of `{x : rows, lower <= x <= upper}` restricted to the
/// variables in `free` (the others are held at `fixed`). Each vertex is
/// obtained by choosing `k` rows active and putting all but `k` free
/// variables at a bound, then solving for the remaining `k`.
pub fn vertices(rows: &[Row], lower: &[f64], upper: &[f64], free: &[usize], fixed: &[f64]) -> Vec<Vec<f64>> {
    let n = free.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    let base: Vec<f64> = fixed.to_vec();
    let feasible = |x: &[f64]| -> bool {
        rows.iter()
            .all(|r| r.activity(x) <= r.rhs + 1e-9 * (1.0 + r.rhs.abs()))
            && free
                .iter()
                .all(|&j| x[j] >= lower[j] - 1e-9 && x[j] <= upper[j] + 1e-9)
    };
    if n == 0 {
        if feasible(&base) {
            out.push(base);
        }
        return out;
    }
    let m = rows.len();
    for k in 0..=m.min(n) {
        combinations(m, k, |act| {
            combinations(n, n - k, |at_bound| {
                let solved: Vec<usize> = (0..n).filter(|i| !at_bound.contains(i)).map(|i| free[i]).collect();
                for mask in 0..(1u32 << (n - k)) {
                    let mut x = base.clone();
                    for (b, &i) in at_bound.iter().enumerate() {
                        let j = free[i];
                        x[j] = if mask >> b & 1 == 1 { upper[j] } else { lower[j] };
                    }
                    if k > 0 {
                        let a = DMatrix::from_fn(k, k, |r, c| rows[act[r]].coef(solved[c]));
                        let rhs = DVector::from_fn(k, |r, _| {
                            let row = &rows[act[r]];
                            let rest: f64 = row
                                .coefs
                                .iter()
                                .filter(|(j, _)| !solved.contains(j))
                                .map(|&(j, v)| v * x[j])
                                .sum();
                            row.rhs - rest
                        });
                        let lu = a.lu();
                        if lu.determinant().abs() < 1e-10 {
                            continue;
                        }
                        let Some(sol) = lu.solve(&rhs) else { continue };
                        for (c, &j) in solved.iter().enumerate() {
                            x[j] = sol[c];
                        }
                    }
                    if feasible(&x) {
                        out.push(x);
                    }
                }
            });
        });
    }
    out
}

/// Exact nondominated frontier of the convex hull of `pts`: the lower-left
/// hull chain from the lexicographic minimizer of `(f1, f2)` to that of
/// `(f2, f1)`, collinear points removed.
pub fn lower_left_hull(pts: &[ObjPoint]) -> Vec<ObjPoint> {
    assert!(!pts.is_empty());
    let mut p: Vec<ObjPoint> = pts.to_vec();
    let by_f1 = |a: &ObjPoint, b: &ObjPoint| a.f1.partial_cmp(&b.f1).unwrap().then(a.f2.partial_cmp(&b.f2).unwrap());
    p.sort_by(by_f1);
    // snap f1 values equal up to rounding so that ties break on f2
    for i in 1..p.len() {
        if (p[i].f1 - p[i - 1].f1).abs() <= 1e-12 * (1.0 + p[i].f1.abs()) {
            p[i].f1 = p[i - 1].f1;
        }
    }
    p.sort_by(by_f1);
    let mut hull: Vec<ObjPoint> = Vec::new();
    for q in p {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.f1 - a.f1) * (q.f2 - a.f2) - (b.f2 - a.f2) * (q.f1 - a.f1);
            let scale = (1.0 + a.f1.abs() + b.f1.abs() + q.f1.abs()) * (1.0 + a.f2.abs() + b.f2.abs() + q.f2.abs());
            if cross <= 1e-12 * scale {
                hull.pop();
            } else {
                break;
            }
        }
        if let Some(last) = hull.last() {
            if (last.f1 - q.f1).abs() <= 1e-12 * (1.0 + q.f1.abs()) {
                continue;
            }
        }
        hull.push(q);
    }
    // keep the strictly decreasing prefix
    let mut out = vec![hull[0]];
    for q in hull.into_iter().skip(1) {
        if q.f2 < out.last().unwrap().f2 - 1e-12 * (1.0 + q.f2.abs()) {
            out.push(q);
        } else {
            break;
        }
    }
    out
}

/// Nondominated frontier of a biobjective LP by weighted-sum sweep over the
/// images of all vertices: `sweep` uniform weights, then dichotomic
/// refinement between adjacent distinct minimizers so that vertices with a
/// narrow normal cone are not missed.
pub fn weighted_sweep_front(images: &[ObjPoint], sweep: usize) -> Vec<ObjPoint> {
    let argmin = |w1: f64, w2: f64| -> ObjPoint {
        let mut best = images[0];
        let mut bv = f64::INFINITY;
        for y in images {
            let v = w1 * y.f1 + w2 * y.f2;
            let better = v < bv - 1e-12 * (1.0 + v.abs())
                || (v <= bv + 1e-12 * (1.0 + v.abs()) && (y.f1 < best.f1 || (y.f1 == best.f1 && y.f2 < best.f2)) && w2 == 0.0)
                || (v <= bv + 1e-12 * (1.0 + v.abs()) && (y.f2 < best.f2 || (y.f2 == best.f2 && y.f1 < best.f1)) && w1 == 0.0);
            if better {
                bv = v;
                best = *y;
            }
        }
        best
    };
    // lexicographic ends
    let lex = |first: u8| -> ObjPoint {
        let key = |y: &ObjPoint| if first == 1 { (y.f1, y.f2) } else { (y.f2, y.f1) };
        let mut b = images[0];
        for y in images {
            let (a0, a1) = key(y);
            let (b0, b1) = key(&b);
            if a0 < b0 - 1e-12 * (1.0 + a0.abs()) || ((a0 - b0).abs() <= 1e-12 * (1.0 + a0.abs()) && a1 < b1) {
                b = *y;
            }
        }
        b
    };
    let mut found = vec![lex(1), lex(2)];
    for i in 1..sweep {
        let w = i as f64 / sweep as f64;
        found.push(argmin(w, 1.0 - w));
    }
    let mut chain = lower_left_hull(&found);
    // dichotomic refinement
    let mut i = 0;
    while i + 1 < chain.len() {
        let (a, b) = (chain[i], chain[i + 1]);
        let (w1, w2) = (a.f2 - b.f2, b.f1 - a.f1);
        let y = argmin(w1, w2);
        let va = w1 * a.f1 + w2 * a.f2;
        let vy = w1 * y.f1 + w2 * y.f2;
        if vy < va - 1e-9 * (1.0 + va.abs()) {
            chain.insert(i + 1, y);
        } else {
            i += 1;
        }
    }
    chain
}

/// Exact LP frontier of an instance's continuous relaxation with the given
/// bounds, from vertex enumeration.
pub fn lp_front_by_vertices(inst: &Instance, lower: &[f64], upper: &[f64]) -> Option<Vec<ObjPoint>> {
    let free: Vec<usize> = (0..inst.n()).collect();
    let vs = vertices(&inst.rows, lower, upper, &free, lower);
    if vs.is_empty() {
        return None;
    }
    let imgs: Vec<ObjPoint> = vs.iter().map(|x| inst.objectives(x)).collect();
    Some(lower_left_hull(&imgs))
}

/// Visits every integer assignment within the bounds.
pub fn for_each_lattice(inst: &Instance, mut f: impl FnMut(&[f64])) {
    let k = inst.n_int;
    let mut x: Vec<f64> = inst.lower[..k].to_vec();
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            if x[i] < inst.upper[i] {
                x[i] += 1.0;
                break;
            }
            x[i] = inst.lower[i];
            i += 1;
        }
    }
}

/// Vertices of the slice at integer assignment `xi`.
pub fn slice_vertices(inst: &Instance, xi: &[f64]) -> Vec<Vec<f64>> {
    let mut fixed = inst.lower.clone();
    fixed[..inst.n_int].copy_from_slice(xi);
    let free: Vec<usize> = (inst.n_int..inst.n()).collect();
    vertices(&inst.rows, &inst.lower, &inst.upper, &free, &fixed)
}

/// Minimum of `cost·x` over the integer-feasible points, by lattice
/// enumeration and vertex enumeration of each slice.
pub fn milp_brute_force(inst: &Instance, cost: &[f64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for_each_lattice(inst, |xi| {
        for v in slice_vertices(inst, xi) {
            let val: f64 = cost.iter().zip(&v).map(|(c, x)| c * x).sum();
            if best.is_none_or(|b| val < b) {
                best = Some(val);
            }
        }
    });
    best
}

/// Every slice frontier (as elements), from vertex enumeration.
pub fn brute_force_slices(inst: &Instance) -> Vec<FrontElement> {
    let mut out = Vec::new();
    for_each_lattice(inst, |xi| {
        let vs = slice_vertices(inst, xi);
        if vs.is_empty() {
            return;
        }
        let imgs: Vec<ObjPoint> = vs.iter().map(|x| inst.objectives(x)).collect();
        out.extend(chain_elements(&lower_left_hull(&imgs)));
    });
    out
}

pub fn chain_elements(chain: &[ObjPoint]) -> Vec<FrontElement> {
    if chain.len() == 1 {
        return vec![FrontElement::Point(chain[0])];
    }
    chain.windows(2).map(|w| FrontElement::from_endpoints(w[0], w[1])).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs() + b.abs())
}

pub fn pt_close(a: &ObjPoint, b: &ObjPoint, tol: f64) -> bool {
    close(a.f1, b.f1, tol) && close(a.f2, b.f2, tol)
}

/// Point chains must agree breakpoint by breakpoint.
pub fn chains_match(a: &[ObjPoint], b: &[ObjPoint], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("breakpoint count {} vs {}: {:?} vs {:?}", a.len(), b.len(), a, b));
    }
    for (p, q) in a.iter().zip(b) {
        if !pt_close(p, q, tol) {
            return Err(format!("breakpoint {:?} vs {:?}", p, q));
        }
    }
    Ok(())
}

/// Canonical description of a sorted nondominated front: consecutive
/// segments that share an endpoint and are collinear are merged; the result
/// is a list of maximal polylines (each a point chain).
pub fn canonical(front: &[FrontElement]) -> Vec<Vec<ObjPoint>> {
    let mut els: Vec<FrontElement> = front.to_vec();
    els.sort_by(|a, b| a.left().f1.partial_cmp(&b.left().f1).unwrap());
    let mut out: Vec<Vec<ObjPoint>> = Vec::new();
    for e in els {
        let (l, r) = (e.left(), e.right());
        if let Some(last) = out.last_mut() {
            let tail = *last.last().unwrap();
            // pieces that touch within tolerance belong to one polyline
            if pt_close(&tail, &l, 1e-6) && (e.is_point() || pt_close(&tail, &r, 1e-6)) {
                continue;
            }
            if !e.is_point() && pt_close(&tail, &l, 1e-6) {
                if last.len() == 1 {
                    last.push(r);
                    continue;
                }
                let prev = last[last.len() - 2];
                let cross = (tail.f1 - prev.f1) * (r.f2 - prev.f2) - (tail.f2 - prev.f2) * (r.f1 - prev.f1);
                let scale = ((tail.f1 - prev.f1).abs() + (tail.f2 - prev.f2).abs())
                    * ((r.f1 - prev.f1).abs() + (r.f2 - prev.f2).abs());
                if cross.abs() <= 1e-7 * scale {
                    *last.last_mut().unwrap() = r;
                } else {
                    last.push(r);
                }
                continue;
            }
        }
        if e.is_point() {
            out.push(vec![l]);
        } else {
            out.push(vec![l, r]);
        }
    }
    out
}

/// Breakpoint comparison of two fronts after canonicalization.
pub fn fronts_match(a: &[FrontElement], b: &[FrontElement], tol: f64) -> Result<(), String> {
    let ca = canonical(a);
    let cb = canonical(b);
    if ca.len() != cb.len() {
        return Err(format!("component count {} vs {}\n  {:?}\n  {:?}", ca.len(), cb.len(), ca, cb));
    }
    for (x, y) in ca.iter().zip(&cb) {
        chains_match(x, y, tol).map_err(|e| format!("{e}\n  {:?}\n  {:?}", ca, cb))?;
    }
    Ok(())
}

/// Margin-aware membership in the dominated region of a set of elements,
/// computed directly from the element geometry.
fn dominated_by(elems: &[FrontElement], p: &ObjPoint, margin: f64) -> bool {
    elems.iter().any(|e| match e {
        FrontElement::Point(q) => q.f1 <= p.f1 + margin && q.f2 <= p.f2 + margin,
        FrontElement::Segment(s) => {
            let x = p.f1 + margin;
            if x < s.left.f1 {
                return false;
            }
            let f = x.min(s.right.f1);
            let t = (f - s.left.f1) / (s.right.f1 - s.left.f1);
            let y = s.left.f2 + t * (s.right.f2 - s.left.f2);
            y <= p.f2 + margin
        }
    })
}

/// Classifies `samples` random points in the joint bounding box; a point is
/// misclassified when it is dominated by one front with margin to spare and
/// not dominated by the other even with slack.
pub fn sample_mismatches(a: &[FrontElement], b: &[FrontElement], samples: usize, rng: &mut TestRng) -> usize {
    let all: Vec<&FrontElement> = a.iter().chain(b).collect();
    if all.is_empty() {
        return 0;
    }
    let (mut lo1, mut hi1, mut lo2, mut hi2) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for e in &all {
        for p in [e.left(), e.right()] {
            lo1 = lo1.min(p.f1);
            hi1 = hi1.max(p.f1);
            lo2 = lo2.min(p.f2);
            hi2 = hi2.max(p.f2);
        }
    }
    let pad = 0.05 * (1.0 + (hi1 - lo1).max(hi2 - lo2));
    let (lo1, hi1, lo2, hi2) = (lo1 - pad, hi1 + pad, lo2 - pad, hi2 + pad);
    let scale = 1.0 + lo1.abs().max(hi1.abs()).max(lo2.abs()).max(hi2.abs());
    let margin = 1e-6 * scale;
    let mut bad = 0;
    for _ in 0..samples {
        let p = ObjPoint::new(rng.gen_range(lo1..=hi1), rng.gen_range(lo2..=hi2));
        let in_a = dominated_by(a, &p, -margin);
        let in_b = dominated_by(b, &p, -margin);
        let near_a = dominated_by(a, &p, margin);
        let near_b = dominated_by(b, &p, margin);
        if (in_a && !near_b) || (in_b && !near_a) {
            bad += 1;
        }
    }
    bad
}
