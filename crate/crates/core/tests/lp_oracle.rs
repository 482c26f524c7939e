//! LP, parametric-frontier and MILP results checked against vertex and
//! lattice enumeration.

mod common;

use bobb_core::clock::{Deadline, NoClock};
use bobb_core::geometry::ObjPoint;
use bobb_core::lp::{lp_solve, parametric_front, sensitivity_interval, LpEngine, LpError};
use bobb_core::milp::{level_curve_cut, milp_solve, MilpOptions, MilpStatus};
use common::*;
use rand::Rng;

#[test]
fn parametric_front_equals_vertex_hull() {
    let mut r = rng(11);
    let mut rich = 0;
    for case in 0..200 {
        let inst = random_bolp(&mut r, 8, 6);
        let exact = lp_front_by_vertices(&inst, &inst.lower, &inst.upper).expect("feasible by construction");
        let curve = parametric_front(&inst, &inst.lower, &inst.upper, &[]).unwrap();
        chains_match(&curve.points, &exact, 1e-6).unwrap_or_else(|e| panic!("case {case}: {e}\n{inst:?}"));
        if curve.points.len() >= 3 {
            rich += 1;
        }
    }
    // the generator must produce fronts with several breakpoints
    assert!(rich >= 60, "only {rich} fronts with 3+ breakpoints");
}

#[test]
fn parametric_front_is_convex_and_monotone() {
    let mut r = rng(12);
    for _ in 0..100 {
        let inst = random_bolp(&mut r, 6, 6);
        let c = parametric_front(&inst, &inst.lower, &inst.upper, &[]).unwrap();
        for w in c.points.windows(2) {
            assert!(w[0].f1 < w[1].f1 && w[0].f2 > w[1].f2);
        }
        let s = c.slopes();
        for w in s.windows(2) {
            assert!(w[0] < w[1], "slopes not increasing: {s:?}");
        }
        assert_eq!(c.seg_int.len(), c.points.len() - 1);
    }
}

#[test]
fn weighted_optimum_matches_vertex_enumeration() {
    let mut r = rng(13);
    for _ in 0..200 {
        let inst = random_bolp(&mut r, 6, 6);
        let w = r.gen_range(0.0..1.0);
        let sol = lp_solve(&inst, (w, 1.0 - w), &inst.lower, &inst.upper, &[], None).unwrap();
        let cost = inst.weighted(w, 1.0 - w);
        let free: Vec<usize> = (0..inst.n()).collect();
        let best = vertices(&inst.rows, &inst.lower, &inst.upper, &free, &inst.lower)
            .iter()
            .map(|x| cost.iter().zip(x).map(|(c, v)| c * v).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!((sol.value - best).abs() <= 1e-7 * (1.0 + best.abs()), "{} vs {best}", sol.value);
        assert!(inst.is_feasible(&sol.x, 1e-6));
    }
}

#[test]
fn warm_start_is_neutral() {
    let mut r = rng(14);
    for _ in 0..100 {
        let inst = random_bolp(&mut r, 6, 6);
        let a = lp_solve(&inst, (1.0, 0.0), &inst.lower, &inst.upper, &[], None).unwrap();
        let (w1, w2) = (r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
        let cold = lp_solve(&inst, (w1, w2), &inst.lower, &inst.upper, &[], None).unwrap();
        let warm = lp_solve(&inst, (w1, w2), &inst.lower, &inst.upper, &[], Some(&a.basis)).unwrap();
        assert!((cold.value - warm.value).abs() <= 1e-9 * (1.0 + cold.value.abs()));
        // warm start across tightened bounds
        let mut up = inst.upper.clone();
        up[0] = (inst.lower[0] + inst.upper[0]) / 2.0;
        let cold = lp_solve(&inst, (w1, w2), &inst.lower, &up, &[], None);
        let warm = lp_solve(&inst, (w1, w2), &inst.lower, &up, &[], Some(&a.basis));
        match (cold, warm) {
            (Ok(c), Ok(w)) => assert!((c.value - w.value).abs() <= 1e-9 * (1.0 + c.value.abs())),
            (Err(LpError::Infeasible), Err(LpError::Infeasible)) => {}
            (c, w) => panic!("cold {c:?} vs warm {w:?}"),
        }
    }
}

#[test]
fn sensitivity_interval_endpoints_by_resolve() {
    let mut r = rng(15);
    let mut checked = 0;
    for _ in 0..200 {
        let inst = random_bolp(&mut r, 5, 4);
        let alpha = r.gen_range(0.1..3.0);
        let sol = lp_solve(&inst, (1.0, alpha), &inst.lower, &inst.upper, &[], None).unwrap();
        let iv = sensitivity_interval(&inst, &inst.lower, &inst.upper, &[], &sol.basis, alpha).unwrap();
        assert!(iv.alpha_lo <= alpha && alpha <= iv.alpha_hi);
        let eval = |a: f64| -> (f64, f64) {
            let c = inst.weighted(1.0, a);
            let basis_val: f64 = c.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
            let opt = lp_solve(&inst, (1.0, a), &inst.lower, &inst.upper, &[], None).unwrap().value;
            (basis_val, opt)
        };
        // inside the interval the basis solution stays optimal
        for a in [iv.alpha_lo.max(0.0), iv.alpha_hi.min(1e3), (iv.alpha_lo + alpha) / 2.0] {
            let (b, o) = eval(a);
            assert!(b <= o + 1e-7 * (1.0 + o.abs()), "a={a}: {b} vs {o}");
        }
        // just beyond a finite upper end it is not (unless the next basis ties)
        if iv.alpha_hi.is_finite() && iv.alpha_hi < 1e3 {
            let (b, o) = eval(iv.alpha_hi + 1e-4);
            assert!(b >= o - 1e-7 * (1.0 + o.abs()));
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn parametric_front_agrees_with_weighted_sweep() {
    let mut r = rng(16);
    for case in 0..50 {
        let inst = random_bolp(&mut r, 6, 5);
        let free: Vec<usize> = (0..inst.n()).collect();
        let imgs: Vec<ObjPoint> = vertices(&inst.rows, &inst.lower, &inst.upper, &free, &inst.lower)
            .iter()
            .map(|x| inst.objectives(x))
            .collect();
        let sweep = weighted_sweep_front(&imgs, 1000);
        let curve = parametric_front(&inst, &inst.lower, &inst.upper, &[]).unwrap();
        chains_match(&curve.points, &sweep, 1e-6).unwrap_or_else(|e| panic!("case {case}: {e}"));
    }
}

#[test]
fn engine_reuse_across_bounds() {
    let mut r = rng(17);
    for _ in 0..50 {
        let inst = random_bolp(&mut r, 6, 5);
        let mut eng = LpEngine::new(&inst, &inst.lower, &inst.upper, &[]);
        eng.solve(1.0, 1.0).unwrap();
        let mut up = inst.upper.clone();
        let j = r.gen_range(0..inst.n());
        up[j] = inst.lower[j] + 0.3 * (inst.upper[j] - inst.lower[j]);
        eng.set_bounds(&inst.lower, &up);
        let a = eng.solve(1.0, 1.0);
        let b = lp_solve(&inst, (1.0, 1.0), &inst.lower, &up, &[], None).map(|s| s.value);
        match (a, b) {
            (Ok(a), Ok(b)) => assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs())),
            (Err(LpError::Infeasible), Err(LpError::Infeasible)) => {}
            (a, b) => panic!("{a:?} vs {b:?}"),
        }
    }
}

fn milp_shape() -> Shape {
    Shape {
        max_int: 5,
        max_dom: 4,
        max_cont: 3,
        max_rows: 6,
    }
}

#[test]
fn milp_equals_lattice_enumeration() {
    let clock = NoClock;
    let d = Deadline::never(&clock);
    let mut r = rng(18);
    for case in 0..200 {
        let inst = random_instance(&mut r, milp_shape());
        let w = r.gen_range(0.0..1.0);
        let res = milp_solve(&inst, (w, 1.0 - w), &inst.lower, &inst.upper, &[], &MilpOptions::default(), &d);
        let brute = milp_brute_force(&inst, &inst.weighted(w, 1.0 - w));
        match brute {
            None => assert_eq!(res.status, MilpStatus::Infeasible, "case {case}"),
            Some(b) => {
                assert_eq!(res.status, MilpStatus::Optimal, "case {case}");
                assert!((res.value - b).abs() <= 1e-6 * (1.0 + b.abs()), "case {case}: {} vs {b}", res.value);
                for x in &res.pool {
                    assert!(inst.is_feasible(x, 1e-6) && inst.is_integral(x));
                }
                assert!(res.bound <= res.value + 1e-9);
            }
        }
    }
}

#[test]
fn level_curve_cut_keeps_optimum() {
    let clock = NoClock;
    let d = Deadline::never(&clock);
    let mut r = rng(19);
    for _ in 0..100 {
        let inst = random_instance(&mut r, milp_shape());
        let w = (r.gen_range(0.0..1.0), 0.0);
        let w = (w.0, 1.0 - w.0);
        let res = milp_solve(&inst, w, &inst.lower, &inst.upper, &[], &MilpOptions::default(), &d);
        if res.status != MilpStatus::Optimal {
            continue;
        }
        let cut = level_curve_cut(&inst, w, res.bound);
        for_each_lattice(&inst, |xi| {
            for v in slice_vertices(&inst, xi) {
                assert!(cut.activity(&v) <= cut.rhs + 1e-6 * (1.0 + cut.rhs.abs()));
            }
        });
        let again = milp_solve(&inst, w, &inst.lower, &inst.upper, &[cut], &MilpOptions::default(), &d);
        assert!((again.value - res.value).abs() <= 1e-6 * (1.0 + res.value.abs()));
        // a cut for another objective is valid too
        let res2 = milp_solve(&inst, (1.0, 0.0), &inst.lower, &inst.upper, &[], &MilpOptions::default(), &d);
        let cut2 = level_curve_cut(&inst, (1.0, 0.0), res2.bound);
        let again2 = milp_solve(&inst, w, &inst.lower, &inst.upper, &[cut2], &MilpOptions::default(), &d);
        assert!((again2.value - res.value).abs() <= 1e-6 * (1.0 + res.value.abs()));
    }
}
