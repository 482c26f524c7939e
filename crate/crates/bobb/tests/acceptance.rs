//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! 1. Oracle equivalence on 200 toys.
//! 2. Every dominance rule disabled, and every rule alone, on the same toys.
//! 3. Presolve and probing toggles on the same toys.
//! 4. Parametric frontiers against a 1000-weight sweep on 200 random BOLPs.
//! 5. Gap arithmetic examples and monotone hypervolume checkpoints.
//! 6. Preprocessing step constants traced on scripted oracles.
//! 7. Completion and dominance share on 60-variable, 60-row instances.
//! 8. Byte-identical outputs across repeated runs.
//!
//! The oracle for fronts enumerates every integer assignment and builds each
//! slice frontier from dense vertex enumeration, without the simplex code.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use bobb::clock::StdClock;
use bobb::events::GapSelection;
use bobb::instances::{packing60, toy, ToyShape};
use bobb::io::{write_front, write_instance};
use bobb::run::{solve, StatsReport};
use bobb_core::bb::{bb_solve, BbConfig, NoObserver, PresolveFlags, RuleSet, SolveStatus};
use bobb_core::geometry::{hausdorff_gap, hypervolume_gap, nd_filter, FrontElement, ObjPoint, OsRect};
use bobb_core::lp::parametric_front;
use bobb_core::model::Instance;
use bobb_core::preprocess::{preprocess_eps, preprocess_ws, rho_auto, PreprocessMethod, ScalarOracle, ScalarSolve, TraceEvent};
use common::*;

/// Breakpoints of two fronts agree to this relative tolerance.
const BREAKPOINT_TOL: f64 = 1e-6;
/// Random points classified against both fronts' dominated regions.
const SAMPLES: usize = 10_000;
const TOYS: u64 = 200;
const BOLPS: u64 = 200;
const SWEEP: usize = 1000;
/// Checkpoint hypervolume may rise by the objective tolerance, in percent.
const HV_NOISE: f64 = 100.0 * 1e-6;
const PACKING_SEEDS: [u64; 3] = [1, 2, 3];
const PACKING_TIME: f64 = 600.0;
const DOMINANCE_SHARE: f64 = 0.9;

type Outcome = Result<String, String>;

fn toy_suite() -> Vec<Instance> {
    (0..TOYS).map(|s| toy(s, ToyShape::default())).collect()
}

fn oracle(inst: &Instance) -> Vec<FrontElement> {
    nd_filter(brute_force_slices(inst)).into_elements()
}

fn compare(inst: &Instance, want: &[FrontElement], cfg: &BbConfig, case: u64) -> Result<(), String> {
    let out = bb_solve(inst, cfg).map_err(|e| e.to_string())?;
    let got = out.store.elements();
    fronts_match(got, want, BREAKPOINT_TOL)?;
    let bad = sample_mismatches(got, want, SAMPLES, &mut rng(1_000_000 + case));
    if bad > 0 {
        return Err(format!("{bad} of {SAMPLES} samples misclassified"));
    }
    Ok(())
}

/// Runs every configuration on every toy against the oracle fronts.
fn suite_matches(toys: &[Instance], fronts: &[Vec<FrontElement>], cfgs: &[(String, BbConfig)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, cfg) in cfgs {
        for (case, (inst, want)) in toys.iter().zip(fronts).enumerate() {
            if let Err(e) = compare(inst, want, cfg, case as u64) {
                failures.push(format!("[{name}] toy {case}: {e}"));
            }
        }
    }
    let runs = cfgs.len() * toys.len();
    if failures.is_empty() {
        Ok(format!("{runs} solves oracle-identical"))
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        Err(format!("{} of {runs} solves differ; first: {}", failures.len(), shown.join("; ")))
    }
}

fn criterion_1(toys: &[Instance], fronts: &[Vec<FrontElement>]) -> Outcome {
    let t = Instant::now();
    let r = suite_matches(toys, fronts, &[("default".into(), BbConfig::default())])?;
    let secs = t.elapsed().as_secs_f64();
    if secs > 300.0 {
        return Err(format!("{r}, but took {secs:.1} s (over 5 min)"));
    }
    Ok(format!("{r} in {secs:.1} s"))
}

fn criterion_2(toys: &[Instance], fronts: &[Vec<FrontElement>]) -> Outcome {
    let mut cfgs = Vec::new();
    for rule in RuleSet::TOGGLEABLE {
        cfgs.push((format!("without {}", rule.name()), BbConfig { rules: RuleSet::without(rule), ..BbConfig::default() }));
        cfgs.push((format!("only {}", rule.name()), BbConfig { rules: RuleSet::only(rule), ..BbConfig::default() }));
    }
    suite_matches(toys, fronts, &cfgs)
}

fn criterion_3(toys: &[Instance], fronts: &[Vec<FrontElement>]) -> Outcome {
    let base = PresolveFlags::default();
    let variants = [
        ("no duality fixing", PresolveFlags { duality: false, ..base }),
        ("singleton fixing", PresolveFlags { singleton: true, ..base }),
        ("dominating-column cuts", PresolveFlags { dominating_cuts: true, ..base }),
        ("root probing", PresolveFlags { root_probing: true, ..base }),
        ("no branch probing", PresolveFlags { branch_probing: false, ..base }),
    ];
    let cfgs: Vec<_> = variants
        .iter()
        .map(|(name, p)| (name.to_string(), BbConfig { presolve: *p, ..BbConfig::default() }))
        .collect();
    suite_matches(toys, fronts, &cfgs)
}

fn criterion_4() -> Outcome {
    let mut r = rng(4_004);
    let mut breakpoints = 0;
    for case in 0..BOLPS {
        let inst = random_bolp(&mut r, 8, 6);
        let free: Vec<usize> = (0..inst.n()).collect();
        let images: Vec<ObjPoint> = vertices(&inst.rows, &inst.lower, &inst.upper, &free, &inst.lower)
            .iter()
            .map(|x| inst.objectives(x))
            .collect();
        let sweep = weighted_sweep_front(&images, SWEEP);
        let curve = parametric_front(&inst, &inst.lower, &inst.upper, &[]).map_err(|e| format!("BOLP {case}: {e}"))?;
        chains_match(&curve.points, &sweep, BREAKPOINT_TOL).map_err(|e| format!("BOLP {case}: {e}"))?;
        breakpoints += sweep.len();
    }
    Ok(format!("{BOLPS} BOLPs, {breakpoints} breakpoints matched"))
}

fn criterion_5() -> Outcome {
    let p = |a: f64, b: f64| FrontElement::Point(ObjPoint::new(a, b));
    let db = nd_filter([p(0.0, 0.0)]);
    let store = nd_filter([p(1.0, 1.0)]);
    let square = OsRect {
        f1_lo: 0.0,
        f1_hi: 2.0,
        f2_lo: 0.0,
        f2_hi: 2.0,
    };
    let hv = hypervolume_gap(&db, &store, &square).map_err(|e| e.to_string())?;
    if hv != 75.0 {
        return Err(format!("square toy: HV = {hv}, expected 75"));
    }
    let (g, _) = hausdorff_gap(&db, &store, &ObjPoint::new(0.0, 10.0), &ObjPoint::new(10.0, 0.0))
        .map_err(|e| e.to_string())?;
    if g != 2f64.sqrt() {
        return Err(format!("quadrant toy: G = {g}, expected sqrt 2"));
    }

    let shape = ToyShape {
        max_int: 8,
        max_dom: 4,
        max_cont: 4,
        max_rows: 10,
    };
    let mut cfg = BbConfig {
        gap_checkpoints: true,
        checkpoint_every: 1,
        ..BbConfig::default()
    };
    cfg.preprocess.method = PreprocessMethod::None;
    let (mut checked, mut worst) = (0, 0.0_f64);
    for seed in 50_000.. {
        if checked == 20 {
            break;
        }
        if seed > 52_000 {
            return Err(format!("only {checked} instances with four or more checkpoints"));
        }
        let inst = toy(seed, shape);
        let Ok(out) = bb_solve(&inst, &cfg) else { continue };
        let cps = &out.stats.checkpoints;
        if cps.len() < 4 {
            continue;
        }
        checked += 1;
        for w in cps.windows(2) {
            worst = worst.max(w[1].gap.hv - w[0].gap.hv);
            if w[1].gap.hv > w[0].gap.hv + HV_NOISE {
                return Err(format!("seed {seed}: HV rose from {} to {}", w[0].gap.hv, w[1].gap.hv));
            }
        }
        if out.status != SolveStatus::Complete || cps.last().map(|c| c.gap.hv) != Some(0.0) {
            return Err(format!("seed {seed}: search did not close the gap"));
        }
    }
    Ok(format!("HV = 75, G = sqrt 2; 20 runs monotone (largest rise {worst:.1e})"))
}

/// Scripted scalar oracle over a fixed image list; solutions are encoded as
/// `x = [f1, f2]`.
struct Script {
    images: Vec<ObjPoint>,
    cuts: usize,
}

impl Script {
    fn new(pts: &[(f64, f64)]) -> Self {
        Self {
            images: pts.iter().map(|&(a, b)| ObjPoint::new(a, b)).collect(),
            cuts: 0,
        }
    }

    fn best(&self, w: (f64, f64), keep: impl Fn(&ObjPoint) -> bool) -> ScalarSolve {
        let best = self
            .images
            .iter()
            .filter(|y| keep(y))
            .map(|y| (w.0 * y.f1 + w.1 * y.f2, *y))
            .fold(None, |b: Option<(f64, ObjPoint)>, c| match b {
                Some(b) if b.0 <= c.0 => Some(b),
                _ => Some(c),
            });
        match best {
            Some((v, y)) => ScalarSolve {
                image: Some(y),
                bound: v,
                pool: vec![vec![y.f1, y.f2]],
            },
            None => ScalarSolve {
                image: None,
                bound: f64::INFINITY,
                pool: vec![],
            },
        }
    }
}

impl ScalarOracle for Script {
    fn weighted(&mut self, w: (f64, f64)) -> ScalarSolve {
        self.best(w, |_| true)
    }
    fn eps_constrained(&mut self, k: u8, eps: f64) -> ScalarSolve {
        if k == 1 {
            self.best((0.0, 1.0), |y| y.f1 <= eps)
        } else {
            self.best((1.0, 0.0), |y| y.f2 <= eps)
        }
    }
    fn add_level_cut(&mut self, _: (f64, f64), _: f64) {
        self.cuts += 1;
    }
    fn slice(&mut self, x: &[f64]) -> Vec<FrontElement> {
        vec![FrontElement::Point(ObjPoint::new(x[0], x[1]))]
    }
}

fn criterion_6() -> Outcome {
    let (y1, y2) = (ObjPoint::new(0.0, 120.0), ObjPoint::new(120.0, 0.0));
    let pts = [(0.0, 120.0), (30.0, 30.0), (120.0, 0.0), (31.5, 29.0)];
    for rho in 1..=5u32 {
        let (_, trace) = preprocess_eps(&mut Script::new(&pts), &y1, &y2, rho, 10_000);
        // 90 from the weighted image (30, 30) to either endpoint, over 60
        if trace.get(1) != Some(&TraceEvent::EpsInit { h: [1.5, 1.5], eps: [31.5, 31.5] }) {
            return Err(format!("rho {rho}: initial step {:?}", trace.get(1)));
        }
        let steps: Vec<(f64, bool, f64)> = trace
            .iter()
            .filter_map(|e| match e {
                TraceEvent::EpsStep { k: 1, eps, new, h } => Some((*eps, *new, *h)),
                _ => None,
            })
            .collect();
        let shrink = 1.5 / (1.0 + rho as f64);
        if steps.first().map(|s| (s.1, s.2)) != Some((true, shrink)) {
            return Err(format!("rho {rho}: first step {:?}, expected h = {shrink}", steps.first()));
        }
        let grow = shrink * (5.0 - rho as f64).max(1.0);
        if steps.get(1).map(|s| (s.1, s.2)) != Some((false, grow)) {
            return Err(format!("rho {rho}: stale step {:?}, expected h = {grow}", steps.get(1)));
        }
    }

    let mut s = Script::new(&[(0.0, 10.0), (10.0, 0.0)]);
    let (_, trace) = preprocess_ws(&mut s, &ObjPoint::new(0.0, 10.0), &ObjPoint::new(10.0, 0.0), 1, 100);
    let rounds: Vec<(Vec<f64>, usize, usize, u32)> = trace
        .iter()
        .filter_map(|e| match e {
            TraceEvent::WsRound { weights, sigma, tau, t } => Some((weights.clone(), *sigma, *tau, *t)),
            _ => None,
        })
        .collect();
    let weights: Vec<&Vec<f64>> = rounds.iter().map(|r| &r.0).collect();
    if weights.len() < 3 || weights[0] != &vec![0.5] || weights[1] != &vec![0.25, 0.75] {
        return Err(format!("weights not bisected: {weights:?}"));
    }
    // sigma = 2, tau = 1: 1 >= 2/5 succeeds; sigma = 4, tau = 0 fails
    let sts: Vec<(usize, usize, u32)> = rounds.iter().map(|r| (r.1, r.2, r.3)).collect();
    if sts != vec![(1, 1, 0), (2, 1, 0), (4, 0, 1), (8, 0, 2)] {
        return Err(format!("weighted-sum rounds (sigma, tau, t) = {sts:?}"));
    }
    let autos: Vec<u32> = [60usize, 160, 280, 400, 1000]
        .iter()
        .map(|&n| rho_auto(&Instance::new("r", 0, n, vec![1.0; n], vec![1.0; n], vec![], vec![0.0; n], vec![1.0; n]).unwrap()))
        .collect();
    if autos != vec![2, 2, 4, 5, 5] {
        return Err(format!("automatic rho {autos:?}"));
    }
    Ok("step 1/60 of span, h/(1+rho), max(5-rho,1)h, sigma/5 threshold, bisection and automatic rho traced".into())
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    for seed in PACKING_SEEDS {
        let inst = packing60(seed);
        let t = Instant::now();
        let cfg = BbConfig {
            time_limit: PACKING_TIME,
            ..BbConfig::default()
        };
        let out = solve(&inst, &cfg, 1, StdClock::start(), &mut NoObserver, &mut |_| {}).map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        let share = out.stats.dominance_share();
        let s = &out.stats;
        let line = format!(
            "seed {seed}: {:.1} s, {} nodes, {} elements, fathomed {} by dominance / {} by infeasibility (share {:.3})",
            secs,
            s.nodes,
            out.store.elements().len(),
            s.fathomed_dominance,
            s.fathomed_infeasible,
            share
        );
        if out.status != SolveStatus::Complete || secs > PACKING_TIME {
            return Err(format!("{line}: not complete within {PACKING_TIME} s"));
        }
        if share < DOMINANCE_SHARE {
            return Err(format!("{line}: share below {DOMINANCE_SHARE}"));
        }
        lines.push(line);
    }
    Ok(lines.join("; "))
}

fn outputs(inst: &Instance, cfg: &BbConfig, workers: usize) -> Result<(String, String), String> {
    let out = solve(inst, cfg, workers, StdClock::start(), &mut NoObserver, &mut |_| {}).map_err(|e| e.to_string())?;
    Ok((write_front(out.store.elements()), StatsReport::new(inst, &out, 7, GapSelection::Both).to_json()))
}

fn criterion_8() -> Outcome {
    let cfg = BbConfig {
        split_gaps: true,
        theta: 0.05,
        gap_checkpoints: true,
        ..BbConfig::default()
    };
    for seed in 0..20 {
        let inst = toy(seed, ToyShape::default());
        let a = outputs(&inst, &cfg, 1)?;
        if outputs(&inst, &cfg, 1)? != a || outputs(&inst, &cfg, 4)? != a {
            return Err(format!("toy {seed}: outputs differ between runs"));
        }
    }

    // the binary, end to end
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let path = dir.path().join("toy.txt");
    std::fs::write(&path, write_instance(&toy(11, ToyShape::default()))).map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for run in 0..2 {
        let front = dir.path().join(format!("front{run}.txt"));
        let stats = dir.path().join(format!("stats{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_bobb"))
            .arg("solve")
            .arg(&path)
            .args(["--seed", "5", "--gap", "both", "--out-front"])
            .arg(&front)
            .arg("--out-stats")
            .arg(&stats)
            .stderr(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if status.code() != Some(0) {
            return Err(format!("solve exited with {status}"));
        }
        files.push((std::fs::read(&front).map_err(|e| e.to_string())?, std::fs::read(&stats).map_err(|e| e.to_string())?));
    }
    if files[0] != files[1] {
        return Err("command-line runs wrote different files".into());
    }
    Ok("20 toys x 3 runs (1 and 4 workers) and two command-line runs byte-identical".into())
}

fn main() -> ExitCode {
    let toys = toy_suite();
    let fronts: Vec<Vec<FrontElement>> = toys.iter().map(oracle).collect();
    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("oracle equivalence", &|| criterion_1(&toys, &fronts)),
        ("fathoming-rule soundness", &|| criterion_2(&toys, &fronts)),
        ("presolve preservation", &|| criterion_3(&toys, &fronts)),
        ("parametric frontier", &criterion_4),
        ("gap arithmetic", &criterion_5),
        ("preprocessing constants", &criterion_6),
        ("60x60 completion and dominance share", &criterion_7),
        ("determinism", &criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = run();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1} s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1} s] {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
