//! Solve driver with an optional worker pool and the stats report.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use bobb_core::bb::{finish, prepare, solve_region, BbConfig, BbError, Observer, Rule, SolveOutcome, SolveStatus};
use bobb_core::clock::{Clock, Deadline};
use bobb_core::geometry::FrontElement;
use bobb_core::model::Instance;
use serde::Serialize;

use crate::clock::StdClock;
use crate::events::{GapFields, GapSelection, Recorder, Stamped};

/// Solves `inst` under `cfg`. Objective-space regions (with gap splitting)
/// are independent and shared among up to `workers` threads; events from
/// threads are buffered and handed to `obs` in region order, so the merged
/// result does not depend on the number of workers.
pub fn solve(
    inst: &Instance,
    cfg: &BbConfig,
    workers: usize,
    clock: StdClock,
    obs: &mut dyn Observer,
    replay: &mut dyn FnMut(&Stamped),
) -> Result<SolveOutcome, BbError> {
    let end = clock.now() + cfg.time_limit;
    let deadline_on = |c: &StdClock| -> f64 { end - c.now() };
    let deadline = make_deadline(&clock, cfg.time_limit.is_finite().then(|| deadline_on(&clock)));
    let prep = prepare(inst, cfg, &deadline)?;
    let n = prep.regions.len();
    let results = if workers <= 1 || n <= 1 {
        (0..n).map(|r| solve_region(&prep, r, cfg, &deadline, obs)).collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<_>>> = Mutex::new((0..n).map(|_| None).collect());
        std::thread::scope(|s| {
            for _ in 0..workers.min(n) {
                s.spawn(|| {
                    let local = clock;
                    let deadline = make_deadline(&local, cfg.time_limit.is_finite().then(|| deadline_on(&local)));
                    loop {
                        let r = next.fetch_add(1, Ordering::Relaxed);
                        if r >= n {
                            break;
                        }
                        let mut rec = Recorder::new(local);
                        let res = solve_region(&prep, r, cfg, &deadline, &mut rec);
                        slots.lock().expect("no worker panicked")[r] = Some((res, rec.events));
                    }
                });
            }
        });
        let slots = slots.into_inner().expect("no worker panicked");
        let mut results = Vec::with_capacity(n);
        for slot in slots {
            let (res, events) = slot.expect("every region was solved");
            for e in &events {
                replay(e);
            }
            results.push(res);
        }
        results
    };
    Ok(finish(prep, results, cfg))
}

fn make_deadline(clock: &dyn Clock, remaining: Option<f64>) -> Deadline<'_> {
    match remaining {
        Some(s) => Deadline::after(clock, s.max(0.0)),
        None => Deadline::never(clock),
    }
}

#[derive(Debug, Serialize)]
struct Fathomed {
    infeasible: usize,
    optimality: usize,
    dominance: usize,
    probe: usize,
}

#[derive(Debug, Serialize)]
struct FrontSummary {
    points: usize,
    segments: usize,
}

#[derive(Debug, Serialize)]
struct CheckpointEntry {
    region: usize,
    nodes: usize,
    #[serde(flatten)]
    gap: GapFields,
}

/// The stats file. It holds no wall-clock time, so identical runs give
/// identical files.
#[derive(Debug, Serialize)]
pub struct StatsReport {
    instance: String,
    status: &'static str,
    seed: u64,
    endpoints: [[f64; 2]; 2],
    front: FrontSummary,
    nodes: usize,
    milps: usize,
    lps: usize,
    fathomed: Fathomed,
    dominance_share: f64,
    rules: BTreeMap<&'static str, usize>,
    pareto_branchings: usize,
    variable_branchings: usize,
    presolve_fixings: usize,
    disjunction_cuts: usize,
    level_cuts: usize,
    preprocess_points: usize,
    regions: usize,
    lp_failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_gap: Option<GapFields>,
    checkpoints: Vec<CheckpointEntry>,
}

impl StatsReport {
    pub fn new(inst: &Instance, out: &SolveOutcome, seed: u64, gap: GapSelection) -> Self {
        let s = &out.stats;
        let elems = out.store.elements();
        let points = elems.iter().filter(|e| matches!(e, FrontElement::Point(_))).count();
        Self {
            instance: inst.name.clone(),
            status: match out.status {
                SolveStatus::Complete => "complete",
                SolveStatus::TimeLimit => "time_limit",
            },
            seed,
            endpoints: [[out.y1.f1, out.y1.f2], [out.y2.f1, out.y2.f2]],
            front: FrontSummary {
                points,
                segments: elems.len() - points,
            },
            nodes: s.nodes,
            milps: s.milps,
            lps: s.lps,
            fathomed: Fathomed {
                infeasible: s.fathomed_infeasible,
                optimality: s.fathomed_optimality,
                dominance: s.fathomed_dominance,
                probe: s.fathomed_probe,
            },
            dominance_share: s.dominance_share(),
            rules: Rule::ALL.iter().map(|&r| (r.name(), s.rule_count(r))).collect(),
            pareto_branchings: s.pareto_branchings,
            variable_branchings: s.variable_branchings,
            presolve_fixings: s.presolve_fixings,
            disjunction_cuts: s.disjunction_cuts,
            level_cuts: s.level_cuts,
            preprocess_points: s.preprocess_points,
            regions: s.regions,
            lp_failures: s.lp_failures,
            final_gap: s.final_gap.map(|g| gap.fields(&g)),
            checkpoints: s
                .checkpoints
                .iter()
                .map(|c| CheckpointEntry {
                    region: c.region,
                    nodes: c.nodes,
                    gap: gap.fields(&c.gap),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("stats serialize");
        s.push('\n');
        s
    }
}
