//! Second objectives for single-objective MILPs.
//!
//! Six rules build a second objective `c2` from an instance's first
//! objective `c1`:
//!
//! * `o` — `c2_i` uniform in `[-|c1_i|, |c1_i|]`;
//! * `a` — flip the sign of `c1_i` at nonbasic variables of the LP optimum
//!   of `f1` that sit away from the bound `c1_i` pushes them to;
//! * `b` — `c2_i = 1 / c1_i` (zero stays zero);
//! * `c` — the sum of the continuous variables;
//! * `d` — the sum of the integer variables plus the first continuous one;
//! * `e` — rule `a` restricted to integer variables whose LP and MILP
//!   optimum values agree.

use std::fmt;
use std::str::FromStr;

use bobb_core::clock::{Clock, Deadline};
use bobb_core::lp::{lp_solve, LpError};
use bobb_core::milp::{milp_solve, MilpOptions, MilpStatus};
use bobb_core::model::Instance;
use bobb_core::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjRule {
    O,
    A,
    B,
    C,
    D,
    E,
}

impl ObjRule {
    pub const ALL: [ObjRule; 6] = [ObjRule::O, ObjRule::A, ObjRule::B, ObjRule::C, ObjRule::D, ObjRule::E];

    pub fn tag(self) -> char {
        match self {
            ObjRule::O => 'o',
            ObjRule::A => 'a',
            ObjRule::B => 'b',
            ObjRule::C => 'c',
            ObjRule::D => 'd',
            ObjRule::E => 'e',
        }
    }
}

impl fmt::Display for ObjRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl FromStr for ObjRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ObjRule::ALL
            .into_iter()
            .find(|r| s.len() == 1 && s.starts_with(r.tag()))
            .ok_or_else(|| format!("unknown objective rule `{s}` (expected one of o, a, b, c, d, e)"))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("the MILP for the first objective did not finish within the time limit")]
    Timeout,
    #[error("the instance is infeasible")]
    Infeasible,
    #[error("the relaxation of the first objective failed: {0}")]
    Lp(LpError),
    #[error("rule {0} gives an all-zero second objective for this instance")]
    Degenerate(ObjRule),
}

/// Builds the second objective of `inst` by `rule`. `seed` drives rule `o`;
/// `milp` and `clock` bound the MILP solve of rule `e`.
pub fn generate_objective(
    inst: &Instance,
    rule: ObjRule,
    seed: u64,
    milp: &MilpOptions,
    clock: &dyn Clock,
) -> Result<Vec<f64>, GenerateError> {
    let n = inst.n();
    let c1 = &inst.c1;
    let c2: Vec<f64> = match rule {
        ObjRule::O => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            c1.iter()
                .map(|&c| if c == 0.0 { 0.0 } else { rng.gen_range(-c.abs()..=c.abs()) })
                .collect()
        }
        ObjRule::B => c1.iter().map(|&c| if c == 0.0 { 0.0 } else { 1.0 / c }).collect(),
        ObjRule::C => (0..n).map(|j| if inst.is_int(j) { 0.0 } else { 1.0 }).collect(),
        ObjRule::D => (0..n)
            .map(|j| if inst.is_int(j) || (inst.n_cont > 0 && j == inst.n_int) { 1.0 } else { 0.0 })
            .collect(),
        ObjRule::A => {
            let lp = relaxation(inst)?;
            (0..n).map(|j| flipped(inst, &lp, j)).collect()
        }
        ObjRule::E => {
            let lp = relaxation(inst)?;
            let deadline = Deadline::never(clock);
            let res = milp_solve(inst, (1.0, 0.0), &inst.lower, &inst.upper, &[], milp, &deadline);
            let x = match res.status {
                MilpStatus::Optimal => res.x.expect("an optimal MILP has a solution"),
                MilpStatus::Infeasible => return Err(GenerateError::Infeasible),
                MilpStatus::FeasibleTimeout => return Err(GenerateError::Timeout),
            };
            (0..n)
                .map(|j| {
                    if inst.is_int(j) && (lp.x[j] - x[j]).abs() <= tol::INT {
                        flipped(inst, &lp, j)
                    } else {
                        c1[j]
                    }
                })
                .collect()
        }
    };
    if c2.iter().all(|&c| c == 0.0) {
        return Err(GenerateError::Degenerate(rule));
    }
    Ok(c2)
}

struct Relaxation {
    x: Vec<f64>,
    nonbasic: Vec<bool>,
}

fn relaxation(inst: &Instance) -> Result<Relaxation, GenerateError> {
    let sol = lp_solve(inst, (1.0, 0.0), &inst.lower, &inst.upper, &[], None).map_err(|e| match e {
        LpError::Infeasible => GenerateError::Infeasible,
        e => GenerateError::Lp(e),
    })?;
    let mut nonbasic = vec![true; inst.n()];
    for &b in &sol.basis.basic {
        if b < inst.n() {
            nonbasic[b] = false;
        }
    }
    Ok(Relaxation { x: sol.x, nonbasic })
}

/// Rule `a` for variable `j`: `-c1_j` at a nonbasic variable that is off the
/// bound its cost favours, `c1_j` otherwise.
fn flipped(inst: &Instance, lp: &Relaxation, j: usize) -> f64 {
    let c = inst.c1[j];
    if !lp.nonbasic[j] {
        return c;
    }
    let at = |b: f64| (lp.x[j] - b).abs() <= 1e-9 * (1.0 + b.abs());
    if (c > 0.0 && !at(inst.lower[j])) || (c < 0.0 && !at(inst.upper[j])) {
        -c
    } else {
        c
    }
}
