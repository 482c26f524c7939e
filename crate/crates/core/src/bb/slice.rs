//! Nondominated frontier of the slice problem at an integer assignment.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::FrontElement;
use crate::lp::{parametric_front, LpError};
use crate::model::{Instance, Row};
use crate::tol;

/// Frontier of `{f(x) : x feasible, x_i = x*_i for every integer i}`, with
/// `extra_rows` added to the constraints. The integer part of `x_star` is
/// rounded before fixing. Without continuous variables the slice is the
/// single image `f(x*)` (if feasible).
pub fn slice_front_with(inst: &Instance, x_star: &[f64], extra_rows: &[Row]) -> Result<Vec<FrontElement>, LpError> {
    let mut lo = inst.lower.clone();
    let mut up = inst.upper.clone();
    for j in 0..inst.n_int {
        let v = tol::round(x_star[j]);
        lo[j] = v;
        up[j] = v;
    }
    if inst.n_cont == 0 {
        let feasible = inst.is_feasible_with(&lo, &lo, &up, tol::FEAS)
            && extra_rows.iter().all(|r| r.activity(&lo) <= r.rhs + tol::FEAS * (1.0 + r.rhs.abs()));
        return if feasible {
            Ok(vec![FrontElement::Point(inst.objectives(&lo))])
        } else {
            Err(LpError::Infeasible)
        };
    }
    Ok(parametric_front(inst, &lo, &up, extra_rows)?.elements())
}

/// [`slice_front_with`] without extra rows.
pub fn slice_front(inst: &Instance, x_star: &[f64]) -> Result<Vec<FrontElement>, LpError> {
    slice_front_with(inst, x_star, &[])
}
