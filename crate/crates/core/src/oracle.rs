//! Brute-force reference: the nondominated set is the nondominated union of
//! the slice frontiers over every integer assignment.

use crate::bb::slice_front;
use crate::geometry::ParetoStore;
use crate::lp::LpError;
use crate::model::Instance;

/// Default bound on the number of integer assignments enumerated.
pub const DEFAULT_LATTICE_CAP: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("the integer lattice has {size} assignments, more than the cap of {cap}")]
    TooLarge { size: f64, cap: f64 },
    #[error("a slice LP failed: {0}")]
    Lp(LpError),
}

/// Enumerates every integer assignment within the bounds of `inst` and
/// nondominated-filters the union of the feasible slices' frontiers.
pub fn oracle_front(inst: &Instance, cap: f64) -> Result<ParetoStore, OracleError> {
    let size = inst.lattice_size();
    if size.is_nan() || size > cap {
        return Err(OracleError::TooLarge { size, cap });
    }
    let k = inst.n_int;
    let mut x = inst.lower.clone();
    let mut store = ParetoStore::new();
    loop {
        match slice_front(inst, &x) {
            Ok(front) => {
                for e in front {
                    store.insert(e);
                }
            }
            Err(LpError::Infeasible) => {}
            Err(e) => return Err(OracleError::Lp(e)),
        }
        // odometer increment over the integer block
        let mut i = 0;
        loop {
            if i == k {
                return Ok(store);
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
