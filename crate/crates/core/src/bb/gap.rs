//! Global dual bound and gap checkpoints.

use crate::geometry::{hausdorff_gap, hypervolume_gap, FrontElement, GapError, GapReport, ObjPoint, OsRect, ParetoStore};

/// Nondominated union of the open nodes' frontiers and the store.
///
/// Including the store keeps the bound region monotone: fathomed nodes
/// leave the union only after their images were absorbed by the store.
pub fn global_dual_bound<I: IntoIterator<Item = FrontElement>>(curves: I, store: &ParetoStore) -> ParetoStore {
    let mut db = store.clone();
    for e in curves {
        db.insert(e);
    }
    db
}

/// Gap measures of `db` against `store`. An empty input gives an infinite
/// distance gap; a zero-area rectangle gives a zero hypervolume gap.
pub fn gap_checkpoint(db: &ParetoStore, store: &ParetoStore, y1: &ObjPoint, y2: &ObjPoint, rect: &OsRect) -> GapReport {
    let (g, gbar) = hausdorff_gap(db, store, y1, y2).unwrap_or((f64::INFINITY, 0.0));
    let hv = match hypervolume_gap(db, store, rect) {
        Ok(v) => v,
        Err(GapError::ZeroArea) => 0.0,
        Err(GapError::EmptyInput) => 100.0,
    };
    GapReport { g, gbar, hv }
}
