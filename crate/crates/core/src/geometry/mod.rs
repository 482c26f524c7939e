//! Objective-space primitives: dominance, the nondominated archive and gap
//! measures.

mod gap;
mod point;
mod store;

pub use gap::{dominated_area, hausdorff_gap, hypervolume_gap, GapError, GapReport, OsRect};
pub use point::{dominates, dominates_tol, FrontElement, ObjPoint, ObjSegment};
pub use store::{nd_filter, ParetoStore};
