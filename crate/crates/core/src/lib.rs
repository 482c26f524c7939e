//! Exact branch-and-bound for biobjective mixed-integer linear programs.
//!
//! The crate computes the complete Pareto set (isolated points and line
//! segments in objective space) of
//!
//! ```text
//! min { (c1·x, c2·x) : A x <= b, l <= x <= u, x_0..x_{n_int-1} integer }
//! ```
//!
//! Everything here is `no_std` + `alloc`: file formats, clocks backed by the
//! OS and the command line live in the companion `bobb` crate.
//!
//! Layout:
//! - [`model`]: the instance representation.
//! - [`geometry`]: dominance, the nondominated archive and gap measures.
//! - [`lp`]: bounded-variable simplex, sensitivity analysis and the
//!   parametric generation of a relaxation's nondominated frontier.
//! - [`milp`]: a small single-objective branch-and-bound used as a subroutine.
//! - [`presolve`] and [`preprocess`]: dual presolve, probing and primal-bound
//!   seeding.
//! - [`bb`]: node processing, fathoming, branching and the top-level driver.
//! - [`oracle`]: brute-force slice enumeration for small instances.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bb;
pub mod clock;
pub mod geometry;
pub mod lp;
pub mod milp;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod presolve;
pub mod tol;

pub use bb::{bb_solve, BbConfig, BbError, SolveOutcome, SolveStats};
pub use clock::{Clock, NoClock};
pub use geometry::{FrontElement, ObjPoint, ObjSegment, ParetoStore};
pub use model::{Instance, ModelError, Row};
