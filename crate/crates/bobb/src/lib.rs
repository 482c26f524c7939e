//! File formats, instance generation and the command-line front end of the
//! `bobb` biobjective MILP solver. The algorithms live in `bobb-core`.

pub mod cli;
pub mod clock;
pub mod events;
pub mod generate;
pub mod instances;
pub mod io;
pub mod run;
