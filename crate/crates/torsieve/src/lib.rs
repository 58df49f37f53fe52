//! Command-line tools, file formats and parallel drivers on top of
//! `torsieve-core`.

pub mod cli;
pub mod format;
pub mod golden;
pub mod grid;
pub mod runner;
