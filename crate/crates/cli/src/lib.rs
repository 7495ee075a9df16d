//! State files, analysis reports, sweeps and verification suites for the
//! `spinsqueeze` command-line tool.

pub mod cli;
pub mod error;
pub mod generate;
pub mod report;
pub mod statefile;
pub mod sweep;
pub mod verify;
