//! Std companion to `qtoda-core`: JSON formats, parallel drivers, the
//! verification suites and the `qtoda` command line.

pub mod cli;
pub mod json;
pub mod parallel;
pub mod verify;
