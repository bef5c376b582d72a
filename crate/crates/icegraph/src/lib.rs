//! Graph files, parallel Monte-Carlo, tables, experiments and the
//! command-line interface built on `icegraph-core`.

pub mod cli;
pub mod experiment;
pub mod io;
pub mod output;
pub mod parallel;
pub mod tables;
