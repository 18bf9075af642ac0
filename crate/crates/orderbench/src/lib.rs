//! File formats, seeded generators, invariant suites and the command-line
//! front end for `orderbench-core`.

pub mod cli;
pub mod dot;
pub mod gen;
pub mod json;
pub mod suites;
