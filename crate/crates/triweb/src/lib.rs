//! File formats and the command-line front end for `triweb-core`.

pub mod cli;
pub mod formats;
