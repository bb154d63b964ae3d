//! File formats, parallel exhaustive search and the `peakctl` command line
//! on top of `peak-core`.

pub mod cli;
pub mod formats;
pub mod parallel;
