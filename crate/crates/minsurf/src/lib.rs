//! File formats, reports and the `minsurf` command line on top of
//! [`minsurf_core`].
//!
//! ```text
//! minsurf analyze   --catalog clifford --n 256 --out out/
//! minsurf deform    --catalog veronese --theta 1.0 --out out/
//! minsurf monodromy --catalog clifford --scan 720 --tol-close 1e-6 --out out/
//! minsurf verify    --catalog clifford --perturb 1e-3 --seed 7 --out out/
//! ```
//!
//! Exit codes: 0 success, 1 a verification item failed, 2 usage, source or
//! configuration error, 3 numerical integrity error. Errors are reported as
//! a JSON document on stderr.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod report;
pub mod tags;
pub mod verify;

pub use config::{Command, JetChoice, RunConfig, Source};
pub use error::Failure;
