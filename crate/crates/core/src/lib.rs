//! Derivative-free minimization of nonsmooth (locally Lipschitz) functions.
//!
//! The crate provides
//!
//! * [`solver`]: a coordinate linesearch method with a dense direction
//!   sequence (`csdfn`) and its accelerated variant (`fast-csdfn`), which
//!   reuses the difference quotients of failed linesearches to estimate the
//!   generators of a polyhedral subdifferential and searches along the
//!   negative of their minimum-norm convex combination;
//! * the building blocks of that variant: [`linesearch`], [`clustering`],
//!   [`simplex_qp`] and [`direction`];
//! * [`problems`]: a registry of classic nonsmooth test problems;
//! * [`bench`]: performance and data profiles over solver/problem grids.
//!
//! ```
//! use nsdfo::{problems::registry_get, solver::{run_fast_csdfn, SolverConfig}};
//!
//! let problem = registry_get("crescent", 2).unwrap();
//! let record = run_fast_csdfn(&problem, &SolverConfig::default()).unwrap();
//! assert!(record.final_f < 1e-3);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod clustering;
pub mod config;
pub mod direction;
pub mod error;
pub mod linesearch;
pub mod problems;
pub mod simplex_qp;
pub mod solver;

pub use error::{Error, Result};
