//! Qubit Hamiltonians as strong-field limits of q-state clock models with
//! diagonal interactions, plus the solvers used to check the construction.

// Guards such as `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bose_hubbard;
pub mod cli;
pub mod ed;
pub mod error;
pub mod kitaev;
pub mod linalg;
pub mod model;
pub mod model_io;
pub mod potts;
pub mod qudit;
pub mod rydberg;
pub mod selftest;
pub mod sparse;
pub mod transmute;

pub use error::{Error, Result};
