//! Large deviations, limit laws and simulators for the leaf-counting Markov
//! chain of random recursive trees, preferential attachment graphs and Yule
//! trees.
//!
//! * [`chain`]: slope sequences, model presets, simulation.
//! * [`dist`]: exact law of `Z_n` (log-space and rational), pressure
//!   estimators, real-rootedness certificates.
//! * [`pressure`]: the limiting pressure, its derivatives and the rate
//!   function.
//! * [`path`]: the path rate functional and optimal trajectories.
//! * [`trees`]: the combinatorial objects themselves and Monte Carlo harnesses.
//! * [`verify`]: the acceptance suite shared by the CLI and the tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod cli;
pub mod dist;
pub mod error;
pub mod numeric;
pub mod output;
pub mod path;
pub mod pressure;
pub mod rng;
pub mod trees;
pub mod verify;

pub use chain::{ModelSpec, Scalar};
pub use error::{Error, Result};
