//! Blind channel estimation and link simulation for amplify-and-forward
//! two-way relay networks with M-PSK signaling.
//!
//! The building blocks, bottom up:
//!
//! - [`specfun`]: modified Bessel functions, the Laguerre half-order
//!   polynomial, and envelope statistics of noncentral chi variables.
//! - [`model`]: constellation, power/amplification bookkeeping, correlated
//!   channel generation, and received-block synthesis.
//! - [`estimators`]: DML, MCML, GML, and training-based LS channel
//!   estimators; Viterbi-Viterbi phase recovery; coherent detection.
//! - [`bounds`]: Fisher information, CRB/MCRB, degeneracy detection, and
//!   closed-form MSE/variance predictions.
//! - [`harness`]: seeded, replayable Monte-Carlo MSE and SER sweeps.
//! - [`cli`]: the `twrn` command-line front end emitting plot-ready CSV.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod model;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
