//! Direction recovery from nonlinear single-index observations under
//! generative priors.
//!
//! The library simulates observations y_i = f(<a_i, x>) with Gaussian
//! measurement vectors, recovers the direction of x with a non-iterative
//! back-projection estimator (project (1/m) A^T y onto the range of a
//! generative model) alongside iterative baselines, and verifies the
//! estimator's concentration behavior and sqrt(k log L / m) error scaling
//! empirically.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod generators;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod observation;
pub mod projection;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};
