//! Simulation and statistical verification for continuum percolation in
//! weight-dependent random connection models.
//!
//! The crate samples marked Poisson point processes, builds random
//! connection graphs on them, detects annulus-crossing and long-edge events
//! exactly, and estimates their probabilities with confidence intervals.

pub mod coupling;
pub mod error;
pub mod estimators;
pub mod events;
pub mod geometry;
pub mod graph;
pub mod model;
pub mod ppp;
pub mod quadrature;
pub mod renorm;
pub mod rng;

pub use error::{PercoError, Result};
