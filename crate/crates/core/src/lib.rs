//! Positive energy diagnostics for initial data sets on manifolds with a
//! noncompact boundary, asymptotic to the flat or hyperbolic half-space.

pub mod clifford;
pub mod constraints;
pub mod datasets;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod mass;
pub mod models;
pub mod verify;

pub use error::{Error, Result};
