//! Quantum correlations of two-qubit symmetric XXZ states.
//!
//! A state is fixed by three correlators `(s1, c1, c3)` inside a tetrahedron.
//! For each state the crate computes the entropy deficit after a one-sided
//! projective measurement, minimises it over the measurement direction and
//! classifies the optimal direction (along z, in the xy-plane, or oblique).
//! The phase boundaries between these classes are traced as curves and
//! rasterised into section diagrams.

pub mod boundaries;
pub mod correlations;
pub mod diagram;
pub mod entropy;
pub mod error;
pub mod minimize;
pub mod roots;
pub mod sample;
pub mod state;
pub mod verify;

pub use correlations::{deficit, discord, DeficitResult, PhaseLabel};
pub use error::{DomainError, Error, Result};
pub use state::XxzState;
