//! Homology, surface classification and the sphere-recognition workflow.

pub mod homology;
pub mod snf;
pub mod surface;
pub mod workflow;
