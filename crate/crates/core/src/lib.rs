//! Exact construction of the sphere complex, tropical complex, discriminant
//! and monodromy attached to a nef-partition with a pair of weight functions.

pub mod error;
pub mod geometry;
pub mod homology;
pub mod monodromy;
pub mod nef;
pub mod pipeline;
pub mod samples;
pub mod sphere;
pub mod subdivision;
pub mod tropical;

pub use error::{Error, Result};
