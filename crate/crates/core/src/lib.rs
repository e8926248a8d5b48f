//! Exact Laurent-series linear algebra over rings with nilpotents, and vector
//! bundles on the projective line glued from transition matrices.

pub mod cli;
pub mod error;
pub mod glue;
pub mod json;
pub mod laurent;
pub mod linalg;
pub mod matfact;
pub mod matrix;
pub mod ring;

pub use error::{Error, Result};
