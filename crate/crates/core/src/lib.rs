//! Construction, analysis and synthesis of two-qubit braid and Yang-Baxter gates.

pub mod error;
pub mod linalg;
pub mod braid;
pub mod weyl;
pub mod baxterize;
pub mod classify;
pub mod synth;

pub use error::{Error, Result};
