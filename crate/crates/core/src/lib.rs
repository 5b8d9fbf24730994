//! Plane models of the projective line admitting two inner Galois points.

pub mod config;
pub mod criterion;
pub mod divisor;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod model;
pub mod pgl2;
pub mod poly;
pub mod quotient;
pub mod search;

pub use error::{Error, Result};
