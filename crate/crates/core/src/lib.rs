//! Symmetric products and finite subset spaces of finite simplicial
//! complexes, built as simplicial sets, with exact homology.

pub mod constructions;
pub mod error;
pub mod homology;
pub mod space;
pub mod sset;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
