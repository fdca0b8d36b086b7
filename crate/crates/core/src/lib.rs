//! Local distinguishability of maximally entangled states: generalized Bell
//! states, the condition-R linear system, one-way LOCC protocols and
//! information bounds.

pub mod bell;
pub mod bounds;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod linalg;
pub mod protocol;

pub use error::{Error, Result};
