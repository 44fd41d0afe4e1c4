//! Exact commutator-width computations on concrete group models.

pub mod error;
pub mod abelian;
pub mod describe;
pub mod exact;
pub mod finite;
pub mod harness;
pub mod models;
pub mod nilpotent;

pub use error::{Error, Result};
