//! Finite groups as Cayley tables: the exhaustive oracle.

pub mod catalog;
pub mod checks;
mod group;

pub use group::{FiniteGroup, FiniteSubgroup, Series, WidthProfile, DEGREE_CAP, ORDER_CAP};
