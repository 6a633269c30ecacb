//! Exact computations around arboreal Galois representations: finite rooted
//! trees and their automorphism groups, preimage trees of rational maps,
//! Galois degrees of iterated preimage fields for quadratic maps, and
//! Minkowski-dimension estimates built from those degrees.

pub mod aut;
pub mod dimension;
pub mod dynamics;
pub mod quad_tower;
pub mod error;
pub mod report;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
