//! Depth invariants of modular invariant rings F[V]^G for finite matrix
//! groups over prime fields, with executable checks for the depth theorems
//! they satisfy (Duflot-style bounds, regular-sequence lifting, detection by
//! pointwise stabilizers, comodule identities).

pub mod cache;
pub mod depth;
pub mod error;
pub mod field;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod matgroup;
pub mod poly;
pub mod report;
pub mod restriction;
pub mod scenario;
pub mod theorems;

pub use error::{Error, Result};
