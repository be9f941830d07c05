//! Weight modules over the Hopf-Ore extension kG(χ⁻¹, a, 0) of a finitely
//! generated abelian group algebra.
//!
//! The crate builds explicit matrix realizations of the indecomposable weight
//! modules, decomposes tensor products both by closed-form rules and by an
//! exact linear-algebra oracle, and computes in the Green ring.

pub mod error;
pub mod exactfield;
pub mod linalg;
pub mod hopfdata;
pub mod weightmods;
pub mod tensorrules;
pub mod oracle;
pub mod greenring;
pub mod envelope;

pub use error::{Error, Result};
pub use exactfield::{CycNum, Order};
