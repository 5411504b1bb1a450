//! Exact-arithmetic Bhargava factorials for subsets of the integers:
//! a greedy p-ordering oracle, p-adic closure analysis of polynomial
//! images, and closed-form factorials for quadratic images, each
//! cross-validated against the others.

pub mod arith;
pub mod closure;
pub mod error;
pub mod pordering;
pub mod quadratic;
pub mod subsets;
pub mod verify;

pub use arith::{FactoredInteger, Valuation};
pub use error::{Error, Result};
pub use pordering::POrderingResult;
pub use subsets::{Poly, SetSpec};
