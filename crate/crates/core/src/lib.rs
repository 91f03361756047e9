//! Exact arithmetic in wreath products of free abelian groups `ℤⁿ ≀ ℤᵐ`,
//! group equations over them, and the compiler from integer polynomial
//! equations to equation systems whose solvability encodes integer roots.

pub mod equations;
pub mod error;
pub mod gadgets;
pub mod group;
pub mod interp;
pub mod laurent;
pub mod reduction;
pub mod sample;
pub mod selftest;
mod syntax;
pub mod wreath;

pub use error::{Error, Result};
pub use group::GroupElement;
pub use interp::{IteratedSpec, NestedElement};
pub use laurent::{AugValuation, LaurentPoly, Monomial};
pub use reduction::IntPolynomial;
pub use syntax::parse_int_list;
pub use wreath::{GroupSpec, WreathElement};
