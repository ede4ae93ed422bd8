//! Exact arithmetic in the truncated Grassmann algebra `E_N`.
//!
//! Models of infinite-algebra statements must leave slack above the top
//! degree: `E_N` has spurious central elements near length `N`, so tests
//! should pick `N` at least two above the largest length they produce.

mod element;
mod monomial;

pub use element::Element;
pub use monomial::{Monomial, Truncation, MAX_GENERATORS};
