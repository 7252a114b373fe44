//! Enumeration and classification of partial Latin rectangles and
//! self-orthogonal partial Latin rectangles.
//!
//! Every count is available along two independent routes: a boolean
//! Gröbner-basis engine over F2 whose Hilbert functions count the objects,
//! and direct combinatorial search (backtracking, independent-set
//! polynomials of Hamming graphs). The two routes are cross-checked in the
//! test suites.
//!
//! Conventions: rows and columns are 0-based indices, symbols are 1-based
//! values in `1..=n`. Empty cells are `None`.

pub mod classify;
pub mod distribution;
pub mod enumeration;
mod error;
pub mod groebner;
pub mod hamming;
pub mod ideals;
pub mod perm;
pub mod plr;
pub mod strategies;

pub use distribution::SizeDistribution;
pub use error::{Error, Result};
pub use perm::Permutation;
pub use plr::{Isotopism, OrthogonalArray, Paratopism, Parastrophe, PartialLatinRectangle};
