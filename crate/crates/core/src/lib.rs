//! Diameter-perfect Lee codes built from lattice tilings of `Z^n`.
//!
//! A homomorphism from `Z^n` onto a finite Abelian group that is bijective
//! on a tile gives a lattice tiling by that tile; for double-sphere tiles an
//! even-weight choice of center in every tile is a perfect code of minimum
//! distance four. The crate constructs and searches for such maps, checks
//! them on finite windows, builds non-lattice codes from shifted half-integer
//! tilings and decodes with a table indexed by group-element rank.

pub mod abelian;
pub mod cli;
pub mod decoder;
pub mod dpl;
pub mod error;
pub mod lattice;
pub mod lee;
pub mod nonregular;
pub mod tiling;

pub use error::{Error, Result};
