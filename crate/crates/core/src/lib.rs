//! Exact enhanced Bruhat decomposition for matrices and filtered chain
//! complexes over ℚ, prime fields and ℤ.
//!
//! The crate reduces matrices to their unique rook form under the two-sided
//! unitriangular action, extracts Barannikov pairs and Bruhat numbers from
//! filtered complexes, computes torsion invariants, and simulates
//! one-parameter families of complexes as scripts of elementary moves.
//!
//! ```
//! use bruhat_core::{catalog, enhanced_complex::bdata, scalars::FieldSpec};
//!
//! let d = bdata(&catalog::rp(4).to_field(FieldSpec::Rationals)).unwrap();
//! assert_eq!(d.homological(), vec![1]);
//! assert!(d.pairs().iter().all(|p| p.bruhat.to_string() == "2"));
//! ```

pub mod error;
pub mod matrix;
pub mod scalars;
pub mod enhanced_linear;
pub mod enhanced_complex;
pub mod integral;
pub mod torsion;
pub mod random;
pub mod paths;
pub mod catalog;
pub mod io;

pub use error::{Error, Result};
