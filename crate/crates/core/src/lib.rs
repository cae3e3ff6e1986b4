//! Finite-dimensional operator algebra for Grüss-type inequalities.
//!
//! Everything lives in `M_n(ℂ)`: elements are dense complex matrices, linear
//! maps `φ: M_n → M_m` are stored by their Choi matrix, and the headline
//! quantity is the defect `‖φ(ab) − φ(a)φ(b)‖` compared against the product
//! of the distances from `a` and `b` to the scalars.
//!
//! Module map:
//! - [`matcore`]: matrix kernel (norms, eigensolvers, Kronecker/block plumbing, sampling)
//! - [`posmaps`]: Choi/Kraus map representations, positivity tests, map constructors
//! - [`blockpos`]: block-matrix positivity checks (2×2 blocks, Schur complements, Choi's lemma)
//! - [`gruss`]: defect, Chebyshev radius, the Grüss bound and its verification suites
//! - [`dilation`]: Kraus/Stinespring construction and two-unitary convex decompositions
//! - [`io`]: text document formats for matrices, maps and reports

pub mod blockpos;
pub mod dilation;
pub mod error;
pub mod example;
pub mod gruss;
pub mod io;
pub mod matcore;
pub mod posmaps;
pub mod suites;

pub use error::{Error, Result};
pub use matcore::{Matrix, Tolerance, C64};
pub use posmaps::MapRep;
