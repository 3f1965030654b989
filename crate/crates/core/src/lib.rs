//! Exact constructions and verifiers for rich lines in Cartesian grids.
//!
//! A line `y = ax + b` with `a ≠ 0` is the graph of the affine map
//! `x ↦ ax + b`, so counting grid points on lines over `Y × Y` is the same as
//! measuring `|Y ∩ gY|` for elements `g` of Aff(1,𝔽). The crate builds on
//! that dictionary:
//!
//! * [`scalar`], [`affine`], [`grid`]: exact field arithmetic, the affine
//!   group with its line reading, and richness counting.
//! * [`construct`]: the integer grid with many rich lines in general position,
//!   the prime-power slope planner and greedy intercept selector.
//! * [`symset`]: complete enumeration of symmetry sets `sym_α(Y)`.
//! * [`growth`]: partial products, approximate closure, the iterated
//!   closure pipeline, tripling and Ruzsa checks.
//! * [`product_thm`]: the commutator decomposition, product dichotomies and
//!   the sum-product harness.
//! * [`oracle`]: brute-force reference computations.
//! * [`cli`]: the `richlines` command-line front end.
//!
//! All arithmetic is exact. Content stated over ℝ or ℂ is realized in ℚ.

pub mod affine;
pub mod caps;
pub mod cli;
pub mod construct;
pub mod error;
pub mod grid;
pub mod growth;
pub mod numeric;
pub mod oracle;
pub mod product_thm;
pub mod report;
pub mod scalar;
pub mod symset;

pub use affine::{AffineMap, CosetDescriptor};
pub use error::{Error, Result};
pub use grid::GroundSet;
pub use scalar::{Field, Rational, Scalar};
