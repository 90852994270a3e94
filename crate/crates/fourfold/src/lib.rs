//! Exact verification toolkit for the derived-category geometry of cubic
//! fourfolds.
//!
//! The crate mechanizes five interlocking computations:
//!
//! - [`piclattice`]: integer divisor-class arithmetic in the Picard lattices
//!   of the two blowup models (a cubic containing a plane, blown up along the
//!   plane; a one-node cubic, blown up at the node).
//! - [`cohomology`]: exact sheaf-cohomology tables for line bundles on
//!   projective spaces, projectivized split bundles, divisors, and two-term
//!   resolutions, with an explicit "undetermined" refusal whenever a
//!   connecting map is not forced.
//! - [`sodengine`]: a symbolic mutation calculus on semiorthogonal
//!   decompositions that replays the two seven/six-step mutation sequences
//!   and certifies every transposition and collapse against the cohomology
//!   oracle.
//! - [`mukai`]: the rank-3 twisted Mukai lattice of a degree-2 K3 surface,
//!   its Euler-pairing Gram matrix, parity certificates, and exhaustive
//!   obstruction searches.
//! - [`pflab`]: Pfaffians of 6x6 skew forms over exact fields, Pfaffian
//!   cubics, singular-locus and Grassmannian zero-locus enumeration over
//!   small finite fields.
//!
//! [`report`] bundles everything into named, citable checks for the CLI.

// index-based loops mirror the matrix formulas throughout; keep them
#![allow(clippy::needless_range_loop)]

pub mod cohomology;
pub mod mukai;
pub mod pflab;
pub mod piclattice;
pub mod report;
pub mod scalar;
pub mod sodengine;

pub use scalar::{Rat, F11, F13, F2, F25, F3, F4, F49, F5, F7, F9};
