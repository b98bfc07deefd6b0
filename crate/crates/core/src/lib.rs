//! Verification engine for the nontriviality of `h0 * x_j` on the Adams
//! 6-line.
//!
//! The crate computes windows of the `q`-filtration spectral sequence and
//! the Cartan–Eilenberg degree bookkeeping for concrete `n`, and checks
//! low-degree facts with a minimal free resolution of `F_2` over the mod 2
//! Steenrod algebra.

pub mod f2linalg;
pub mod milnor;
pub mod resolution;
pub mod extlines;
pub mod bxss;
pub mod cess;
pub mod cli;
