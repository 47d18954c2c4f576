//! Exact Stirling and Bessel number families, the occupation-time moment
//! polynomials `P_n(x, z)`, a registry of summation identities checked in
//! exact arithmetic, and a Monte Carlo estimator for skew Brownian motion
//! occupation-time moments.
//!
//! Everything outside [`occupation`] is exact: integers are [`Int`]
//! (arbitrary precision) and rationals are [`Rat`] (always reduced, positive
//! denominator).

pub mod error;
pub mod exactnum;
pub mod identities;
pub mod occupation;
pub mod polyengine;
pub mod triangles;

pub use error::{Error, Result};
pub use exactnum::{Int, Rat};
pub use polyengine::{BiPoly, UniPoly};
