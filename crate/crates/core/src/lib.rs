//! Exact combinatorics behind real open Gromov-Witten counts.
//!
//! The crate is split by subject:
//!
//! * [`clifford`]: Clifford products for the two Pin models, the covering map
//!   to signed permutations and the lifting checks on blades.
//! * [`maslov`]: Maslov index and first Stiefel-Whitney class of sampled loops
//!   of totally real subspaces.
//! * [`signs`]: mod-2 sign formulas for conjugation on determinant lines and
//!   on boundary strata, the dimension balance and the cancellation sweep.
//! * [`charclass`]: Schubert calculus on `G(2, n)`, splitting-principle
//!   classes and the real and complex line counts on the quintic.
//! * [`strata`]: codimension-one boundary strata, their pairing under
//!   conjugation and the formal cancellation certificate.
//!
//! Sweeps run on rayon when the `parallel` feature is enabled (the default);
//! every parallel entry point has a `_seq` twin that is always available.

pub mod charclass;
pub mod clifford;
pub mod error;
pub mod maslov;
pub mod par;
pub mod signs;
pub mod strata;

pub use error::{Error, Result};

/// Exact rational used for all algebraic coefficients.
pub type Rational = num_rational::BigRational;

/// A mod-2 value, always `0` or `1`.
pub type Bit = u8;

/// Reduces an integer to its mod-2 representative in `{0, 1}`.
#[inline]
pub fn bit(x: i64) -> Bit {
    x.rem_euclid(2) as Bit
}

/// `x * (x + shift) / 2 mod 2` with the division performed before reduction.
///
/// `shift` must be odd so the numerator is even.
#[inline]
pub(crate) fn half_product_bit(x: i64, shift: i64) -> Bit {
    debug_assert!(shift.rem_euclid(2) == 1);
    bit((x * (x + shift)).div_euclid(2))
}
