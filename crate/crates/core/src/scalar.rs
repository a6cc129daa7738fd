//! Real scalar abstraction backing all complex arithmetic in this crate.
//!
//! Every numeric routine is generic over [`Scalar`] so the same code runs in
//! single or double precision. Double precision is the working default; the
//! crate root exposes `f64`-concrete aliases for the common types.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::{Product, Sum};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar. Implemented for `f32` and `f64`.
///
/// The associated tolerances are max-norm bounds on `U†U − I` and scale with
/// the precision of the type: QR-based constructions land well inside them,
/// while genuinely non-unitary matrices land far outside.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Product
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Unitarity tolerance for matrices constructed in-process (QR output,
    /// compiled circuits).
    const UNITARITY_TOL_CONSTRUCT: Self;
    /// Unitarity tolerance when re-validating a product of unitaries.
    const UNITARITY_TOL_PRODUCT: Self;
    /// Unitarity tolerance for matrices loaded from files.
    const UNITARITY_TOL_LOADED: Self;
    /// Allowed drift of a probability distribution's total mass from 1.
    const NORMALIZATION_TOL: Self;
}

impl Scalar for f64 {
    const UNITARITY_TOL_CONSTRUCT: Self = 1e-10;
    const UNITARITY_TOL_PRODUCT: Self = 1e-9;
    const UNITARITY_TOL_LOADED: Self = 1e-8;
    const NORMALIZATION_TOL: Self = 1e-9;
}

impl Scalar for f32 {
    const UNITARITY_TOL_CONSTRUCT: Self = 1e-4;
    const UNITARITY_TOL_PRODUCT: Self = 5e-4;
    const UNITARITY_TOL_LOADED: Self = 1e-3;
    const NORMALIZATION_TOL: Self = 1e-4;
}

/// Convert an `f64` constant (tolerance, literal) into the working scalar.
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant must be representable in the scalar type")
}

/// Convert a count into the working scalar.
pub(crate) fn count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count must be representable in the scalar type")
}

/// n! as a scalar. Exact in integer arithmetic first, then converted, so the
/// result is correctly rounded for every n that fits a u128 (n ≤ 34).
pub(crate) fn factorial<T: Scalar>(n: usize) -> T {
    let mut acc: u128 = 1;
    for k in 2..=n as u128 {
        acc = acc.checked_mul(k).expect("factorial overflow");
    }
    T::from_u128(acc).expect("factorial must be representable")
}
