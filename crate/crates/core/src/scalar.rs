//! Scalar abstraction: everything numeric in this crate is generic over a
//! floating-point type implementing [`Real`].

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar backing states, operators and measures: `f32` or `f64`.
///
/// The closed-form tolerances used throughout the test suite (1e-12 for exact
/// linear algebra) assume `f64`; the crate-root aliases pin that choice.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` literal (closed-form coefficients, tolerances).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must be representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Sums a slice by recursive halving.
///
/// The summation tree depends only on the slice length, so splitting the
/// per-element work across threads and reducing through this function yields
/// bit-identical totals for any worker count.
pub fn pairwise_sum<R: Real>(values: &[R]) -> R {
    if values.len() <= 8 {
        return values.iter().fold(R::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Arithmetic mean via [`pairwise_sum`]; zero for an empty slice.
pub fn pairwise_mean<R: Real>(values: &[R]) -> R {
    if values.is_empty() {
        return R::zero();
    }
    pairwise_sum(values) / R::of(values.len() as f64)
}
