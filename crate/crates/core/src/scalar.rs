//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar type used throughout the crate (`f32` or `f64`).
///
/// The associated tolerances are absolute and sized to the precision of the
/// type: they bound simplex-membership checks and LP pivot selection.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Slack allowed when checking that coordinates sum to one.
    const SIMPLEX_TOL: Self;
    /// Smallest magnitude accepted as a pivot element.
    const PIVOT_TOL: Self;
    /// Minimum l1 separation between distinct sample directions.
    const DISTINCT_TOL: Self;

    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer count or degree.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("integer representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const SIMPLEX_TOL: Self = 1e-12;
    const PIVOT_TOL: Self = 1e-9;
    const DISTINCT_TOL: Self = 1e-10;
}

impl Real for f32 {
    const SIMPLEX_TOL: Self = 1e-5;
    const PIVOT_TOL: Self = 1e-5;
    const DISTINCT_TOL: Self = 1e-6;
}

/// Dot product of two equal-length slices.
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// l1 distance between two equal-length slices.
pub(crate) fn l1_distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs())
}
