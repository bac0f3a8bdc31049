//! Scalar abstraction for the numerical core.
//!
//! Everything in the physics modules is generic over [`Real`]; `f32` and
//! `f64` both satisfy it, and the crate root exports `f64` aliases for the
//! common case.

/// Real scalar the solvers work over.
///
/// `nalgebra::RealField` supplies the transcendental functions and the dense
/// linear algebra; the `num_traits` casts move literals and step counts
/// across the generic boundary.
pub trait Real:
    Copy + nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// `true` when `x` is neither NaN nor infinite.
#[inline]
pub fn finite<T: Real>(x: T) -> bool {
    x.to_f64().map_or(false, f64::is_finite)
}
