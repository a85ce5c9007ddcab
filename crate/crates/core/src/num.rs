//! Scalar abstraction for the numeric kernels.
//!
//! Everything downstream is generic over [`Real`], which is implemented for
//! `f32` and `f64`. The crate-root aliases pin `f64` for the shipped tools;
//! all file payloads are stored as little-endian `f64` regardless of the
//! in-memory scalar.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

/// Floating-point scalar usable by every kernel in this crate.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + rustfft::FftNum + std::iter::Sum + std::fmt::Display
{
    /// Draw from `Uniform[lo, hi)`.
    fn sample_uniform<G: Rng + ?Sized>(rng: &mut G, lo: Self, hi: Self) -> Self;
    /// Draw from the standard normal distribution.
    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;
}

impl Real for f64 {
    fn sample_uniform<G: Rng + ?Sized>(rng: &mut G, lo: Self, hi: Self) -> Self {
        Uniform::new(lo, hi).expect("valid uniform range").sample(rng)
    }

    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    fn sample_uniform<G: Rng + ?Sized>(rng: &mut G, lo: Self, hi: Self) -> Self {
        Uniform::new(lo, hi).expect("valid uniform range").sample(rng)
    }

    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

/// Lossless-enough conversion from `f64` constants into the working scalar.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 constant representable in scalar type")
}

/// Convert a count into the working scalar.
#[inline]
pub fn real_of<R: Real>(n: usize) -> R {
    R::from_usize(n).expect("usize representable in scalar type")
}
