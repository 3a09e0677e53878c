//! Scalar abstraction for the numeric kernel.
//!
//! Everything in this crate is generic over the real scalar type through
//! [`Scalar`], implemented for `f32` and `f64`. Tolerances are part of the
//! trait because they are precision-dependent: the `f64` values are the
//! contract the rest of the crate (and its tests) are written against, the
//! `f32` values are scaled to that type's precision.

use std::fmt;
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type backing all matrices and states: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Largest accepted entrywise deviation from Hermitian symmetry.
    fn herm_tol() -> Self;
    /// Most negative eigenvalue still accepted as positive semidefinite
    /// (stored as a positive magnitude).
    fn psd_floor() -> Self;
    /// Frobenius bound for eigendecomposition and decomposition reconstructions,
    /// relative to `max(1, ||A||_F)`.
    fn recon_tol() -> Self;
    /// Frobenius bound for `S*S` reconstruction of a matrix square root.
    fn sqrt_recon_tol() -> Self;
    /// Off-diagonal Frobenius target of the Jacobi sweep, relative to
    /// `max(1, ||A||_F)`.
    fn jacobi_off_tol() -> Self;
    /// Acceptance bound for quantities that must sum to one
    /// (normalization, trace, decomposition weights) and for the
    /// pairwise-inequality scan slack.
    fn sum_tol() -> Self;
    /// Magnitude below which a coefficient counts as zero.
    fn negligible() -> Self;
}

impl Scalar for f64 {
    fn herm_tol() -> Self {
        1e-12
    }
    fn psd_floor() -> Self {
        1e-10
    }
    fn recon_tol() -> Self {
        1e-10
    }
    fn sqrt_recon_tol() -> Self {
        1e-9
    }
    fn jacobi_off_tol() -> Self {
        1e-13
    }
    fn sum_tol() -> Self {
        1e-12
    }
    fn negligible() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn herm_tol() -> Self {
        1e-4
    }
    fn psd_floor() -> Self {
        1e-3
    }
    fn recon_tol() -> Self {
        1e-3
    }
    fn sqrt_recon_tol() -> Self {
        1e-3
    }
    fn jacobi_off_tol() -> Self {
        1e-6
    }
    fn sum_tol() -> Self {
        1e-5
    }
    fn negligible() -> Self {
        1e-5
    }
}

/// Complex number over the crate's scalar type.
pub type C<T> = Complex<T>;

/// Lift an `f64` constant into `T`.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

/// Complex number from real parts.
#[inline]
pub fn c<T: Scalar>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// Purely real complex number.
#[inline]
pub fn cr<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
