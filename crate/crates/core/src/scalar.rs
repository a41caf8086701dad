//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, RealField};
use num_traits::{FloatConst, ToPrimitive};

/// Complex number over a generic real scalar.
pub type C<T> = Complex<T>;

/// Real scalar usable throughout the crate: `f32` or `f64`.
///
/// The associated constants are the default relative tolerances used by the
/// symmetry checks and the spectral routines. They are expressed as `f64` and
/// converted on use so that single precision can carry looser defaults.
pub trait Real: RealField + Copy + FloatConst + ToPrimitive + Display + Debug + 'static {
    /// Relative residual below which a symmetry relation is reported as holding.
    const SYMMETRY_TOL: f64;
    /// Relative biorthogonal overlap below which a mode is flagged as near an exceptional point.
    const EP_THRESHOLD: f64;
    /// Relative distance allowed when matching eigenvalues of `H` and `H^T`.
    const MATCH_TOL: f64;
    /// Eigenvalues closer than this (relative to `|H|`) are treated as one cluster.
    const CLUSTER_TOL: f64;
    /// Particle-hole pairing tolerance, relative to `max |w|`.
    const PAIR_TOL: f64;
    /// Zero-mode tolerance, relative to `max |w|`.
    const ZERO_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const SYMMETRY_TOL: f64 = 1e-10;
    const EP_THRESHOLD: f64 = 1e-6;
    const MATCH_TOL: f64 = 1e-8;
    const CLUSTER_TOL: f64 = 1e-7;
    const PAIR_TOL: f64 = 1e-8;
    const ZERO_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const SYMMETRY_TOL: f64 = 1e-4;
    const EP_THRESHOLD: f64 = 1e-3;
    const MATCH_TOL: f64 = 1e-3;
    const CLUSTER_TOL: f64 = 1e-3;
    const PAIR_TOL: f64 = 1e-3;
    const ZERO_TOL: f64 = 1e-4;
}

/// Shorthand for building a complex literal.
#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `i^k` computed exactly, without going through trigonometric functions.
#[inline]
pub fn i_pow<T: Real>(k: i64) -> C<T> {
    match k.rem_euclid(4) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

pub(crate) fn is_finite<T: Real>(z: &C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
