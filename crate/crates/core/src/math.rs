//! Float helpers that work with and without `std`.

use core::f64::consts::PI;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Maps an angle into (-pi, pi].
pub(crate) fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = phi - two_pi * floor(phi / two_pi);
    // r in [0, 2pi)
    if r > PI {
        r -= two_pi;
    }
    if r <= -PI {
        r += two_pi;
    }
    r
}

/// `-p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * log2(x) } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Distance from `x` to the nearest natural number (0, 1, 2, ...).
pub(crate) fn distance_to_naturals(x: f64) -> f64 {
    if x <= 0.0 {
        return -x;
    }
    abs(x - round(x))
}
