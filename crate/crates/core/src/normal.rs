//! Standard normal cumulative function and interval masses.
//!
//! Backed by `libm`'s erf/erfc. Interval masses are formed from erfc when the
//! interval sits in one tail so that far-tail boxes keep relative accuracy
//! instead of cancelling to zero.

use std::f64::consts::FRAC_1_SQRT_2;

/// `Phi(x)` for the standard normal distribution.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `Phi(hi) - Phi(lo)` for `lo <= hi`, accurate in both tails.
pub fn interval_probability(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    let (l, h) = (lo * FRAC_1_SQRT_2, hi * FRAC_1_SQRT_2);
    let p = if l >= 0.0 {
        0.5 * (libm::erfc(l) - libm::erfc(h))
    } else if h <= 0.0 {
        0.5 * (libm::erfc(-h) - libm::erfc(-l))
    } else {
        0.5 * (libm::erf(h) - libm::erf(l))
    };
    p.clamp(0.0, 1.0)
}

/// Standard normal density.
pub fn standard_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
