//! Standard normal density and tails, via `erf`/`erfc`.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// `1 / sqrt(2 pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * libm::exp(-0.5 * x * x)
}

/// Upper tail `Q(x) = P(N(0,1) > x)`.
///
/// Accurate in the far tail (down to the smallest subnormal) because it goes
/// through `erfc` instead of `1 - cdf`.
pub fn gaussian_tail_q(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

pub fn std_normal_cdf(x: f64) -> f64 {
    gaussian_tail_q(-x)
}

/// `P(|N(0,1)| < c)` for `c >= 0`, without cancellation for small `c`.
pub fn central_mass(c: f64) -> f64 {
    libm::erf(c * FRAC_1_SQRT_2)
}

/// `ln(2 pi e sigma^2)`, twice the entropy of `N(0, sigma^2)`.
pub fn ln_two_pi_e_var(sigma: f64) -> f64 {
    libm::log(2.0 * PI * core::f64::consts::E) + 2.0 * libm::log(sigma)
}
