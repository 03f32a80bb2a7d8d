//! The truncated Gaussian family `p_sigma` on `(-a, a)` and the closed-form
//! pieces of its entropy: the normalizer `K`, the tail terms `eta` and `Phi`,
//! and the lower-bound ratio `F`.
//!
//! Throughout, `alpha_z` is the minimum atom spacing of a discrete sum and the
//! half-width is `a = alpha_z / 4`, so the standardized truncation point is
//! `c = alpha_z / (4 sigma) = a / sigma`.

use alloc::vec::Vec;

use crate::density::BoundedDensity;
use crate::quadrature::{Estimate, QuadratureConfig};
use crate::special::{central_mass, gaussian_tail_q, ln_two_pi_e_var, std_normal_pdf, INV_SQRT_2PI};
use crate::{Error, Interval, Result};

/// `N(0, sigma^2)` conditioned on `(-half_width, half_width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "SpecParams", into = "SpecParams"))]
pub struct TruncatedGaussianSpec {
    sigma: f64,
    half_width: f64,
    normalizer: f64,
    ln_normalizer: f64,
    normalizer_minus_one: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct SpecParams {
    sigma: f64,
    half_width: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<SpecParams> for TruncatedGaussianSpec {
    type Error = Error;

    fn try_from(p: SpecParams) -> Result<Self> {
        TruncatedGaussianSpec::new(p.sigma, p.half_width)
    }
}

#[cfg(feature = "serde")]
impl From<TruncatedGaussianSpec> for SpecParams {
    fn from(s: TruncatedGaussianSpec) -> Self {
        SpecParams {
            sigma: s.sigma,
            half_width: s.half_width,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

impl TruncatedGaussianSpec {
    pub fn new(sigma: f64, half_width: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        positive("half_width", half_width)?;
        let c = half_width / sigma;
        // Tail mass outside the window, and the kept mass, each without cancellation.
        let outside = 2.0 * gaussian_tail_q(c);
        let inside = central_mass(c);
        let ln_normalizer = if outside < 0.5 {
            -libm::log1p(-outside)
        } else {
            -libm::log(inside)
        };
        Ok(TruncatedGaussianSpec {
            sigma,
            half_width,
            normalizer: 1.0 / inside,
            ln_normalizer,
            normalizer_minus_one: outside / inside,
        })
    }

    /// Half-width `alpha_z / 4`.
    pub fn for_spacing(sigma: f64, alpha_z: f64) -> Result<Self> {
        positive("alpha_z", alpha_z)?;
        TruncatedGaussianSpec::new(sigma, alpha_z / 4.0)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `K(sigma) >= 1`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn ln_normalizer(&self) -> f64 {
        self.ln_normalizer
    }

    /// `K(sigma) - 1`, accurate when it is tiny.
    pub fn normalizer_minus_one(&self) -> f64 {
        self.normalizer_minus_one
    }

    /// Standardized truncation point `half_width / sigma`.
    pub fn cutoff(&self) -> f64 {
        self.half_width / self.sigma
    }

    pub fn density(&self) -> BoundedDensity {
        let support = Interval::symmetric(self.half_width).expect("validated half-width");
        let scale = self.normalizer * INV_SQRT_2PI / self.sigma;
        let inv_var = 1.0 / (self.sigma * self.sigma);
        BoundedDensity::new(
            support,
            move |x| scale * libm::exp(-0.5 * x * x * inv_var),
            Vec::new(),
        )
    }

    /// `E[W^2]` of one truncated variable by quadrature.
    ///
    /// Integrates `(x / sigma)^2` and rescales, so `q.abs_tol` acts as a
    /// relative tolerance.
    pub fn second_moment(&self, q: &QuadratureConfig) -> Result<Estimate> {
        let s = self.sigma;
        let est = self.density().expect(|x| (x / s) * (x / s), q)?;
        Ok(Estimate {
            value: est.value * s * s,
            error: est.error * s * s,
        })
    }
}

pub fn truncated_gaussian(
    sigma: f64,
    half_width: f64,
) -> Result<(TruncatedGaussianSpec, BoundedDensity)> {
    let spec = TruncatedGaussianSpec::new(sigma, half_width)?;
    Ok((spec, spec.density()))
}

fn cutoff_for(sigma: f64, alpha_z: f64) -> f64 {
    alpha_z / (4.0 * sigma)
}

/// `eta(sigma) = ln(sqrt(2 pi) sigma) * Q(alpha_z / (4 sigma))`.
pub fn eta(sigma: f64, alpha_z: f64) -> f64 {
    let log_factor = libm::log(sigma / INV_SQRT_2PI);
    let tail = gaussian_tail_q(cutoff_for(sigma, alpha_z));
    if tail == 0.0 {
        0.0
    } else {
        log_factor * tail
    }
}

/// The envelope `|ln(sqrt(2 pi) sigma)| exp(-c^2 / 2)` that dominates `|eta|`.
pub fn eta_bound(sigma: f64, alpha_z: f64) -> f64 {
    let c = cutoff_for(sigma, alpha_z);
    libm::fabs(libm::log(sigma / INV_SQRT_2PI)) * libm::exp(-0.5 * c * c)
}

/// `integral_c^inf x^2 phi(x) dx = Q(c) + c phi(c)`.
pub fn second_moment_tail(c: f64) -> f64 {
    gaussian_tail_q(c) + c * std_normal_pdf(c)
}

/// `Phi(sigma)`, the second-moment tail at `c = alpha_z / (4 sigma)`.
pub fn phi_term(sigma: f64, alpha_z: f64) -> f64 {
    second_moment_tail(cutoff_for(sigma, alpha_z))
}

fn check_matching_width(spec: &TruncatedGaussianSpec, alpha_z: f64) -> Result<()> {
    positive("alpha_z", alpha_z)?;
    let expected = alpha_z / 4.0;
    if (spec.half_width - expected).abs() > 1e-12 * expected {
        return Err(Error::InvalidParameter {
            name: "alpha_z (half_width must equal alpha_z / 4)",
            value: alpha_z,
        });
    }
    Ok(())
}

/// Entropy of `p_sigma` from the expansion
/// `-ln K - K [ -1/2 ln(2 pi e sigma^2) + 2 eta + Phi ]`.
pub fn closed_form_entropy(spec: &TruncatedGaussianSpec, alpha_z: f64) -> Result<f64> {
    check_matching_width(spec, alpha_z)?;
    let sigma = spec.sigma;
    let bracket = -0.5 * ln_two_pi_e_var(sigma) + 2.0 * eta(sigma, alpha_z) + phi_term(sigma, alpha_z);
    Ok(-spec.ln_normalizer - spec.normalizer * bracket)
}

/// `2 K sigma^2`, an upper bound on `E[(W1 + W2)^2]`.
pub fn variance_upper_bound(spec: &TruncatedGaussianSpec) -> f64 {
    2.0 * spec.normalizer * spec.sigma * spec.sigma
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarianceCheck {
    pub bound: f64,
    /// `2 E[W^2]` by quadrature.
    pub second_moment_of_sum: f64,
    pub error: f64,
    pub holds: bool,
}

/// Compares [`variance_upper_bound`] with the quadrature value of `E[(W1 + W2)^2]`.
pub fn variance_check(spec: &TruncatedGaussianSpec, q: &QuadratureConfig) -> Result<VarianceCheck> {
    let bound = variance_upper_bound(spec);
    let m = spec.second_moment(q)?;
    let second_moment_of_sum = 2.0 * m.value;
    let error = 2.0 * m.error;
    Ok(VarianceCheck {
        bound,
        second_moment_of_sum,
        error,
        holds: second_moment_of_sum <= bound + error,
    })
}

/// `ln F(sigma)` where
/// `F = exp(ln(2 pi e sigma^2)(K - 1) - 2 ln K - 2 K (2 eta + Phi)) / K`.
pub fn ln_f_ratio(sigma: f64, alpha_z: f64) -> Result<f64> {
    let spec = TruncatedGaussianSpec::for_spacing(sigma, alpha_z)?;
    let k = spec.normalizer;
    let tails = 2.0 * eta(sigma, alpha_z) + phi_term(sigma, alpha_z);
    Ok(ln_two_pi_e_var(sigma) * spec.normalizer_minus_one - 3.0 * spec.ln_normalizer - 2.0 * k * tails)
}

/// `F(sigma)`; `F / 2` lower-bounds the entropy-power ratio of the truncated
/// Gaussian and tends to one as `sigma` shrinks.
pub fn f_ratio(sigma: f64, alpha_z: f64) -> Result<f64> {
    ln_f_ratio(sigma, alpha_z).map(libm::exp)
}
