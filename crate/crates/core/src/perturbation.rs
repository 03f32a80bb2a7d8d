//! Discrete variables perturbed by small bounded continuous noise.
//!
//! When the noise `T` satisfies `|T| < alpha_m / 2`, the density of `M + T`
//! is a sum of disjoint shifted copies of the noise density, and
//! `h(M + T) = H(M) + h(T)`. This module builds that mixture and checks the
//! identity by quadrature.

use alloc::vec::Vec;

use crate::density::{differential_entropy, self_convolve, BoundedDensity, Interval};
use crate::pmf::{convolve, discrete_entropy, min_spacing, Pmf, DEFAULT_MERGE_EPS};
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

/// Slack allowed on top of the quadrature error estimates in [`check_lemma1`].
pub const LEMMA1_ABS_TOL: f64 = 1e-8;

/// Density of `M + T`.
#[derive(Debug, Clone)]
pub struct MixtureDensity {
    pub base: Pmf,
    pub kernel: BoundedDensity,
    pub assembled: BoundedDensity,
}

/// Half-width of a kernel centred at zero.
fn kernel_half_width(kernel: &BoundedDensity) -> Result<f64> {
    let support = kernel.support();
    if !support.is_symmetric() {
        return Err(Error::AsymmetricKernel {
            lo: support.lo(),
            hi: support.hi(),
        });
    }
    Ok(support.hi())
}

/// Builds the density `sum_i P(M = m_i) p_T(x - m_i)`.
///
/// Fails with [`Error::Overlap`] unless the kernel half-width is strictly
/// below half the minimum spacing of `base`.
pub fn mixture(base: &Pmf, kernel: &BoundedDensity) -> Result<MixtureDensity> {
    let width = kernel_half_width(kernel)?;
    let spacing = min_spacing(base).value();
    if !(2.0 * width < spacing) {
        return Err(Error::Overlap {
            half_width: width,
            spacing,
        });
    }

    let atoms: Vec<(f64, f64)> = base.pairs();
    let first = atoms[0].0;
    let last = atoms[atoms.len() - 1].0;
    let support = Interval::new(first - width, last + width)?;

    let mut hints = Vec::with_capacity(atoms.len() * (2 + kernel.smoothness_hints().len()));
    for &(m, _) in &atoms {
        hints.push(m - width);
        hints.push(m + width);
        hints.extend(kernel.smoothness_hints().iter().map(|h| m + h));
    }

    let k = kernel.clone();
    let eval = move |x: f64| {
        // Components are disjoint, so only the nearest atom can contribute.
        let idx = atoms.partition_point(|&(m, _)| m < x);
        let mut best = None;
        for i in [idx.wrapping_sub(1), idx] {
            if let Some(&(m, p)) = atoms.get(i) {
                if (x - m).abs() <= width {
                    best = Some((m, p));
                }
            }
        }
        match best {
            Some((m, p)) => p * k.evaluate(x - m),
            None => 0.0,
        }
    };

    Ok(MixtureDensity {
        base: base.clone(),
        kernel: kernel.clone(),
        assembled: BoundedDensity::new(support, eval, hints),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma1Check {
    /// `h(M + T)` by quadrature on the mixture.
    pub lhs: f64,
    /// `H(M) + h(T)`.
    pub rhs: f64,
    pub gap: f64,
    /// Summed quadrature error estimates of both sides.
    pub error_estimate: f64,
    pub holds: bool,
}

/// Compares `h(M + T)` with `H(M) + h(T)`.
pub fn check_lemma1(
    base: &Pmf,
    kernel: &BoundedDensity,
    q: &QuadratureConfig,
) -> Result<Lemma1Check> {
    let mix = mixture(base, kernel)?;
    let lhs = differential_entropy(&mix.assembled, q)?;
    let h_kernel = differential_entropy(kernel, q)?;
    let rhs = discrete_entropy(base) + h_kernel.value;
    let gap = lhs.value - rhs;
    let error_estimate = lhs.error + h_kernel.error;
    Ok(Lemma1Check {
        lhs: lhs.value,
        rhs,
        gap,
        error_estimate,
        holds: gap.abs() <= error_estimate + LEMMA1_ABS_TOL,
    })
}

/// Entropies of the perturbed pair, each via the Lemma 1 identity and via
/// direct quadrature on the mixture density.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PerturbedPairEntropies {
    /// `H(X) + h(W1)`.
    pub x_identity: f64,
    /// `h(X + W1)` by quadrature.
    pub x_quadrature: f64,
    pub y_identity: f64,
    pub y_quadrature: f64,
    /// `H(X + Y) + h(W1 + W2)`.
    pub sum_identity: f64,
    /// `h(X + Y + W1 + W2)` by quadrature.
    pub sum_quadrature: f64,
    /// `h(W1)`, shared by both single perturbations.
    pub h_kernel: f64,
    /// `h(W1 + W2)` from the grid self-convolution.
    pub h_kernel_sum: f64,
    pub error_estimate: f64,
}

impl PerturbedPairEntropies {
    /// Largest disagreement between the two routes.
    pub fn max_route_gap(&self) -> f64 {
        (self.x_identity - self.x_quadrature)
            .abs()
            .max((self.y_identity - self.y_quadrature).abs())
            .max((self.sum_identity - self.sum_quadrature).abs())
    }
}

/// Perturbs `X` and `Y` by iid copies of `kernel`.
///
/// Requires the kernel half-width to be strictly below `alpha_z / 4`, where
/// `alpha_z` is the minimum spacing of `X + Y`; then `|W1 + W2| < alpha_z / 2`
/// and all three mixtures are non-overlapping.
pub fn perturbed_pair_entropies(
    x: &Pmf,
    y: &Pmf,
    kernel: &BoundedDensity,
    q: &QuadratureConfig,
) -> Result<PerturbedPairEntropies> {
    let width = kernel_half_width(kernel)?;
    let z = convolve(x, y, DEFAULT_MERGE_EPS);
    let alpha_z = min_spacing(&z).value();
    if !(4.0 * width < alpha_z) {
        return Err(Error::Overlap {
            half_width: 2.0 * width,
            spacing: alpha_z,
        });
    }

    let h_w = differential_entropy(kernel, q)?;
    let sum_kernel = self_convolve(kernel, q)?;
    let h_ww = differential_entropy(&sum_kernel, q)?;

    let hx = differential_entropy(&mixture(x, kernel)?.assembled, q)?;
    let hy = differential_entropy(&mixture(y, kernel)?.assembled, q)?;
    let hz = differential_entropy(&mixture(&z, &sum_kernel)?.assembled, q)?;

    Ok(PerturbedPairEntropies {
        x_identity: discrete_entropy(x) + h_w.value,
        x_quadrature: hx.value,
        y_identity: discrete_entropy(y) + h_w.value,
        y_quadrature: hy.value,
        sum_identity: discrete_entropy(&z) + h_ww.value,
        sum_quadrature: hz.value,
        h_kernel: h_w.value,
        h_kernel_sum: h_ww.value,
        error_estimate: h_w.error + h_ww.error + hx.error + hy.error + hz.error,
    })
}
