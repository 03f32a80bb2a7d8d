//! Numerical core for the discrete entropy power inequality
//! `N(X) + N(Y) <= 2 N(X + Y)`.
//!
//! The crate is `no_std` (it needs `alloc`) and splits into:
//!
//! - [`pmf`]: finite distributions on the real line, convolution, minimum
//!   spacing, discrete entropy and entropy power.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration over bounded intervals.
//! - [`density`]: bounded-support densities, differential entropy and grid
//!   self-convolution.
//! - [`gaussian`]: the truncated Gaussian family with its normalizer and the
//!   tail terms of its entropy expansion.
//! - [`perturbation`]: discrete variables smeared by small bounded noise.
//! - [`verify`]: the inequality itself and every step of its proof chain.
//!
//! All entropies are in nats.
#![no_std]
// `!(x < y)` rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod density;
mod error;
pub mod gaussian;
pub mod perturbation;
pub mod pmf;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use density::{
    continuous_entropy_power, differential_entropy, self_convolve, BoundedDensity, Interval,
};
pub use error::{Error, Result};
pub use gaussian::{
    closed_form_entropy, eta, f_ratio, phi_term, truncated_gaussian, variance_upper_bound,
    TruncatedGaussianSpec,
};
pub use perturbation::{check_lemma1, mixture, perturbed_pair_entropies, MixtureDensity};
pub use pmf::{
    convolve, discrete_entropy, discrete_entropy_power, min_spacing, new_pmf, spacing_bound_holds,
    Atom, Pmf, Spacing,
};
pub use quadrature::{Estimate, QuadratureConfig};
pub use special::gaussian_tail_q;
pub use verify::{
    lemma3_chain, lemma4_upper_check, lower_bound_chain, naive_epi_counterexample, sigma_search,
    verify_theorem1, EpiReport, SigmaSweep,
};

/// `1 / (2 pi e)`, the entropy power of a zero-entropy variable.
pub const INV_TWO_PI_E: f64 = 1.0 / (2.0 * core::f64::consts::PI * core::f64::consts::E);
