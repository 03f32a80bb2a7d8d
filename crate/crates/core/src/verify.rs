//! Checks of `N(X) + N(Y) <= 2 N(X + Y)` and of the chain of bounds behind it.

use alloc::vec::Vec;

use crate::density::{differential_entropy, self_convolve, BoundedDensity};
use crate::gaussian::{eta, f_ratio, phi_term, TruncatedGaussianSpec};
use crate::pmf::{
    convolve, discrete_entropy, discrete_entropy_power, min_spacing, Pmf, DEFAULT_MERGE_EPS,
};
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

/// Tolerance for checks built purely from pmf arithmetic.
pub const PMF_ASSERT_TOL: f64 = 1e-9;
/// Tolerance for checks that involve quadrature.
pub const QUADRATURE_ASSERT_TOL: f64 = 1e-6;
/// Allowed excess of an iid entropy-power ratio over one half.
pub const HALF_RATIO_TOL: f64 = 1e-4;

/// One evaluation of the doubled discrete inequality.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpiReport {
    #[cfg_attr(feature = "serde", serde(rename = "H_x"))]
    pub h_x: f64,
    #[cfg_attr(feature = "serde", serde(rename = "H_y"))]
    pub h_y: f64,
    #[cfg_attr(feature = "serde", serde(rename = "H_z"))]
    pub h_z: f64,
    #[cfg_attr(feature = "serde", serde(rename = "N_x"))]
    pub n_x: f64,
    #[cfg_attr(feature = "serde", serde(rename = "N_y"))]
    pub n_y: f64,
    #[cfg_attr(feature = "serde", serde(rename = "N_z"))]
    pub n_z: f64,
    /// `N_x + N_y`.
    pub lhs: f64,
    /// `2 N_z`.
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub holds: bool,
    pub seed: Option<u64>,
    pub x_atoms: usize,
    pub y_atoms: usize,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    pub assert_tol: f64,
    pub merge_eps: f64,
}

impl EpiReport {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Slack of the un-doubled form `N_x + N_y <= N_z`.
    pub fn naive_slack(&self) -> f64 {
        self.n_z - self.lhs
    }
}

/// Evaluates `N(X) + N(Y) <= 2 N(X + Y)` with `holds = slack >= -assert_tol`.
pub fn verify_theorem1(x: &Pmf, y: &Pmf, assert_tol: f64) -> EpiReport {
    let z = convolve(x, y, DEFAULT_MERGE_EPS);
    let (n_x, n_y, n_z) = (
        discrete_entropy_power(x),
        discrete_entropy_power(y),
        discrete_entropy_power(&z),
    );
    let lhs = n_x + n_y;
    let rhs = 2.0 * n_z;
    let slack = rhs - lhs;
    EpiReport {
        h_x: discrete_entropy(x),
        h_y: discrete_entropy(y),
        h_z: discrete_entropy(&z),
        n_x,
        n_y,
        n_z,
        lhs,
        rhs,
        slack,
        holds: slack >= -assert_tol,
        seed: None,
        x_atoms: x.len(),
        y_atoms: y.len(),
        tolerances: Tolerances {
            assert_tol,
            merge_eps: DEFAULT_MERGE_EPS,
        },
    }
}

/// The discrete analogue of the continuous inequality without the factor 2.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NaiveEpiRecord {
    pub n_x: f64,
    pub n_y: f64,
    pub n_z: f64,
    /// `N_x + N_y`.
    pub lhs: f64,
    /// `N_z`.
    pub rhs: f64,
    /// `lhs > rhs`.
    pub violated: bool,
}

pub fn naive_epi_check(x: &Pmf, y: &Pmf) -> NaiveEpiRecord {
    let z = convolve(x, y, DEFAULT_MERGE_EPS);
    let n_x = discrete_entropy_power(x);
    let n_y = discrete_entropy_power(y);
    let n_z = discrete_entropy_power(&z);
    NaiveEpiRecord {
        n_x,
        n_y,
        n_z,
        lhs: n_x + n_y,
        rhs: n_z,
        violated: n_x + n_y > n_z,
    }
}

/// Two point masses: `N(X) + N(Y) = 2 / (2 pi e)` while `N(X + Y) = 1 / (2 pi e)`.
pub fn naive_epi_counterexample() -> NaiveEpiRecord {
    naive_epi_check(&Pmf::singleton(0.0), &Pmf::singleton(0.0))
}

/// `exp(2 h(W1)) / exp(2 h(W1 + W2))` for iid `W1, W2 ~ kernel`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IidRatio {
    pub ratio: f64,
    pub h_single: f64,
    pub h_sum: f64,
    pub error_estimate: f64,
}

pub fn iid_entropy_ratio(kernel: &BoundedDensity, q: &QuadratureConfig) -> Result<IidRatio> {
    let h1 = differential_entropy(kernel, q)?;
    let h2 = differential_entropy(&self_convolve(kernel, q)?, q)?;
    Ok(IidRatio {
        ratio: libm::exp(2.0 * (h1.value - h2.value)),
        h_single: h1.value,
        h_sum: h2.value,
        error_estimate: h1.error + h2.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma3Chain {
    /// `N(X + Y) / (N(X) + N(Y))`.
    pub ratio_lhs: f64,
    /// `exp(2 h(W1)) / exp(2 h(W1 + W2))` for the truncated Gaussian kernel.
    pub ratio_rhs: f64,
    pub alpha_z: f64,
    pub holds: bool,
}

/// Checks `N(X + Y) / (N(X) + N(Y)) >= exp(2 h(W1)) / exp(2 h(W1 + W2))`
/// for iid truncated Gaussian perturbations of half-width at most `alpha_z / 4`.
pub fn lemma3_chain(
    x: &Pmf,
    y: &Pmf,
    spec: &TruncatedGaussianSpec,
    q: &QuadratureConfig,
) -> Result<Lemma3Chain> {
    let z = convolve(x, y, DEFAULT_MERGE_EPS);
    let alpha_z = min_spacing(&z).value();
    if spec.half_width() > alpha_z / 4.0 * (1.0 + 1e-12) {
        return Err(Error::Overlap {
            half_width: 2.0 * spec.half_width(),
            spacing: alpha_z,
        });
    }
    let ratio_lhs =
        discrete_entropy_power(&z) / (discrete_entropy_power(x) + discrete_entropy_power(y));
    let ratio_rhs = iid_entropy_ratio(&spec.density(), q)?.ratio;
    Ok(Lemma3Chain {
        ratio_lhs,
        ratio_rhs,
        alpha_z,
        holds: ratio_lhs >= ratio_rhs - QUADRATURE_ASSERT_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma4Upper {
    pub ratio: f64,
    pub bound_half: f64,
    pub holds: bool,
}

/// Checks the iid ratio of `kernel` against `1/2 + 1e-4`.
pub fn iid_ratio_upper_check(kernel: &BoundedDensity, q: &QuadratureConfig) -> Result<Lemma4Upper> {
    let ratio = iid_entropy_ratio(kernel, q)?.ratio;
    Ok(Lemma4Upper {
        ratio,
        bound_half: 0.5,
        holds: ratio <= 0.5 + HALF_RATIO_TOL,
    })
}

/// [`iid_ratio_upper_check`] for a truncated Gaussian.
pub fn lemma4_upper_check(spec: &TruncatedGaussianSpec, q: &QuadratureConfig) -> Result<Lemma4Upper> {
    iid_ratio_upper_check(&spec.density(), q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LowerBoundChain {
    /// `F(sigma) / 2` from closed forms.
    pub half_f: f64,
    /// Quadrature value of `exp(2 h(W1)) / exp(2 h(W1 + W2))`.
    pub ratio_rhs: f64,
    pub holds: bool,
}

/// Checks that `F(sigma) / 2` sits below the quadrature iid ratio.
pub fn lower_bound_chain(
    spec: &TruncatedGaussianSpec,
    alpha_z: f64,
    q: &QuadratureConfig,
) -> Result<LowerBoundChain> {
    let expected = alpha_z / 4.0;
    if !(alpha_z > 0.0) || (spec.half_width() - expected).abs() > 1e-12 * expected {
        return Err(Error::InvalidParameter {
            name: "alpha_z (half_width must equal alpha_z / 4)",
            value: alpha_z,
        });
    }
    let half_f = 0.5 * f_ratio(spec.sigma(), alpha_z)?;
    let ratio_rhs = iid_entropy_ratio(&spec.density(), q)?.ratio;
    Ok(LowerBoundChain {
        half_f,
        ratio_rhs,
        holds: ratio_rhs >= half_f - QUADRATURE_ASSERT_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub sigma: f64,
    #[cfg_attr(feature = "serde", serde(rename = "K"))]
    pub k: f64,
    pub eta: f64,
    #[cfg_attr(feature = "serde", serde(rename = "Phi"))]
    pub phi: f64,
    #[cfg_attr(feature = "serde", serde(rename = "F"))]
    pub f: f64,
}

/// Rows of a downward sigma sweep, largest sigma first.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SigmaSweep {
    pub alpha_z: f64,
    pub epsilon: f64,
    pub rows: Vec<SweepRow>,
    /// First (largest) swept sigma with `F >= 1 - epsilon`.
    pub sigma0: f64,
}

impl SigmaSweep {
    pub fn final_f(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.f)
    }
}

pub const SWEEP_RATIO: f64 = 0.8;
pub const SWEEP_MAX_STEPS: usize = 200;

pub fn sweep_row(sigma: f64, alpha_z: f64) -> Result<SweepRow> {
    let spec = TruncatedGaussianSpec::for_spacing(sigma, alpha_z)?;
    Ok(SweepRow {
        sigma,
        k: spec.normalizer(),
        eta: eta(sigma, alpha_z),
        phi: phi_term(sigma, alpha_z),
        f: f_ratio(sigma, alpha_z)?,
    })
}

/// Shrinks sigma geometrically from `alpha_z / 4` until `F(sigma) >= 1 - epsilon`.
pub fn sigma_search(alpha_z: f64, epsilon: f64) -> Result<SigmaSweep> {
    if !(alpha_z > 0.0) || !alpha_z.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha_z",
            value: alpha_z,
        });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    let mut rows = Vec::new();
    let mut sigma = alpha_z / 4.0;
    for _ in 0..SWEEP_MAX_STEPS {
        let row = sweep_row(sigma, alpha_z)?;
        rows.push(row);
        if row.f >= 1.0 - epsilon {
            return Ok(SigmaSweep {
                alpha_z,
                epsilon,
                rows,
                sigma0: sigma,
            });
        }
        sigma *= SWEEP_RATIO;
    }
    let last = rows.last().copied().expect("at least one step");
    Err(Error::SweepExhausted {
        steps: SWEEP_MAX_STEPS,
        last_sigma: last.sigma,
        last_f: last.f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{new_pmf, INV_TWO_PI_E};

    fn coin() -> Pmf {
        Pmf::equiprobable(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn doubled_inequality_examples() {
        let r = verify_theorem1(&coin(), &coin(), PMF_ASSERT_TOL);
        assert!(r.holds);
        assert!((r.lhs - 8.0 * INV_TWO_PI_E).abs() < 1e-15);
        assert!((r.rhs - 16.0 * INV_TWO_PI_E).abs() < 1e-15);

        let r = verify_theorem1(&Pmf::singleton(1.0), &Pmf::singleton(2.0), PMF_ASSERT_TOL);
        assert_eq!(r.lhs, 2.0 * INV_TWO_PI_E);
        assert_eq!(r.slack, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn holds_tracks_tolerance() {
        let r = verify_theorem1(&coin(), &coin(), 0.0);
        assert_eq!(r.holds, r.slack >= 0.0);
    }

    #[test]
    fn naive_form() {
        let r = naive_epi_counterexample();
        assert_eq!(r.lhs, 2.0 * INV_TWO_PI_E);
        assert_eq!(r.rhs, INV_TWO_PI_E);
        assert!(r.violated);

        let d = 1e-6;
        let x = new_pmf(&[(0.0, 1.0 - d), (1.0, d)], 0.0).unwrap();
        assert!(naive_epi_check(&x, &x).violated);

        let r = naive_epi_check(&coin(), &coin());
        assert!((r.lhs - r.rhs).abs() < 1e-15);
    }

    #[test]
    fn sweep_stops_at_first_hit() {
        let s = sigma_search(1.0, 0.01).unwrap();
        assert!(s.final_f() >= 0.99);
        assert_eq!(s.sigma0, s.rows.last().unwrap().sigma);
        assert!(s.sigma0 >= 0.01);
        assert!(s.rows.windows(2).all(|w| w[0].sigma > w[1].sigma));
        assert!(s.rows[..s.rows.len() - 1].iter().all(|r| r.f < 0.99));
        assert!(sigma_search(1.0, 1.0).is_err());
        assert!(sigma_search(-1.0, 0.1).is_err());
    }

    #[test]
    fn sweep_scales_with_alpha() {
        let a = sigma_search(1.0, 0.1).unwrap();
        let b = sigma_search(2.0, 0.1).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!((2.0 * ra.sigma - rb.sigma).abs() <= 1e-15 * rb.sigma);
            assert!((ra.k - rb.k).abs() <= 1e-14 * ra.k);
            assert!((ra.phi - rb.phi).abs() <= 1e-14);
        }
    }

    #[test]
    fn chain_requires_quarter_spacing() {
        let q = QuadratureConfig::default().with_grid_points(512);
        let spec = TruncatedGaussianSpec::new(0.01, 0.3).unwrap();
        assert!(matches!(
            lemma3_chain(&coin(), &coin(), &spec, &q),
            Err(Error::Overlap { .. })
        ));
    }
}
