//! Seeded batteries for each step of the proof chain.

use epi_core::density::{differential_entropy, BoundedDensity};
use epi_core::gaussian::{closed_form_entropy, f_ratio, variance_check, VarianceCheck};
use epi_core::perturbation::check_lemma1;
use epi_core::pmf::{min_spacing, spacing_bound_holds, DEFAULT_MERGE_EPS};
use epi_core::quadrature::QuadratureConfig;
use epi_core::special::gaussian_tail_q;
use epi_core::verify::{
    iid_entropy_ratio, lemma3_chain, lower_bound_chain, sigma_search, Lemma3Chain,
    QUADRATURE_ASSERT_TOL, HALF_RATIO_TOL,
};
use epi_core::{convolve, Pmf, TruncatedGaussianSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generate::{random_pmf, Placement};

pub const LEMMA1_GAP_TOL: f64 = 1e-6;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const F_UPPER_TOL: f64 = 1e-6;
/// Spacing used for pairs whose sum is a single atom.
pub const SINGLETON_ALPHA: f64 = 1.0;

/// Half-width `alpha_z / 4` of the reference grid, with `alpha_z = 1`.
pub const GRID_HALF_WIDTH: f64 = 0.25;
/// Multiples of the half-width at which the truncated Gaussian is probed.
pub const SIGMA_GRID: [f64; 5] = [1.0 / 30.0, 0.1, 1.0 / 3.0, 1.0, 3.0];

fn random_placement<R: Rng>(rng: &mut R) -> Placement {
    if rng.random::<bool>() {
        Placement::IntegerGrid
    } else {
        Placement::RandomReal
    }
}

fn draw_pmf<R: Rng>(rng: &mut R, max_support: usize, placement: Placement) -> Result<Pmf> {
    let k = rng.random_range(1..=max_support);
    random_pmf(rng, k, placement)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Uniform,
    TruncatedGaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Case {
    pub index: usize,
    pub kernel: KernelKind,
    pub atoms: usize,
    pub spacing: f64,
    pub half_width: f64,
    /// Gaussian scale; absent for uniform kernels.
    pub sigma: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub error_estimate: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Battery {
    pub seed: u64,
    pub max_abs_gap: f64,
    pub failures: usize,
    pub cases: Vec<Lemma1Case>,
}

struct Lemma1Draw {
    base: Pmf,
    kernel: KernelKind,
    half_width: f64,
    sigma: Option<f64>,
}

/// `cases` mixtures `M + T`; even cases use a uniform kernel, odd cases a
/// truncated Gaussian. The half-width is a random fraction of `alpha_m / 2`.
pub fn lemma1_battery(cases: usize, seed: u64, q: &QuadratureConfig) -> Result<Lemma1Battery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(cases);
    for i in 0..cases {
        let placement = random_placement(&mut rng);
        let base = draw_pmf(&mut rng, 6, placement)?;
        let spacing = min_spacing(&base).value().min(2.0 * SINGLETON_ALPHA);
        let half_width = rng.random_range(0.05..0.95) * spacing / 2.0;
        let (kernel, sigma) = if i % 2 == 0 {
            (KernelKind::Uniform, None)
        } else {
            let r: f64 = rng.random_range(0.1..2.0);
            (KernelKind::TruncatedGaussian, Some(half_width * r))
        };
        draws.push(Lemma1Draw {
            base,
            kernel,
            half_width,
            sigma,
        });
    }

    let cases: Vec<Lemma1Case> = draws
        .par_iter()
        .enumerate()
        .map(|(index, d)| {
            let density = match d.sigma {
                None => BoundedDensity::uniform(-d.half_width, d.half_width)?,
                Some(s) => TruncatedGaussianSpec::new(s, d.half_width)?.density(),
            };
            let c = check_lemma1(&d.base, &density, q)?;
            Ok(Lemma1Case {
                index,
                kernel: d.kernel,
                atoms: d.base.len(),
                spacing: min_spacing(&d.base).value(),
                half_width: d.half_width,
                sigma: d.sigma,
                lhs: c.lhs,
                rhs: c.rhs,
                gap: c.gap,
                error_estimate: c.error_estimate,
                holds: c.gap.abs() <= LEMMA1_GAP_TOL,
            })
        })
        .collect::<Result<_>>()?;

    Ok(Lemma1Battery {
        seed,
        max_abs_gap: cases.iter().map(|c| c.gap.abs()).fold(0.0, f64::max),
        failures: cases.iter().filter(|c| !c.holds).count(),
        cases,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Battery {
    pub seed: u64,
    pub pairs: usize,
    pub violations: usize,
    /// Largest `alpha_z - min(alpha_x, alpha_y)` over pairs with a finite bound.
    pub max_excess: f64,
}

/// `alpha_z <= min(alpha_x, alpha_y)` on `pairs` random pairs.
pub fn lemma2_battery(pairs: usize, seed: u64) -> Result<Lemma2Battery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for _ in 0..pairs {
        let placement = random_placement(&mut rng);
        let x = draw_pmf(&mut rng, 8, placement)?;
        let y = draw_pmf(&mut rng, 8, placement)?;
        let c = spacing_bound_holds(&x, &y, DEFAULT_MERGE_EPS);
        if !c.holds {
            violations += 1;
        }
        let bound = c.alpha_x.min(c.alpha_y);
        if !bound.is_infinite() {
            max_excess = max_excess.max(c.alpha_z.value() - bound.value());
        }
    }
    Ok(Lemma2Battery {
        seed,
        pairs,
        violations,
        max_excess,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Case {
    pub index: usize,
    pub x_atoms: usize,
    pub y_atoms: usize,
    pub sigma: f64,
    pub chain: Lemma3Chain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Battery {
    pub seed: u64,
    pub min_margin: f64,
    pub failures: usize,
    pub cases: Vec<Lemma3Case>,
}

/// `N(X + Y) / (N(X) + N(Y))` against the truncated Gaussian ratio at
/// `sigma = alpha_z / 100`. Pairs whose sum is a single atom use
/// `alpha_z = 1`.
pub fn lemma3_battery(pairs: usize, seed: u64, q: &QuadratureConfig) -> Result<Lemma3Battery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let placement = random_placement(&mut rng);
        let x = draw_pmf(&mut rng, 6, placement)?;
        let y = draw_pmf(&mut rng, 6, placement)?;
        draws.push((x, y));
    }

    let cases: Vec<Lemma3Case> = draws
        .par_iter()
        .enumerate()
        .map(|(index, (x, y))| {
            let alpha = min_spacing(&convolve(x, y, DEFAULT_MERGE_EPS));
            let alpha_z = if alpha.is_infinite() {
                SINGLETON_ALPHA
            } else {
                alpha.value()
            };
            let sigma = alpha_z / 100.0;
            let spec = TruncatedGaussianSpec::for_spacing(sigma, alpha_z)?;
            let chain = lemma3_chain(x, y, &spec, q)?;
            Ok(Lemma3Case {
                index,
                x_atoms: x.len(),
                y_atoms: y.len(),
                sigma,
                chain,
            })
        })
        .collect::<Result<_>>()?;

    Ok(Lemma3Battery {
        seed,
        min_margin: cases
            .iter()
            .map(|c| c.chain.ratio_lhs - c.chain.ratio_rhs)
            .fold(f64::INFINITY, f64::min),
        failures: cases.iter().filter(|c| !c.chain.holds).count(),
        cases,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub sigma: f64,
    pub closed_form_entropy: f64,
    pub quadrature_entropy: f64,
    pub quadrature_error: f64,
    pub entropy_matches: bool,
    pub variance: VarianceCheck,
    #[serde(rename = "F")]
    pub f: f64,
    pub f_bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub points: usize,
    pub max_x: f64,
    /// Smallest `exp(-x^2 / 2) - Q(x)` over the grid.
    pub min_margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Report {
    pub alpha_z: f64,
    pub grid: Vec<GridPoint>,
    pub tail: TailCheck,
    pub sweep_epsilon: f64,
    pub sweep_sigma0: f64,
    pub sweep_final_f: f64,
    pub sweep_rows: usize,
    pub sweep_max_f: f64,
    pub holds: bool,
}

/// `Q(x) <= exp(-x^2 / 2)` on `points` log-spaced abscissae in `[1e-6, 40]`.
pub fn tail_bound_check(points: usize) -> TailCheck {
    let (lo, hi) = (1e-6f64.ln(), 40.0f64.ln());
    let step = (hi - lo) / (points.max(2) - 1) as f64;
    let min_margin = (0..points.max(2))
        .map(|i| {
            let x = if i + 1 == points.max(2) {
                40.0
            } else {
                (lo + step * i as f64).exp()
            };
            (-0.5 * x * x).exp() - gaussian_tail_q(x)
        })
        .fold(f64::INFINITY, f64::min);
    TailCheck {
        points: points.max(2),
        max_x: 40.0,
        min_margin,
        holds: min_margin >= 0.0,
    }
}

/// Closed-form entropy, variance bound and `F` on the reference sigma grid,
/// plus the tail bound and a sigma sweep.
pub fn lemma4_report(q: &QuadratureConfig, epsilon: f64) -> Result<Lemma4Report> {
    let alpha_z = 4.0 * GRID_HALF_WIDTH;
    let grid: Vec<GridPoint> = SIGMA_GRID
        .par_iter()
        .map(|&m| {
            let sigma = m * GRID_HALF_WIDTH;
            let spec = TruncatedGaussianSpec::for_spacing(sigma, alpha_z)?;
            let closed = closed_form_entropy(&spec, alpha_z)?;
            let quad = differential_entropy(&spec.density(), q)?;
            let f = f_ratio(sigma, alpha_z)?;
            Ok(GridPoint {
                sigma,
                closed_form_entropy: closed,
                quadrature_entropy: quad.value,
                quadrature_error: quad.error,
                entropy_matches: (closed - quad.value).abs() <= CLOSED_FORM_TOL + quad.error,
                variance: variance_check(&spec, q)?,
                f,
                f_bounded: f <= 1.0 + F_UPPER_TOL,
            })
        })
        .collect::<Result<_>>()?;

    let tail = tail_bound_check(400);
    let sweep = sigma_search(alpha_z, epsilon)?;
    let sweep_max_f = sweep.rows.iter().map(|r| r.f).fold(f64::NEG_INFINITY, f64::max);
    let holds = grid
        .iter()
        .all(|g| g.entropy_matches && g.variance.holds && g.f_bounded)
        && tail.holds
        && sweep_max_f <= 1.0 + F_UPPER_TOL
        && sweep.final_f() >= 1.0 - epsilon;
    Ok(Lemma4Report {
        alpha_z,
        grid,
        tail,
        sweep_epsilon: epsilon,
        sweep_sigma0: sweep.sigma0,
        sweep_final_f: sweep.final_f(),
        sweep_rows: sweep.rows.len(),
        sweep_max_f,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    /// Gaussian scale, or `None` for the uniform kernel.
    pub sigma: Option<f64>,
    pub ratio: f64,
    pub h_single: f64,
    pub h_sum: f64,
    /// `F / 2` when the kernel is a truncated Gaussian.
    pub half_f: Option<f64>,
    pub below_half: bool,
    pub above_half_f: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousEpiReport {
    pub alpha_z: f64,
    pub points: Vec<RatioPoint>,
    /// Triangle entropy `ln(2 w) + 1/2` for the sum of two uniforms on `[-w, w]`.
    pub triangle_closed_form: f64,
    pub triangle_gap: f64,
    pub holds: bool,
}

/// `exp(2 h(W1)) / exp(2 h(W1 + W2))` for iid truncated Gaussians on the
/// reference grid and for the uniform kernel on the same support.
pub fn continuous_epi_report(q: &QuadratureConfig) -> Result<ContinuousEpiReport> {
    let alpha_z = 4.0 * GRID_HALF_WIDTH;
    let mut points: Vec<RatioPoint> = SIGMA_GRID
        .par_iter()
        .map(|&m| {
            let sigma = m * GRID_HALF_WIDTH;
            let spec = TruncatedGaussianSpec::for_spacing(sigma, alpha_z)?;
            let r = iid_entropy_ratio(&spec.density(), q)?;
            let chain = lower_bound_chain(&spec, alpha_z, q)?;
            Ok(RatioPoint {
                sigma: Some(sigma),
                ratio: r.ratio,
                h_single: r.h_single,
                h_sum: r.h_sum,
                half_f: Some(chain.half_f),
                below_half: r.ratio <= 0.5 + HALF_RATIO_TOL,
                above_half_f: r.ratio >= chain.half_f - QUADRATURE_ASSERT_TOL,
            })
        })
        .collect::<Result<_>>()?;

    let w = GRID_HALF_WIDTH;
    let r = iid_entropy_ratio(&BoundedDensity::uniform(-w, w)?, q)?;
    let triangle_closed_form = (2.0 * w).ln() + 0.5;
    let triangle_gap = r.h_sum - triangle_closed_form;
    points.push(RatioPoint {
        sigma: None,
        ratio: r.ratio,
        h_single: r.h_single,
        h_sum: r.h_sum,
        half_f: None,
        below_half: r.ratio <= 0.5 + HALF_RATIO_TOL,
        above_half_f: true,
    });

    let holds = points.iter().all(|p| p.below_half && p.above_half_f)
        && triangle_gap.abs() <= QUADRATURE_ASSERT_TOL;
    Ok(ContinuousEpiReport {
        alpha_z,
        points,
        triangle_closed_form,
        triangle_gap,
        holds,
    })
}
