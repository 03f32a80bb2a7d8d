//! Densities with bounded support and their differential entropy.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::quadrature::{integrate, Estimate, QuadratureConfig};
use crate::{Error, Result, INV_TWO_PI_E};

/// Largest mass correction a grid convolution may apply before it is
/// considered under-resolved.
pub const MAX_CONVOLUTION_CORRECTION: f64 = 1e-6;

/// A finite interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    /// `(-half_width, half_width)`.
    pub fn symmetric(half_width: f64) -> Result<Interval> {
        Interval::new(-half_width, half_width)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_symmetric(&self) -> bool {
        (self.lo + self.hi).abs() <= 1e-12 * self.width()
    }
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A probability density vanishing outside a finite interval.
///
/// The evaluator is shared behind an `Arc` and must be reentrant; clones are
/// cheap and can be sent across threads.
#[derive(Clone)]
pub struct BoundedDensity {
    support: Interval,
    eval: Evaluator,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for BoundedDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedDensity")
            .field("support", &self.support)
            .field("breakpoints", &self.breakpoints.len())
            .finish()
    }
}

impl BoundedDensity {
    /// Wraps `f`, which only needs to be correct on `support`.
    ///
    /// `breakpoints` lists points where `f` may be non-smooth; the support
    /// endpoints are implicit.
    pub fn new<F>(support: Interval, f: F, mut breakpoints: Vec<f64>) -> BoundedDensity
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        breakpoints.retain(|&b| b > support.lo && b < support.hi);
        breakpoints.sort_unstable_by(f64::total_cmp);
        breakpoints.dedup();
        BoundedDensity {
            support,
            eval: Arc::new(f),
            breakpoints,
        }
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<BoundedDensity> {
        let support = Interval::new(lo, hi)?;
        let height = 1.0 / support.width();
        Ok(BoundedDensity::new(support, move |_| height, Vec::new()))
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        if self.support.contains(x) {
            (self.eval)(x).max(0.0)
        } else {
            0.0
        }
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn smoothness_hints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Integrates `g(x) * p(x)` over the support.
    pub fn expect<G>(&self, g: G, q: &QuadratureConfig) -> Result<Estimate>
    where
        G: Fn(f64) -> f64,
    {
        integrate(
            |x| g(x) * self.evaluate(x),
            self.support.lo,
            self.support.hi,
            &self.breakpoints,
            q,
        )
    }

    pub fn mass(&self, q: &QuadratureConfig) -> Result<Estimate> {
        self.expect(|_| 1.0, q)
    }

    pub fn second_moment(&self, q: &QuadratureConfig) -> Result<Estimate> {
        self.expect(|x| x * x, q)
    }
}

/// `-integral p ln p` by adaptive quadrature, with `0 ln 0 = 0`.
pub fn differential_entropy(d: &BoundedDensity, q: &QuadratureConfig) -> Result<Estimate> {
    integrate(
        |x| {
            let p = d.evaluate(x);
            if p > 0.0 {
                -p * libm::log(p)
            } else {
                0.0
            }
        },
        d.support.lo,
        d.support.hi,
        &d.breakpoints,
        q,
    )
}

/// `exp(2 h) / (2 pi e)`.
pub fn continuous_entropy_power(h: f64) -> f64 {
    INV_TWO_PI_E * libm::exp(2.0 * h)
}

/// Output of [`self_convolve_detailed`].
#[derive(Debug, Clone)]
pub struct GridConvolution {
    pub density: BoundedDensity,
    /// `|mass - 1|` of the raw trapezoidal result before renormalizing.
    pub mass_correction: f64,
}

/// Density of `W1 + W2` for two iid copies drawn from `d`.
///
/// See [`self_convolve_detailed`].
pub fn self_convolve(d: &BoundedDensity, q: &QuadratureConfig) -> Result<BoundedDensity> {
    self_convolve_detailed(d, q).map(|c| c.density)
}

/// Grid self-convolution.
///
/// The result lives on `[2 lo, 2 hi]`, sampled at `n + 1` equally spaced nodes
/// where `n` is `convolution_grid_points` rounded up to even, so that the input
/// is sampled on the same step. Each node value is a trapezoidal sum and the
/// nodes are renormalized to unit trapezoidal mass. Between nodes the density
/// is a four-point Lagrange cubic whose stencil avoids the possible kinks of
/// the sum density; cells with no such stencil fall back to linear.
pub fn self_convolve_detailed(
    d: &BoundedDensity,
    q: &QuadratureConfig,
) -> Result<GridConvolution> {
    q.validate()?;
    let support = d.support;
    let half_n = q.convolution_grid_points.div_ceil(2);
    let n = 2 * half_n;
    let step = support.width() / half_n as f64;

    // Sample on the closed support; a density that is non-zero at its
    // endpoints keeps that value there.
    let samples: Vec<f64> = (0..=half_n)
        .map(|j| {
            let x = if j == half_n {
                support.hi
            } else {
                support.lo + j as f64 * step
            };
            (d.eval)(x).max(0.0)
        })
        .collect();

    let mut nodes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let first = k.saturating_sub(half_n);
        let last = k.min(half_n);
        if first == last {
            nodes.push(0.0);
            continue;
        }
        let mut acc = 0.5 * (samples[first] * samples[k - first] + samples[last] * samples[k - last]);
        for j in first + 1..last {
            acc += samples[j] * samples[k - j];
        }
        nodes.push(acc * step);
    }

    let interior: f64 = nodes[1..n].iter().sum();
    let mass = step * (interior + 0.5 * (nodes[0] + nodes[n]));
    let mass_correction = (mass - 1.0).abs();
    if !(mass_correction <= MAX_CONVOLUTION_CORRECTION) {
        return Err(Error::UnderResolvedConvolution {
            correction: mass_correction,
        });
    }
    for v in &mut nodes {
        *v /= mass;
    }

    let out = Interval::new(2.0 * support.lo, 2.0 * support.hi)?;
    let lo = out.lo;

    // The sum density can only be non-smooth at sums of two input
    // non-smooth points (support ends included); snap those to nodes.
    let mut rough: Vec<f64> = Vec::with_capacity(d.breakpoints.len() + 2);
    rough.push(support.lo);
    rough.extend_from_slice(&d.breakpoints);
    rough.push(support.hi);
    let mut kink = alloc::vec![false; n + 1];
    for (i, a) in rough.iter().enumerate() {
        for b in &rough[i..] {
            let k = libm::round((a + b - lo) / step);
            if k >= 0.0 && k <= n as f64 {
                kink[k as usize] = true;
            }
        }
    }
    let stencils: Vec<Stencil> = (0..n).map(|k| choose_stencil(k, n, &kink)).collect();

    let breakpoints: Vec<f64> = (1..n).map(|k| lo + k as f64 * step).collect();
    let nodes: Arc<[f64]> = nodes.into();
    let stencils: Arc<[Stencil]> = stencils.into();
    let eval = move |x: f64| {
        let t = (x - lo) / step;
        if !(t >= 0.0) {
            return 0.0;
        }
        let k = libm::floor(t) as usize;
        if k >= n {
            return nodes[n];
        }
        match stencils[k] {
            Stencil::Cubic(first) => {
                let u = t - first as f64;
                let v = &nodes[first..first + 4];
                let (u1, u2, u3) = (u - 1.0, u - 2.0, u - 3.0);
                -v[0] * u1 * u2 * u3 / 6.0 + v[1] * u * u2 * u3 / 2.0
                    - v[2] * u * u1 * u3 / 2.0
                    + v[3] * u * u1 * u2 / 6.0
            }
            Stencil::Linear => {
                let frac = t - k as f64;
                nodes[k] + frac * (nodes[k + 1] - nodes[k])
            }
        }
    };
    Ok(GridConvolution {
        density: BoundedDensity::new(out, eval, breakpoints),
        mass_correction,
    })
}

/// Interpolation rule on grid cell `[k, k + 1]`.
#[derive(Debug, Clone, Copy)]
enum Stencil {
    /// Four-point Lagrange cubic through nodes `first..first + 4`.
    Cubic(usize),
    Linear,
}

/// Prefers a centred four-node stencil, then one-sided ones, rejecting any
/// stencil with a kink strictly inside it.
fn choose_stencil(k: usize, n: usize, kink: &[bool]) -> Stencil {
    let candidates = [k.checked_sub(1), Some(k), k.checked_sub(2)];
    for first in candidates.into_iter().flatten() {
        if first + 3 > n {
            continue;
        }
        if !kink[first + 1..first + 3].iter().any(|&b| b) {
            return Stencil::Cubic(first);
        }
    }
    Stencil::Linear
}
