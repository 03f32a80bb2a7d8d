//! Globally adaptive Gauss-Kronrod (7/15) integration on bounded intervals.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::pmf::stable_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureConfig {
    /// Target for the summed error estimate.
    pub abs_tol: f64,
    /// Bisections allowed before giving up.
    pub max_subdivisions: usize,
    /// Intervals in the output grid of [`crate::self_convolve`].
    pub convolution_grid_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            max_subdivisions: 1 << 20,
            convolution_grid_points: 8192,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: 0.0,
            });
        }
        if self.convolution_grid_points < 2 {
            return Err(Error::InvalidParameter {
                name: "convolution_grid_points",
                value: self.convolution_grid_points as f64,
            });
        }
        Ok(())
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadratureConfig { abs_tol, ..self }
    }

    pub fn with_grid_points(self, convolution_grid_points: usize) -> Self {
        QuadratureConfig {
            convolution_grid_points,
            ..self
        }
    }
}

/// An integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

// Kronrod abscissae on [0, 1); XGK[1], XGK[3], XGK[5] and 0 are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Roundoff floor of the error estimate.
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod estimate with the QUADPACK error heuristic.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let width = half.abs();
    let value = res_kronrod * half;
    res_abs *= width;
    res_asc *= width;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / res_asc, 1.5);
        error = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Segment {
        lo,
        hi,
        value,
        error,
        floor,
    }
}

/// Integrates `f` over `[lo, hi]`, splitting first at every breakpoint inside
/// the interval and then bisecting the worst segment until the summed error
/// estimate drops below `cfg.abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInterval { lo, hi });
    }

    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    cuts.sort_unstable_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::with_capacity(cuts.len() + 1);
    let mut left = lo;
    for &cut in cuts.iter().chain(core::iter::once(&hi)) {
        heap.push(gauss_kronrod_15(&f, left, cut));
        left = cut;
    }

    // Segments too narrow to bisect further; their error is still counted.
    let mut frozen: Vec<Segment> = Vec::new();
    let mut total_error: f64 = heap.iter().map(|s| s.error).sum();
    let mut subdivisions = 0usize;

    while total_error > cfg.abs_tol {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi)
            || worst.hi - worst.lo <= 8.0 * f64::EPSILON * worst.lo.abs().max(worst.hi.abs())
            || worst.error <= worst.floor
        {
            frozen.push(worst);
            continue;
        }
        if subdivisions >= cfg.max_subdivisions {
            heap.push(worst);
            break;
        }
        subdivisions += 1;
        let a = gauss_kronrod_15(&f, worst.lo, mid);
        let b = gauss_kronrod_15(&f, mid, worst.hi);
        total_error += a.error + b.error - worst.error;
        heap.push(a);
        heap.push(b);
        if total_error <= cfg.abs_tol {
            // running sum drifts; confirm before stopping
            total_error = heap.iter().chain(frozen.iter()).map(|s| s.error).sum();
        }
    }

    let segments = heap.into_iter().chain(frozen);
    let (values, errors): (Vec<f64>, Vec<f64>) = segments.map(|s| (s.value, s.error)).unzip();
    let value = stable_sum(values);
    let error = stable_sum(errors);
    if !(error <= cfg.abs_tol) || !value.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            subdivisions,
            error_estimate: error,
            abs_tol: cfg.abs_tol,
        });
    }
    Ok(Estimate { value, error })
}
