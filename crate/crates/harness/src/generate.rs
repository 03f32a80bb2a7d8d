//! Seeded distribution generators.

use std::path::PathBuf;

use epi_core::pmf::DEFAULT_MERGE_EPS;
use epi_core::{new_pmf, Pmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::format::read_pmf;

/// Where random atoms are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `0, 1, ..., k - 1`.
    IntegerGrid,
    /// Uniform reals in `[0, 10]`, redrawn until all gaps exceed `1e-3`.
    RandomReal,
}

pub const REAL_RANGE: f64 = 10.0;
pub const MIN_REAL_GAP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Flat-Dirichlet probabilities on `support` atoms.
    Random {
        support: usize,
        placement: Placement,
        seed: u64,
    },
    Binomial { trials: u32, p: f64 },
    /// Equal mass on `0..support`.
    Uniform { support: usize },
    /// Mass `1 - delta` on 0, the rest spread over `1..support`.
    NearDegenerate { support: usize, delta: f64 },
    FromFile { path: PathBuf },
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::InvalidSpec(msg.into())
}

pub fn generate(spec: &GeneratorSpec) -> Result<Pmf> {
    match *spec {
        GeneratorSpec::Random {
            support,
            placement,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_pmf(&mut rng, support, placement)
        }
        GeneratorSpec::Binomial { trials, p } => binomial(trials, p),
        GeneratorSpec::Uniform { support } => uniform(support),
        GeneratorSpec::NearDegenerate { support, delta } => near_degenerate(support, delta),
        GeneratorSpec::FromFile { ref path } => read_pmf(path),
    }
}

/// Random pmf drawn from `rng`; probabilities are uniform on the simplex.
pub fn random_pmf<R: Rng>(rng: &mut R, support: usize, placement: Placement) -> Result<Pmf> {
    if support == 0 {
        return Err(invalid("random support must be at least 1"));
    }
    // Normalized iid exponentials are Dirichlet(1, ..., 1).
    let weights: Vec<f64> = (0..support)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    let values: Vec<f64> = match placement {
        Placement::IntegerGrid => (0..support).map(|i| i as f64).collect(),
        Placement::RandomReal => loop {
            let mut v: Vec<f64> = (0..support)
                .map(|_| rng.random_range(0.0..=REAL_RANGE))
                .collect();
            v.sort_by(f64::total_cmp);
            if v.windows(2).all(|w| w[1] - w[0] >= MIN_REAL_GAP) {
                break v;
            }
        },
    };
    let pairs: Vec<(f64, f64)> = values
        .into_iter()
        .zip(weights)
        .map(|(v, w)| (v, w / total))
        .collect();
    Ok(new_pmf(&pairs, DEFAULT_MERGE_EPS)?)
}

/// `B(n, p)` on `0..=n`, built from a log-space recurrence on the binomial
/// coefficients and normalized at the end.
pub fn binomial(trials: u32, p: f64) -> Result<Pmf> {
    if trials == 0 {
        return Err(invalid("binomial needs n >= 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("binomial needs 0 < p < 1, got {p}")));
    }
    let n = trials as usize;
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    let mut log_w = Vec::with_capacity(n + 1);
    let mut ln_choose = 0.0;
    for i in 0..=n {
        if i > 0 {
            ln_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        log_w.push(ln_choose + i as f64 * ln_p + (n - i) as f64 * ln_q);
    }
    let peak = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = w.iter().sum();
    let pairs: Vec<(f64, f64)> = w
        .iter()
        .enumerate()
        .map(|(i, x)| (i as f64, x / total))
        .collect();
    Ok(new_pmf(&pairs, DEFAULT_MERGE_EPS)?)
}

pub fn uniform(support: usize) -> Result<Pmf> {
    if support == 0 {
        return Err(invalid("uniform support must be at least 1"));
    }
    let values: Vec<f64> = (0..support).map(|i| i as f64).collect();
    Ok(Pmf::equiprobable(&values)?)
}

pub fn near_degenerate(support: usize, delta: f64) -> Result<Pmf> {
    if support < 2 {
        return Err(invalid("near_degenerate support must be at least 2"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("near_degenerate needs 0 < delta < 1, got {delta}")));
    }
    let rest = delta / (support - 1) as f64;
    let pairs: Vec<(f64, f64)> = (0..support)
        .map(|i| (i as f64, if i == 0 { 1.0 - delta } else { rest }))
        .collect();
    Ok(new_pmf(&pairs, DEFAULT_MERGE_EPS)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use epi_core::min_spacing;

    #[test]
    fn binomial_two_halves() {
        let p = binomial(2, 0.5).unwrap();
        let pairs = p.pairs();
        let expected = [(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)];
        for (got, want) in pairs.iter().zip(expected) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-15);
        }
    }

    #[test]
    fn binomial_matches_coefficients() {
        // C(10, k) / 2^10
        let coeffs = [1.0, 10.0, 45.0, 120.0, 210.0, 252.0, 210.0, 120.0, 45.0, 10.0, 1.0];
        let p = binomial(10, 0.5).unwrap();
        for (a, c) in p.atoms().iter().zip(coeffs) {
            assert!((a.prob - c / 1024.0).abs() < 1e-15);
        }
        assert!(binomial(0, 0.5).is_err());
        assert!(binomial(3, 1.0).is_err());
    }

    #[test]
    fn uniform_and_near_degenerate() {
        assert_eq!(
            uniform(4).unwrap().pairs(),
            vec![(0.0, 0.25), (1.0, 0.25), (2.0, 0.25), (3.0, 0.25)]
        );
        let p = near_degenerate(3, 0.01).unwrap();
        let probs: Vec<f64> = p.probs().collect();
        assert!((probs[0] - 0.99).abs() < 1e-15);
        assert!((probs[1] - 0.005).abs() < 1e-15 && (probs[2] - 0.005).abs() < 1e-15);
        assert!(near_degenerate(1, 0.1).is_err());
        assert!(near_degenerate(3, 0.0).is_err());
    }

    #[test]
    fn random_is_seed_determined() {
        for placement in [Placement::IntegerGrid, Placement::RandomReal] {
            let spec = GeneratorSpec::Random {
                support: 6,
                placement,
                seed: 42,
            };
            let a = generate(&spec).unwrap();
            assert_eq!(a, generate(&spec).unwrap());
            assert_eq!(a.len(), 6);
            if placement == Placement::RandomReal {
                assert!(min_spacing(&a).value() >= MIN_REAL_GAP);
                assert!(a.values().all(|v| (0.0..=REAL_RANGE).contains(&v)));
            }
        }
    }

    #[test]
    fn spec_json_shape() {
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"kind":"binomial","trials":5,"p":0.5}"#).unwrap();
        assert_eq!(spec, GeneratorSpec::Binomial { trials: 5, p: 0.5 });
    }
}
