//! Seeded random search for violations of `N(X) + N(Y) <= 2 N(X + Y)`.

use epi_core::verify::{verify_theorem1, EpiReport, PMF_ASSERT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::generate::{random_pmf, Placement};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub min_support: usize,
    pub max_support: usize,
    pub seed: u64,
    pub assert_tol: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            trials: 10_000,
            min_support: 1,
            max_support: 8,
            seed: 0,
            assert_tol: PMF_ASSERT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub label: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub failures: usize,
    pub min_slack: f64,
    /// Smallest slack among pairs that are not both singletons.
    pub min_slack_non_singleton: Option<f64>,
    pub singleton_pairs: usize,
    pub integer_grid_trials: usize,
    pub random_real_trials: usize,
    pub slack_histogram: Vec<HistogramBin>,
    pub worst: EpiReport,
    pub failing: Vec<EpiReport>,
}

/// One fuzz trial, fully determined by its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub report: EpiReport,
    pub placement: Placement,
}

/// Seed of trial `index` under a base seed (splitmix64 finalizer).
pub fn trial_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Regenerates and re-checks a single trial from its recorded seed.
pub fn replay_trial(seed: u64, cfg: &FuzzConfig) -> Result<TrialOutcome> {
    if cfg.min_support == 0 || cfg.min_support > cfg.max_support {
        return Err(HarnessError::InvalidSpec(format!(
            "support range {}..={} is empty",
            cfg.min_support, cfg.max_support
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let placement = if rng.random::<bool>() {
        Placement::IntegerGrid
    } else {
        Placement::RandomReal
    };
    let kx = rng.random_range(cfg.min_support..=cfg.max_support);
    let ky = rng.random_range(cfg.min_support..=cfg.max_support);
    let x = random_pmf(&mut rng, kx, placement)?;
    let y = random_pmf(&mut rng, ky, placement)?;
    let report = verify_theorem1(&x, &y, cfg.assert_tol).with_seed(seed);
    Ok(TrialOutcome { report, placement })
}

const BIN_EDGES: [(f64, &str); 4] = [
    (1e-6, "(0,1e-6)"),
    (1e-3, "[1e-6,1e-3)"),
    (1e-1, "[1e-3,1e-1)"),
    (f64::INFINITY, "[1e-1,inf)"),
];

fn histogram(slacks: impl Iterator<Item = f64>) -> Vec<HistogramBin> {
    let mut counts = [0usize; 6];
    for s in slacks {
        let idx = if s < 0.0 {
            0
        } else if s == 0.0 {
            1
        } else {
            2 + BIN_EDGES.iter().position(|&(edge, _)| s < edge).unwrap_or(3)
        };
        counts[idx] += 1;
    }
    let labels = ["negative", "zero"]
        .into_iter()
        .chain(BIN_EDGES.iter().map(|&(_, l)| l));
    labels
        .zip(counts)
        .map(|(label, count)| HistogramBin {
            label: label.to_string(),
            count,
        })
        .collect()
}

pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    if cfg.trials == 0 {
        return Err(HarnessError::InvalidSpec("trials must be at least 1".into()));
    }
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| replay_trial(trial_seed(cfg.seed, i), cfg))
        .collect::<Result<_>>()?;

    let worst = outcomes
        .iter()
        .min_by(|a, b| a.report.slack.total_cmp(&b.report.slack))
        .map(|o| o.report.clone())
        .expect("at least one trial");
    let failing: Vec<EpiReport> = outcomes
        .iter()
        .filter(|o| !o.report.holds)
        .map(|o| o.report.clone())
        .collect();
    let singleton = |r: &EpiReport| r.x_atoms == 1 && r.y_atoms == 1;
    let min_slack_non_singleton = outcomes
        .iter()
        .filter(|o| !singleton(&o.report))
        .map(|o| o.report.slack)
        .reduce(f64::min);
    let integer_grid_trials = outcomes
        .iter()
        .filter(|o| o.placement == Placement::IntegerGrid)
        .count();

    if !failing.is_empty() {
        log::warn!("{} of {} trials violate the inequality", failing.len(), cfg.trials);
    }
    log::info!("fuzz: {} trials, min slack {:e}", cfg.trials, worst.slack);

    Ok(FuzzSummary {
        config: *cfg,
        failures: failing.len(),
        min_slack: worst.slack,
        min_slack_non_singleton,
        singleton_pairs: outcomes.iter().filter(|o| singleton(&o.report)).count(),
        integer_grid_trials,
        random_real_trials: outcomes.len() - integer_grid_trials,
        slack_histogram: histogram(outcomes.iter().map(|o| o.report.slack)),
        worst,
        failing,
    })
}
