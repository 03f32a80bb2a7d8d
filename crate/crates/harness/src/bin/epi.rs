//! Command-line driver. Exit codes: 0 when every check passes, 1 when a
//! check fails, 2 on usage or input errors.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;

use epi_core::quadrature::QuadratureConfig;
use epi_core::verify::{verify_theorem1, PMF_ASSERT_TOL};
use epi_harness::families::{run_special_cases, write_families_csv};
use epi_harness::format::{read_pmf, write_pmf};
use epi_harness::fuzz::{run_fuzz, FuzzConfig};
use epi_harness::generate::{generate, GeneratorSpec};
use epi_harness::lemmas::{
    continuous_epi_report, lemma1_battery, lemma2_battery, lemma3_battery, lemma4_report,
};
use epi_harness::sweep::run_sigma_sweep;

#[derive(Parser)]
#[command(name = "epi", version, about = "Numerical checks of N(X) + N(Y) <= 2 N(X + Y)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the inequality for two pmf files.
    Verify {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = PMF_ASSERT_TOL)]
        assert_tol: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random search for violations.
    Fuzz {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        min_support: usize,
        #[arg(long, default_value_t = 8)]
        max_support: usize,
        #[arg(long, default_value_t = PMF_ASSERT_TOL)]
        assert_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shrink sigma until F(sigma) >= 1 - epsilon and write the sweep as CSV.
    SweepSigma {
        #[arg(long)]
        alpha_z: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the battery for one step of the proof chain.
    LemmaCheck {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        lemma: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of cases (lemma 1 and 3) or pairs (lemma 2).
        #[arg(long)]
        cases: Option<usize>,
        /// Sweep threshold for lemma 4.
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Grid intervals for self-convolutions.
        #[arg(long, default_value_t = 8192)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binomial and uniform families under the un-doubled inequality, as CSV.
    Families {
        #[arg(long, default_value_t = 30)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Materialize a generator spec (JSON) as a pmf file.
    Generate {
        /// Generator spec, e.g. '{"kind":"binomial","trials":4,"p":0.5}'.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs a subcommand; `Ok(false)` means a check failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Verify {
            x,
            y,
            assert_tol,
            out,
        } => {
            let px = read_pmf(&x)?;
            let py = read_pmf(&y)?;
            let report = verify_theorem1(&px, &py, assert_tol);
            emit_json(&report, out.as_deref())?;
            Ok(report.holds)
        }
        Command::Fuzz {
            trials,
            seed,
            min_support,
            max_support,
            assert_tol,
            out,
        } => {
            let cfg = FuzzConfig {
                trials,
                min_support,
                max_support,
                seed,
                assert_tol,
            };
            let summary = run_fuzz(&cfg)?;
            emit_json(&summary, out.as_deref())?;
            Ok(summary.failures == 0)
        }
        Command::SweepSigma {
            alpha_z,
            epsilon,
            out,
        } => {
            let sweep = run_sigma_sweep(alpha_z, epsilon, &out)?;
            println!("sigma0 = {:e} (F = {}, {} rows)", sweep.sigma0, sweep.final_f(), sweep.rows.len());
            Ok(sweep.rows.iter().all(|r| r.f <= 1.0 + 1e-6))
        }
        Command::LemmaCheck {
            lemma,
            seed,
            cases,
            epsilon,
            grid_points,
            out,
        } => {
            let q = QuadratureConfig::default().with_grid_points(grid_points);
            q.validate()?;
            let out = out.as_deref();
            match lemma {
                1 => {
                    let b = lemma1_battery(cases.unwrap_or(100), seed, &q)?;
                    emit_json(&b, out)?;
                    Ok(b.failures == 0)
                }
                2 => {
                    let b = lemma2_battery(cases.unwrap_or(1000), seed)?;
                    emit_json(&b, out)?;
                    Ok(b.violations == 0)
                }
                3 => {
                    let b = lemma3_battery(cases.unwrap_or(100), seed, &q)?;
                    emit_json(&b, out)?;
                    Ok(b.failures == 0)
                }
                _ => {
                    #[derive(Serialize)]
                    struct Lemma4 {
                        machinery: epi_harness::lemmas::Lemma4Report,
                        continuous_epi: epi_harness::lemmas::ContinuousEpiReport,
                    }
                    let r = Lemma4 {
                        machinery: lemma4_report(&q, epsilon)?,
                        continuous_epi: continuous_epi_report(&q)?,
                    };
                    emit_json(&r, out)?;
                    Ok(r.machinery.holds && r.continuous_epi.holds)
                }
            }
        }
        Command::Families { n_max, out } => {
            let rows = run_special_cases(n_max)?;
            write_families_csv(&rows, sink(out.as_deref())?)?;
            let failing = rows.iter().filter(|r| !r.passes()).count();
            if failing > 0 {
                log::warn!("{failing} family rows fail");
            }
            Ok(failing == 0)
        }
        Command::Generate { spec, out } => {
            let spec: GeneratorSpec = serde_json::from_str(&spec).context("parsing generator spec")?;
            write_pmf(&out, &generate(&spec)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("EPI_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
