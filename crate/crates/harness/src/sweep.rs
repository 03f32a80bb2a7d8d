//! Sigma sweeps as plot-ready CSV.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use epi_core::verify::{sigma_search, SigmaSweep};

use crate::error::{io_err, Result};

pub const SWEEP_HEADER: &str = "sigma,K,eta,Phi,F";

pub fn write_sweep_csv<W: Write>(sweep: &SigmaSweep, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &sweep.rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn run_sigma_sweep(alpha_z: f64, epsilon: f64, out_path: impl AsRef<Path>) -> Result<SigmaSweep> {
    let path = out_path.as_ref();
    let sweep = sigma_search(alpha_z, epsilon)?;
    let file = File::create(path).map_err(io_err(path))?;
    write_sweep_csv(&sweep, file)?;
    log::info!(
        "sweep alpha_z={alpha_z} epsilon={epsilon}: sigma0 = {} after {} rows",
        sweep.sigma0,
        sweep.rows.len()
    );
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_exact() {
        let sweep = sigma_search(1.0, 0.5).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&sweep, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(SWEEP_HEADER));
        assert_eq!(text.lines().count(), sweep.rows.len() + 1);
    }

    #[test]
    fn file_ends_above_threshold() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let sweep = run_sigma_sweep(1.0, 0.01, &path).unwrap();
        let mut reader = csv::Reader::from_path(&path).unwrap();
        let last = reader.records().last().unwrap().unwrap();
        let f: f64 = last[4].parse().unwrap();
        assert!(f >= 0.99);
        assert_eq!(f, sweep.final_f());
    }
}
