//! Pmf files: `value<TAB>probability` text with `#` comments, or a JSON array
//! of `[value, probability]` pairs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use epi_core::pmf::DEFAULT_MERGE_EPS;
use epi_core::{new_pmf, Pmf};

use crate::error::{io_err, HarnessError, Result};

fn finite_field(raw: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = raw.parse().map_err(|_| HarnessError::Parse {
        line,
        message: format!("cannot parse {what} {raw:?}"),
    })?;
    if !v.is_finite() {
        return Err(HarnessError::Parse {
            line,
            message: format!("{what} must be finite, got {raw}"),
        });
    }
    Ok(v)
}

pub fn parse_pmf_text(text: &str) -> Result<Pmf> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split('\t').map(str::trim).collect();
        let [value, prob] = fields[..] else {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected `value<TAB>probability`, got {content:?}"),
            });
        };
        pairs.push((
            finite_field(value, line, "value")?,
            finite_field(prob, line, "probability")?,
        ));
    }
    Ok(new_pmf(&pairs, DEFAULT_MERGE_EPS)?)
}

pub fn parse_pmf_json(text: &str) -> Result<Pmf> {
    let pairs: Vec<(f64, f64)> = serde_json::from_str(text)?;
    for (i, &(v, p)) in pairs.iter().enumerate() {
        if !v.is_finite() || !p.is_finite() {
            return Err(HarnessError::Parse {
                line: i + 1,
                message: "non-finite entry".into(),
            });
        }
    }
    Ok(new_pmf(&pairs, DEFAULT_MERGE_EPS)?)
}

/// Text form; values print in shortest round-trip notation.
pub fn pmf_to_text(p: &Pmf) -> String {
    let mut out = String::new();
    for a in p.atoms() {
        writeln!(out, "{}\t{}", a.value, a.prob).expect("writing to a String");
    }
    out
}

pub fn pmf_to_json(p: &Pmf) -> String {
    serde_json::to_string(&p.pairs()).expect("finite pairs serialize")
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads either format; JSON is chosen by a `.json` extension or a leading `[`.
pub fn read_pmf(path: impl AsRef<Path>) -> Result<Pmf> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    if is_json(path) || text.trim_start().starts_with('[') {
        parse_pmf_json(&text)
    } else {
        parse_pmf_text(&text)
    }
}

pub fn write_pmf(path: impl AsRef<Path>, p: &Pmf) -> Result<()> {
    let path = path.as_ref();
    let body = if is_json(path) {
        pmf_to_json(p)
    } else {
        pmf_to_text(p)
    };
    fs::write(path, body).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_with_comments() {
        let p = parse_pmf_text("# coin\n1\t0.5\n\n0\t0.5  # tails\n").unwrap();
        assert_eq!(p.pairs(), vec![(0.0, 0.5), (1.0, 0.5)]);
    }

    #[test]
    fn rejects_non_finite_and_malformed() {
        assert!(parse_pmf_text("NaN\t1\n").is_err());
        assert!(parse_pmf_text("0\tinf\n").is_err());
        assert!(parse_pmf_text("0\t0.5\t3\n").is_err());
        assert!(parse_pmf_text("0 1\n").is_err());
        assert!(parse_pmf_text("# nothing\n").is_err());
        assert!(matches!(
            parse_pmf_text("0\t0.3\n1\t0.8\n"),
            Err(HarnessError::Core(epi_core::Error::MassMismatch { .. }))
        ));
        assert!(parse_pmf_json("[[0, 1e400]]").is_err());
        assert!(parse_pmf_json("[[0, 0.5], [1]]").is_err());
    }

    #[test]
    fn json_form() {
        let p = parse_pmf_json("[[2, 0.25], [0, 0.75]]").unwrap();
        assert_eq!(p.pairs(), vec![(0.0, 0.75), (2.0, 0.25)]);
        assert_eq!(parse_pmf_json(&pmf_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = new_pmf(&[(0.1, 0.3), (-2.75, 0.6), (1e-3, 0.1)], 0.0).unwrap();
        for name in ["x.txt", "x.json"] {
            let path = dir.path().join(name);
            write_pmf(&path, &p).unwrap();
            assert_eq!(read_pmf(&path).unwrap(), p);
        }
        assert!(matches!(
            read_pmf(dir.path().join("missing.txt")),
            Err(HarnessError::Io { .. })
        ));
    }
}
