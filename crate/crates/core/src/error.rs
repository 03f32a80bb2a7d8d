use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution was built from no atoms.
    EmptyPmf,
    /// NaN or infinite value or probability.
    NonFinite { value: f64, prob: f64 },
    NegativeProbability { value: f64, prob: f64 },
    /// Total probability too far from one to be silently renormalized.
    MassMismatch { total: f64 },
    InvalidParameter { name: &'static str, value: f64 },
    InvalidInterval { lo: f64, hi: f64 },
    /// Kernel support is not centred at zero.
    AsymmetricKernel { lo: f64, hi: f64 },
    /// Shifted kernel copies would overlap: `half_width >= spacing / 2`.
    Overlap { half_width: f64, spacing: f64 },
    QuadratureNonConvergence {
        subdivisions: usize,
        error_estimate: f64,
        abs_tol: f64,
    },
    /// Grid self-convolution lost or gained more mass than allowed.
    UnderResolvedConvolution { correction: f64 },
    /// The sigma sweep hit its step cap before `F(sigma) >= 1 - epsilon`.
    SweepExhausted { steps: usize, last_sigma: f64, last_f: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPmf => write!(f, "pmf has no atoms"),
            Error::NonFinite { value, prob } => {
                write!(f, "non-finite atom (value {value}, probability {prob})")
            }
            Error::NegativeProbability { value, prob } => {
                write!(f, "negative probability {prob} at value {value}")
            }
            Error::MassMismatch { total } => {
                write!(f, "total probability {total} deviates from 1 by more than 1e-9")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::InvalidInterval { lo, hi } => write!(f, "invalid interval ({lo}, {hi})"),
            Error::AsymmetricKernel { lo, hi } => {
                write!(f, "kernel support ({lo}, {hi}) is not symmetric about 0")
            }
            Error::Overlap {
                half_width,
                spacing,
            } => write!(
                f,
                "kernel half-width {half_width} is not below half the minimum spacing {spacing}"
            ),
            Error::QuadratureNonConvergence {
                subdivisions,
                error_estimate,
                abs_tol,
            } => write!(
                f,
                "quadrature did not converge after {subdivisions} subdivisions \
                 (error estimate {error_estimate:e}, tolerance {abs_tol:e})"
            ),
            Error::UnderResolvedConvolution { correction } => write!(
                f,
                "grid convolution mass correction {correction:e} exceeds 1e-6"
            ),
            Error::SweepExhausted {
                steps,
                last_sigma,
                last_f,
            } => write!(
                f,
                "sigma sweep stopped after {steps} steps at sigma = {last_sigma:e} with F = {last_f}"
            ),
        }
    }
}

impl core::error::Error for Error {}
