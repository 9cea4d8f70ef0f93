//! Error type shared by every layer of the crate.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong when evaluating a propagator or an observable.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The oscillatory integral did not settle below the requested tolerances
    /// on either the acceleration path or the mollifier path.
    NonConvergence {
        err_est: f64,
        abs_tol: f64,
        rel_tol: f64,
    },
    /// Evaluation requested inside the light-cone band, where the pointwise
    /// value is deliberately left undefined.
    LightconeBand { t: f64, r: f64 },
    /// A finite-difference stencil would touch the light-cone band.
    TooCloseToCone { t: f64, r: f64, h: f64 },
    /// The evaluation time coincides with the source switch-on instant, where
    /// the step function is ambiguous.
    DegenerateTime,
    /// Asymptotic form requested outside its validity region |T² − r²| ≥ 1.
    OutsideAsymptoticRegime { s2: f64 },
    /// An input violated a documented precondition.
    InvalidInput(&'static str),
    /// Fewer samples than the fit requires.
    InsufficientSamples { needed: usize, got: usize },
    /// A log-space fit received a value ≤ 0.
    NonPositiveSample { index: usize },
    /// Observable name not in the scan registry.
    UnknownObservable,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence {
                err_est,
                abs_tol,
                rel_tol,
            } => write!(
                f,
                "integral did not converge: residual {err_est:.3e} exceeds abs_tol {abs_tol:.1e} / rel_tol {rel_tol:.1e}"
            ),
            Error::LightconeBand { t, r } => {
                write!(f, "point (T={t}, r={r}) lies inside the light-cone band")
            }
            Error::TooCloseToCone { t, r, h } => write!(
                f,
                "point (T={t}, r={r}) is closer than 2h (h={h:.3e}) to the light-cone band"
            ),
            Error::DegenerateTime => {
                write!(f, "evaluation time coincides with the source switch-on instant")
            }
            Error::OutsideAsymptoticRegime { s2 } => write!(
                f,
                "asymptotic form is only defined for |T^2 - r^2| >= 1 (got {s2})"
            ),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InsufficientSamples { needed, got } => {
                write!(f, "fit needs at least {needed} samples, got {got}")
            }
            Error::NonPositiveSample { index } => {
                write!(f, "log-space fit received a non-positive value at sample {index}")
            }
            Error::UnknownObservable => write!(f, "unknown observable id"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
