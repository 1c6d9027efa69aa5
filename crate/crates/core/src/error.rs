use thiserror::Error;

/// Every failure the factorization machinery can report.
///
/// Numerical stages fail loudly instead of producing a wrong exact answer; the
/// pipeline maps each variant to a recovery action (see [`Error::recovery`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("path tracking failed: {0}")]
    PathFailure(String),
    #[error("polynomial is not square-free (coincident roots)")]
    NotSquareFree,
    #[error("Newton iteration is not converging from the given start point")]
    NotConverging,
    #[error("approximation precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("no minimal polynomial candidate passed the acceptance bound")]
    NoCandidateFound,
    #[error("root grouping inconsistent: {0}")]
    InconsistentGrouping(String),
    #[error("endpoint y = {0} matches no root group")]
    UnmatchedEndpoint(String),
    #[error("coefficient matrix has rank one; factor would be reducible")]
    RankOne,
    #[error("scaling system is underdetermined; more interpolation nodes needed")]
    NeedMoreNodes,
    #[error("interpolation data is inconsistent: {0}")]
    Inconsistent(String),
    #[error("assembled polynomial has a nonzero coefficient above y^{0}")]
    DegreeOverflow(usize),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("factorization failed after {restarts} restarts: {diagnostics}")]
    FactorizationFailed { restarts: usize, diagnostics: String },
}

/// What the orchestrator should do after a stage error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recovery {
    /// Same randomness, more bits.
    Refine,
    /// Same structure, fresh random choice (angle or node).
    Resample,
    /// Start the part over with fresh randomness and doubled precision.
    Restart,
}

impl Error {
    pub fn recovery(&self) -> Recovery {
        match self {
            Error::PrecisionTooLow(_) | Error::NotConverging => Recovery::Refine,
            Error::PathFailure(_) | Error::NotSquareFree | Error::UnmatchedEndpoint(_) => {
                Recovery::Resample
            }
            _ => Recovery::Restart,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
