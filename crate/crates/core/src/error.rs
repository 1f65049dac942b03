use std::path::PathBuf;

/// Errors produced anywhere in the bound pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("argument {value} exceeds the representable range (|x| <= {threshold})")]
    Range { value: f64, threshold: f64 },

    #[error("quadrature did not converge: best value {value:e}, error estimate {err_est:e}")]
    Convergence { value: f64, err_est: f64 },

    #[error("no sign change of f - g on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("Fock cutoff for tail mass {eps:e} is not representable (gave up at n = {cutoff})")]
    Capacity { eps: f64, cutoff: usize },

    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, err: &std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. }
            | Error::Range { .. }
            | Error::Capacity { .. }
            | Error::Validation { .. } => 2,
            Error::Convergence { .. } | Error::Bracket { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
