use thiserror::Error;

/// Errors produced by the library. The CLI maps each variant family onto an
/// exit code, see [`Error::kind`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("node id {id} out of range for network of {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("network is not in canonical form: {0}")]
    NotCanonical(String),

    #[error("degenerate block: no incoming edges toward status {0}")]
    DegenerateBlock(u8),

    #[error("statistic `{0}` is undefined for this network")]
    StatsUndefined(&'static str),

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error(
        "infeasible alpha {alpha}: {undirected} undirected entries requested but only {possible:.3} possible; alpha must exceed {min_alpha:.6}"
    )]
    InfeasibleAlpha {
        alpha: f64,
        undirected: u64,
        possible: f64,
        min_alpha: f64,
    },

    #[error("degenerate network: {0}")]
    Degenerate(String),

    #[error("sampling mass exhausted after {drawn} of {target} draws")]
    Exhausted { drawn: usize, target: usize },

    #[error("node {0} was sampled but has a zero inclusion probability")]
    UndefinedWeight(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse grouping of errors, used for exit codes and machine-readable reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Infeasible,
    Data,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Input(_) | Error::NodeOutOfRange { .. } => ErrorKind::Usage,
            Error::Infeasible(_) | Error::InfeasibleAlpha { .. } => ErrorKind::Infeasible,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
