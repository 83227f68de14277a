use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Structural problems: mismatched band dimensions, ragged tables.
    #[error("structural error: {0}")]
    Structural(String),

    /// Invalid domain values or violated invariants in input data.
    #[error("validation error: {0}")]
    Validation(String),

    /// A file could not be parsed.
    #[error("parse error in {path} (line {line}): {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// A required value is absent (e.g. meteorology for a ZIP-day).
    #[error("missing data: {0}")]
    MissingData(String),

    /// Bad configuration, including degenerate spline inputs.
    #[error("configuration error: {0}")]
    Config(String),

    /// Design matrix is rank deficient after within-stratum centering.
    #[error("rank-deficient design; collinear columns: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    /// The fitter exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    NonConvergence {
        iterations: usize,
        grad_norm: f64,
        last_estimate: Vec<f64>,
    },

    /// A coefficient's conditional MLE lies on the boundary (complete separation).
    #[error("complete separation on column {column}; coefficient is not estimable")]
    Separation { column: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(path: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
