use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{func}: argument {value} outside domain ({expected})")]
    Domain {
        func: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Iterative evaluation failed to converge.
    #[error("{0}: no convergence")]
    NoConvergence(&'static str),

    /// The requested harvested power is at or above the model's supremum.
    #[error("demand {demand} mW is unreachable (model supremum {p_max} mW)")]
    Unreachable { demand: f64, p_max: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ill-conditioned least squares: {0}")]
    IllConditioned(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("{}", fmt_dataset(*.line, .message))]
    Dataset { line: Option<u64>, message: String },
}

fn fmt_dataset(line: Option<u64>, message: &str) -> String {
    match line {
        Some(l) => format!("dataset line {l}: {message}"),
        None => format!("dataset: {message}"),
    }
}

impl Error {
    pub(crate) fn domain<T: num_traits::ToPrimitive>(func: &'static str, value: T, expected: &'static str) -> Self {
        Error::Domain {
            func,
            value: value.to_f64().unwrap_or(f64::NAN),
            expected,
        }
    }
}
