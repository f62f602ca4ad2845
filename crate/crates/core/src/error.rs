use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension m={0}: need m >= 2")]
    InvalidDimension(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid form specification: {0}")]
    InvalidSpec(String),

    /// The assumed extremal structure (form, K, degree cap) does not produce a solution.
    #[error("structure failure: {0}")]
    Structure(String),

    #[error("ambiguous selection: {0} candidates survive the structural filters")]
    Ambiguous(usize),

    #[error("degenerate structure: {0}")]
    Degenerate(String),

    /// A named certification check failed.
    #[error("check `{check}` failed: {detail}")]
    Certification { check: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short pipeline stage name, used by the command line front end.
    pub fn stage(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) | Error::InvalidArgument(_) | Error::Domain(_) => "input",
            Error::InvalidSpec(_) | Error::Structure(_) | Error::Ambiguous(_) => "structure",
            Error::Degenerate(_) => "structure",
            Error::Certification { .. } => "verification",
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}
