use mirror_zeta::counting::CountError;
use mirror_zeta::ff::FfError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("beyond caps: {0}")]
    Cap(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("{0} congruence rows failed")]
    Congruence(usize),
    #[error("zeta recovery: {0}")]
    Recovery(String),
    #[error("functional equation fails for {0}")]
    FunctionalEquation(String),
    #[error("{failed} of {total} sweep instances did not complete")]
    PartialSweep { failed: usize, total: usize },
    #[error("count: {0}")]
    Count(CountError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// The reader of stdout went away, as with `| head`.
    pub fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Io(e) => Some(e.kind()),
            CliError::Json(e) => e.io_error_kind(),
            _ => None,
        };
        kind == Some(std::io::ErrorKind::BrokenPipe)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
            CliError::OracleMismatch(_) => 4,
            CliError::Congruence(_) => 5,
            CliError::Recovery(_) => 6,
            CliError::FunctionalEquation(_) => 7,
            CliError::Count(e) => count_exit_code(e),
            CliError::PartialSweep { .. } | CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

pub fn count_exit_code(e: &CountError) -> u8 {
    match e {
        e if e.is_capacity() => 3,
        CountError::OracleMismatch { .. } => 4,
        CountError::BadDimension(_) | CountError::Field(_) => 2,
        _ => 1,
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match count_exit_code(&e) {
            2 => CliError::Config(e.to_string()),
            3 => CliError::Cap(e.to_string()),
            4 => CliError::OracleMismatch(e.to_string()),
            _ => CliError::Count(e),
        }
    }
}

impl From<FfError> for CliError {
    fn from(e: FfError) -> Self {
        CountError::from(e).into()
    }
}
