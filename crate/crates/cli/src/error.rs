use cheblogdet::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cheblogdet::Error),
    /// A flag combination the estimators cannot work with.
    #[error("{0}")]
    Precondition(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot start the thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => EXIT_INPUT,
                ErrorKind::Precondition => EXIT_PRECONDITION,
                ErrorKind::Numerical => EXIT_NUMERICAL,
            },
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Output(_) | CliError::Json(_) | CliError::Csv(_) | CliError::Threads(_) => {
                EXIT_INPUT
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let parse = cheblogdet::Error::Parse {
            path: "x".into(),
            line: 1,
            message: "bad".into(),
        };
        assert_eq!(CliError::from(parse).exit_code(), 1);
        let pd = cheblogdet::Error::NotPositiveDefinite {
            pivot: 0,
            value: -1.0,
        };
        assert_eq!(CliError::from(pd).exit_code(), 2);
        let nf = cheblogdet::Error::NonFinite("x".into());
        assert_eq!(CliError::from(nf).exit_code(), 3);
        assert_eq!(CliError::Precondition("x".into()).exit_code(), 2);
    }
}
