use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: apercept::Error,
    },

    #[error(transparent)]
    Core(#[from] apercept::Error),
}

impl CliError {
    /// 1 for bad configuration or input, 2 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            Self::Config(_) => return 1,
            Self::File { source, .. } => source,
            Self::Core(e) => e,
        };
        match core {
            apercept::Error::ZeroLikelihoodObservation | apercept::Error::InvalidBelief(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches `path` to errors from reading or writing it.
pub fn at<T>(path: &std::path::Path, r: apercept::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Core(apercept::Error::ZeroLikelihoodObservation).exit_code(), 2);
        assert_eq!(CliError::Core(apercept::Error::InvalidScenario("x".into())).exit_code(), 1);
        let file = CliError::File {
            path: "m.txt".into(),
            source: apercept::Error::InvalidBelief("nan".into()),
        };
        assert_eq!(file.exit_code(), 2);
        assert!(file.to_string().starts_with("m.txt: "));
    }
}
