use thiserror::Error;

/// Errors raised by model construction, belief updates, selection and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid belief: {0}")]
    InvalidBelief(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    /// The normalizer of a Bayes update is zero: the observation cannot
    /// happen under the current belief and action.
    #[error("observation has zero likelihood under the current belief")]
    ZeroLikelihoodObservation,

    #[error("joint observation alphabet of {size} outcomes exceeds the cap of {cap}")]
    JointAlphabetTooLarge { size: u128, cap: u128 },

    #[error("{count} sources exceed the exhaustive-search cap of {cap}")]
    TooManySources { count: usize, cap: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(what: &'static str, index: usize, bound: usize) -> Result<()> {
    if index < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, bound })
    }
}
