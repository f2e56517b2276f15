use thiserror::Error;

/// Errors raised by game construction, solving and the file/CLI boundary.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("duplicate strategy label `{label}` for player {player}")]
    DuplicateLabel { player: char, label: String },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("unknown strategy `{label}` for player {player}")]
    UnknownStrategy { player: char, label: String },
    #[error("not a prisoner's dilemma: {0}")]
    NotADilemma(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("invalid annotation: {0}")]
    Annotation(String),
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("game too large: {0}")]
    TooLarge(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures caused by numeric degeneracy rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
