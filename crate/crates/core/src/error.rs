use std::fmt;
use std::io;

/// Reason an Eojeol could not be covered by dictionary morphemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationFailure {
    pub eojeol: String,
    /// Index of the Eojeol within its sentence, when known.
    pub eojeol_index: Option<usize>,
    /// Furthest character offset reachable by a legal partial cover.
    pub matched_chars: usize,
}

impl fmt::Display for SegmentationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot segment eojeol ")?;
        if let Some(i) = self.eojeol_index {
            write!(f, "#{} ", i)?;
        }
        write!(
            f,
            "{:?}: no legal cover (matched {} of {} chars)",
            self.eojeol,
            self.matched_chars,
            self.eojeol.chars().count()
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{source_name}:{line}: {msg}")]
    Format {
        source_name: String,
        line: usize,
        msg: String,
    },

    #[error("invalid tag path {text:?}: {msg} (segment {position})")]
    TagPath {
        text: String,
        position: usize,
        msg: String,
    },

    #[error("{0}")]
    Segmentation(SegmentationFailure),

    #[error("decode failure: {0}")]
    Decode(String),

    #[error("training failure: {0}")]
    Training(String),

    #[error("tags not in inventory: {}", .0.join(", "))]
    UnknownTags(Vec<String>),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(source_name: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            source_name: source_name.to_string(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
