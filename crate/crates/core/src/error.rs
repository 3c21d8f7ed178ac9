use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON or a document that does not match the dataset schema.
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("n_views must be at least 1")]
    NoViews,

    #[error("n_frames must be at least 1")]
    NoFrames,

    #[error("image dimensions must be positive (got {width}x{height})")]
    EmptyImage { width: u32, height: u32 },

    #[error("points[{index}]: view {view} is out of range (n_views = {n_views})")]
    ViewOutOfRange {
        index: usize,
        view: usize,
        n_views: usize,
    },

    #[error("points[{index}]: frame {frame} is out of range (n_frames = {n_frames})")]
    FrameOutOfRange {
        index: usize,
        frame: usize,
        n_frames: usize,
    },

    #[error("points[{index}]: ({x}, {y}) lies outside the {width}x{height} image")]
    OutOfBounds {
        index: usize,
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },

    #[error(
        "points[{index}]: duplicate identity {id:?} in view {view}, frame {frame} \
         (first seen at points[{first}])"
    )]
    DuplicateIdentity {
        index: usize,
        first: usize,
        id: String,
        view: usize,
        frame: usize,
    },

    #[error("points[{index}]: ground-truth point has no id")]
    MissingId { index: usize },

    #[error("expected a {expected} dataset")]
    WrongRole { expected: &'static str },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors that come from reading or decoding input, as opposed
    /// to a well-formed document that violates a dataset invariant.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Syntax { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        let line = err.line();
        let column = err.column();
        let mut message = err.to_string();
        let suffix = format!(" at line {line} column {column}");
        if let Some(stripped) = message.strip_suffix(&suffix) {
            message = stripped.to_string();
        }
        Error::Syntax {
            line,
            column,
            message,
        }
    }
}
