use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate element")]
    DegenerateElement,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("parse error at line {line} near `{token}`: {message}")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("unsupported element type: {0}")]
    UnsupportedElementType(String),

    #[error("mixed element types in one mesh")]
    MixedElementTypes,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
