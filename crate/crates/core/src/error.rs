use thiserror::Error;

/// Failures while parsing a binary PGM file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgmError {
    #[error("unsupported image format (magic {0:?}); only binary P5 is accepted")]
    UnsupportedFormat(String),
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0}; only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("truncated raster: expected {expected} bytes, found {found}")]
    TruncatedRaster { expected: usize, found: usize },
}

/// Failures while reading a key file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyFileError {
    #[error("line {line}: expected `name=value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key field `{name}`")]
    UnknownField { line: usize, name: String },
    #[error("field `{0}` given more than once")]
    Duplicate(String),
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("field `{name}`: cannot parse `{value}`")]
    BadValue { name: String, value: String },
}

/// Failures while decoding a cipher container.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("blob shorter than the {0}-byte header")]
    ShortHeader(usize),
    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unsupported mode {0}")]
    UnsupportedMode(u8),
    #[error("payload length {found} does not match header (expected {expected})")]
    PayloadLength { expected: usize, found: usize },
    #[error("invalid dimensions {rows}x{cols}")]
    Dimensions { rows: u32, cols: u32 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot serialize non-finite value at index {0}")]
    NonFinite(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("correlation undefined: zero variance")]
    UndefinedCorrelation,
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error(transparent)]
    KeyFile(#[from] KeyFileError),
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("report encoding failed: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;
