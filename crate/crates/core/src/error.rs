use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by every layer of the library.
///
/// The variants follow the failure vocabulary of the wire formats: `Format`
/// means the bytes do not parse, `Integrity` means they parse but a checksum
/// disagrees, `Key` means the RSA unwrap rejected the key file, `NotStego`
/// means a cover carries no embedded header at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("not a stego object: {0}")]
    NotStego(String),

    #[error("payload too large: need {needed} bytes, capacity is {available} bytes")]
    Capacity { needed: u64, available: u64 },

    #[error("unsupported cover: {0}")]
    UnsupportedCover(String),

    #[error("key rejected: {0}")]
    Key(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsafe path in archive: {0:?}")]
    UnsafePath(String),

    #[error("audit failure: {0}")]
    Audit(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
