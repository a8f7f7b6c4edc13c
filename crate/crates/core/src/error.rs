use thiserror::Error;

/// Errors shared by the sequence model and the set representations.
///
/// Lookup-style operations (`get`, `next_geq`, `select_in_word`) signal an
/// out-of-range request or an absent successor with `None` instead of an
/// error; `Error` is reserved for contract violations the caller can fix:
/// invalid input sequences, undersized output buffers, and byte buffers
/// that do not parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Sequences must contain at least one value.
    #[error("input sequence is empty")]
    EmptyInput,

    /// Adjacent values must satisfy `values[i-1] < values[i]`.
    #[error("values are not strictly increasing at index {index}")]
    NotStrictlyIncreasing { index: usize },

    /// The declared universe bound must be at least the largest value.
    #[error("universe bound {universe} is below the largest value {max}")]
    UniverseTooSmall { max: u32, universe: u32 },

    /// The caller-provided output slice cannot hold the worst-case result.
    #[error("output buffer holds {got} slots, {needed} required")]
    BufferTooSmall { needed: usize, got: usize },

    /// A serialized buffer failed structural validation: it is truncated,
    /// carries trailing bytes, declares non-increasing identifiers, or its
    /// declared sizes disagree with its actual layout.
    #[error("malformed buffer: {reason}")]
    MalformedBuffer { reason: String },
}

impl Error {
    pub(crate) fn malformed(reason: impl Into<String>) -> Self {
        Error::MalformedBuffer { reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
