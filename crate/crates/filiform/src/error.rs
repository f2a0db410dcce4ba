use thiserror::Error;

/// Errors surfaced by fallible operations.
///
/// Definite negative answers (no root, not conjugate, nothing within a search
/// radius) are not errors; those are expressed as `None` variants at the call
/// sites that can produce them.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed element or word text.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// A ball enumeration would exceed the configured memory budget.
    /// The enumeration is abandoned; no partial table is returned.
    #[error("memory cap exceeded: estimated {estimated} bytes, cap {cap} bytes")]
    MemoryCapExceeded { estimated: u64, cap: u64 },

    /// `zeta` was asked to evaluate an element outside the centralizer of the
    /// base element.
    #[error("element does not centralize the base element")]
    NotInCentralizer,

    /// A ball cache file failed the magic, version, or layout checks.
    #[error("invalid ball cache file: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
