use thiserror::Error;

/// Everything that can go wrong outside of a law simply failing.
///
/// Law failures are not errors: they are recorded in a [`crate::report::LawReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A map produced a value outside its declared carrier (for example an
    /// action whose output is not in `H`).
    #[error("structural error: {0}")]
    Structural(String),

    /// Two arrows whose boundaries do not match were asked to compose.
    #[error("composition undefined: {what} (left boundary {left}, right boundary {right})")]
    CompositionUndefined { what: String, left: String, right: String },

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error("mismatched operands: {0}")]
    Mismatch(String),

    /// A precondition that another verifier is responsible for did not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn undefined(what: impl Into<String>, left: impl Into<String>, right: impl Into<String>) -> Self {
        Error::CompositionUndefined {
            what: what.into(),
            left: left.into(),
            right: right.into(),
        }
    }

    pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown {
            kind,
            name: name.into(),
        }
    }
}
