use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A word or point violates the transition matrix.
    Inadmissible(String),
    /// An open-ball radius equal to `2^-j` in the exact backend.
    DyadicRadius(f64),
    UnsupportedBackend(&'static str),
    UnsupportedMeasure(&'static str),
    /// An enumeration or state cap was hit.
    CapExceeded { what: &'static str, cap: u64, needed: u64 },
    InvalidParameter(String),
    /// The critical-value predicate did not change sign over the scanned range.
    BracketFailure(String),
    /// No partition or cover in the configured family qualifies.
    EmptyFamily(String),
    /// A leaf-set approximation came out empty.
    EmptyApproximation(String),
    /// A chain or experiment node failed; `node` names it.
    Node { node: String, cause: Box<Error> },
}

impl Error {
    /// The innermost cause, past any node wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Node { cause, .. } => cause.root(),
            e => e,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Inadmissible(s) => write!(f, "inadmissible: {s}"),
            Error::DyadicRadius(e) => {
                write!(f, "radius {e} is a power of 1/2; perturb it for the exact backend")
            }
            Error::UnsupportedBackend(s) => write!(f, "unsupported backend: {s}"),
            Error::UnsupportedMeasure(s) => write!(f, "unsupported measure: {s}"),
            Error::CapExceeded { what, cap, needed } => {
                write!(f, "resource cap `{what}` exceeded: need {needed}, cap {cap}")
            }
            Error::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            Error::BracketFailure(s) => write!(f, "bracket failure: {s}"),
            Error::EmptyFamily(s) => write!(f, "empty family: {s}"),
            Error::EmptyApproximation(s) => write!(f, "empty approximation: {s}"),
            Error::Node { node, cause } => write!(f, "{node}: {cause}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_cap(what: &'static str, cap: u64, needed: u64) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded { what, cap, needed })
    } else {
        Ok(())
    }
}

pub(crate) fn at_node<T>(node: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Node { node: node.into(), cause: Box::new(e) })
}
