use core::fmt;

use crate::lambda::Bidegree;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Terms of an element live in more than one bidegree (or degree).
    NotHomogeneous,
    /// An operation that needs a cycle was handed something else.
    NotACycle { what: &'static str },
    BidegreeMismatch { expected: Bidegree, found: Bidegree },
    /// A gamma monomial or element has the wrong number of variables.
    RankMismatch { expected: usize, found: usize },
    /// `adem_expand_pair` called on an admissible pair.
    AdmissiblePair { first: u32, second: u32 },
    DimensionMismatch { expected: usize, found: usize },
    /// A basis larger than the configured guard was requested.
    ResourceLimit { needed: usize, limit: usize },
    /// Catalog lookups.
    MissingEntry(alloc::string::String),
    WrongKind { name: alloc::string::String, expected: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHomogeneous => write!(f, "element is not homogeneous"),
            Error::NotACycle { what } => write!(f, "{what} is not a cycle"),
            Error::BidegreeMismatch { expected, found } => {
                write!(f, "expected bidegree {expected}, found {found}")
            }
            Error::RankMismatch { expected, found } => {
                write!(f, "expected rank {expected}, found {found}")
            }
            Error::AdmissiblePair { first, second } => {
                write!(f, "pair ({first}, {second}) is already admissible")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ResourceLimit { needed, limit } => write!(
                f,
                "basis of size {needed} exceeds the limit of {limit} monomials"
            ),
            Error::MissingEntry(name) => write!(f, "catalog has no entry named `{name}`"),
            Error::WrongKind { name, expected } => {
                write!(f, "catalog entry `{name}` is not a {expected} element")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
