//! File formats, the shipped catalog, reports and the command-line front end
//! for `ltk-core`.

pub mod catalog;
pub mod cli;
pub mod io;
pub mod parallel;
pub mod report;

pub use io::{parse_document, parse_gamma, parse_lambda, serialize_document, ElementDocument, ParseError};
