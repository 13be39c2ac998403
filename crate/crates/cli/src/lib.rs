//! JSON front end for `matpoly`: document formats, the error envelope and
//! the command bodies used by the `matpoly` binary.

pub mod commands;
pub mod document;
pub mod error;

pub use document::{AnyMonic, FactorsDocument, FieldKind, Input, MatPolyDocument, Variable};
pub use error::CliError;
