//! Terms, identities and quasi-identities over semiring and group signatures.

mod ast;
mod eval;
mod parse;
pub mod schemas;

pub use ast::{Exponent, Identity, QuasiIdentity, Term};
pub use eval::{eval, satisfies, satisfies_all, CompiledTerm, EvalError};
pub use parse::{parse, parse_identity, parse_quasi_identity, parse_term, Dialect, Kind, ParseError, Parsed};
pub use schemas::{builtin_schemas, schema, Schema, SchemaError};

/// Default number of assignments an identity check may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
