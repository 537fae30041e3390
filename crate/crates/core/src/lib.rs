pub mod algebra;
pub mod report;
pub mod terms;

pub use algebra::{Element, FinAlgebra, Signature};
pub use report::{Report, Verdict};
pub mod classes;
pub mod groups;
pub mod congruences;
pub mod constructions;
pub mod iso;
pub mod partition;
pub mod quasivar;
pub mod enumerate;
pub mod fixtures;
pub mod expr;
