//! Computer algebra for Clifford, quantum Clifford (`B = g + A`) and
//! Clifford–Hopf structures, with built-in conformal and κ-Poincaré
//! generator catalogs and a relation checking and fitting harness.

pub mod conformal;
pub mod error;
pub mod hopfalg;
pub mod kappagen;
pub mod mvcore;
pub mod qdeform;
pub mod relcheck;

pub use error::{Error, Result};
pub use hopfalg::TensorElement;
pub use kappagen::{BasisKind, GeneratorSet};
pub use mvcore::{Involution, Multivector, Side, Signature, Tolerance};
pub use num_complex::Complex64;
pub use qdeform::Deformation;
pub use relcheck::{Expr, Relation, RelationSuite, Report, Value};
