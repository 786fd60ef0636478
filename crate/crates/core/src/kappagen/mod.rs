//! Conformal and κ-Poincaré generator sets over complexified `Cl(1,3)` and
//! the built-in relation suites.

mod generators;
mod suites;

pub use generators::{
    conformal_generators, deform, deformed_generators, gamma5, generator_set, kappa_generators,
    nilpotent_arg, BasisKind, GeneratorSet,
};
pub use suites::{suite, SUITE_NAMES};
