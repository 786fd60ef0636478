//! Quantum Clifford algebra `Cl(V, B)` with `B = g + A`: deformed
//! contraction and product, dotted wedge, the Wick isomorphism and the
//! periodicity split into 2×2 matrices.

mod deformation;
mod ops;
mod periodicity;

pub use deformation::{Deformation, DeformationSpec, JsonComplex, ProductTable, ANTISYMMETRY_TOL};
pub use ops::{
    acontract, bcontract, bmul, dotted_wedge, dotted_wedge_general, wick, wick_iso_check,
    WickDirection,
};
pub use periodicity::{
    periodicity_assemble, periodicity_split, HyperbolicPair, Matrix2, PeriodicitySplit,
};
