//! Graded tensor square of `Λ(V)` and the Grassmann–Hopf co-structures.

mod coalgebra;
mod tensor;

pub use coalgebra::{
    antipode, clifford_coproduct_obstruction, coproduct, coproduct_in, coproduct_with, counit,
    hopf_check, CoproductMode, HopfReport,
};
pub use tensor::{LegProduct, ProductMode, TensorElement};
