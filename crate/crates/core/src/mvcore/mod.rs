//! Complex multivector engine over a diagonal signature: exterior and
//! Clifford products, contractions, involutions, grading and truncating
//! power series.

mod multivector;
pub mod sampling;
mod series;
mod signature;

pub(crate) use multivector::check_same;
pub use multivector::{
    format_complex, grade_of, reorder_sign, BladeMask, Involution, Multivector, Side, Tolerance,
};
pub use series::{series_apply, series_with, SeriesFn, SeriesOutcome, DEFAULT_MAX_DEGREE};
pub use signature::{Signature, MAX_DIM};
