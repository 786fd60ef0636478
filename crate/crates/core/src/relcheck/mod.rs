//! Expression language over multivectors and tensors, relation suites with
//! residual reports, and a simplex fitter over deformation parameters.

mod eval;
mod expr;
mod fit;
mod report;
mod suite;

pub use eval::{eval, eval_str, residual, DeformMode, Env, EvalConfig, Value};
pub use expr::{parse, BinOp, Expr, Func};
pub use fit::{
    fit, minimize, synthetic_suite, FitConfig, FitFamily, FitResult, Minimum, Objective,
    ERROR_PENALTY,
};
pub use report::{rows, run, Fingerprint, Report, Row, Status, Summary};
pub use suite::{expand_sum, multivector_expr, substitute, Expectation, Relation, RelationSuite};
