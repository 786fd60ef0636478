//! Paravector model of compactified Minkowski space: quadric embedding,
//! Vahlen matrices, the Möbius action and the `Cl(4,1)` charts.

mod chart;
mod paravector;
mod vahlen;

pub use chart::{chart_iso, ChartKind};
pub use paravector::{embed_point, klein_residual, Paravector, QuadricPoint};
pub use vahlen::{
    act_on_point, conformality, make_map, mobius, rotor, twisted_adjoint, vahlen_check,
    Conformality, MapKind, MapSpec, MobiusResult, VahlenConditions, VahlenMatrix, DEFAULT_FD_STEP,
    STEP_RESIDUAL_LIMIT,
};
