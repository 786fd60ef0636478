use std::fmt;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use super::eval::{eval, residual, Env, Value};
use super::expr::parse;
use super::suite::{Expectation, Relation, RelationSuite};
use crate::error::Result;
use crate::hopfalg::{CoproductMode, ProductMode};
use crate::qdeform::JsonComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Diagnostic,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Diagnostic => "diagnostic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub relation: String,
    pub indices: IndexMap<String, i64>,
    pub residual: Option<f64>,
    pub max_coeff_lhs: Option<f64>,
    pub max_coeff_rhs: Option<f64>,
    /// Residual with the other tensor sign rule; only for tensor-valued rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_other_tensor_mode: Option<f64>,
    pub status: Status,
    pub within_tol: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub basis: String,
    pub kappa: Option<f64>,
    pub deformation: Option<Vec<Vec<JsonComplex>>>,
    pub deform_mode: Option<String>,
    pub coproduct_mode: CoproductMode,
    pub tensor_mode: ProductMode,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub pass: usize,
    pub fail: usize,
    pub diagnostic: usize,
    pub diagnostic_within_tol: usize,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub timestamp: Option<String>,
    pub suite: String,
    pub environment: Fingerprint,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    /// True unless some must-pass row failed.
    pub fn success(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn with_timestamp(mut self, ts: impl Into<String>) -> Self {
        self.timestamp = Some(ts.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.summary.max_residual
    }
}

fn fmt_indices(ix: &IndexMap<String, i64>) -> String {
    ix.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let env = &self.environment;
        writeln!(f, "suite {} (basis {})", self.suite, env.basis)?;
        if let Some(k) = env.kappa {
            writeln!(f, "kappa {k}")?;
        }
        if let Some(mode) = &env.deform_mode {
            writeln!(f, "deformation active, mode {mode}")?;
        }
        writeln!(
            f,
            "{:<14} {:<22} {:>11} {:>11} {:>11}  status",
            "relation", "indices", "residual", "max|lhs|", "max|rhs|"
        )?;
        for r in &self.rows {
            write!(
                f,
                "{:<14} {:<22} {:>11} {:>11} {:>11}  {}",
                r.relation,
                fmt_indices(&r.indices),
                fmt_opt(r.residual),
                fmt_opt(r.max_coeff_lhs),
                fmt_opt(r.max_coeff_rhs),
                r.status
            )?;
            if let Some(note) = &r.note {
                write!(f, "  ({note})")?;
            }
            writeln!(f)?;
        }
        let s = &self.summary;
        write!(
            f,
            "{} rows: {} pass, {} fail, {} diagnostic ({} within tolerance); max residual {}",
            s.rows,
            s.pass,
            s.fail,
            s.diagnostic,
            s.diagnostic_within_tol,
            fmt_opt(s.max_residual)
        )
    }
}

fn evaluate_pair(lhs: &str, rhs: &str, env: &Env) -> Result<(Value, Value, f64)> {
    let l = eval(&parse(lhs)?, env)?;
    let r = eval(&parse(rhs)?, env)?;
    let res = residual(&l, &r, env)?;
    Ok((l, r, res))
}

fn row(rel: &Relation, indices: IndexMap<String, i64>, env: &Env, other: Option<&Env>) -> Row {
    let (lhs, rhs) = rel.instantiate(&indices);
    let tol = env.config().tol.eq_tol;
    let mut out = Row {
        relation: rel.name.clone(),
        indices,
        residual: None,
        max_coeff_lhs: None,
        max_coeff_rhs: None,
        residual_other_tensor_mode: None,
        status: Status::Fail,
        within_tol: false,
        note: None,
    };
    match evaluate_pair(&lhs, &rhs, env) {
        Ok((l, r, res)) => {
            let tensor_valued = matches!(l, Value::Tensor(_)) || matches!(r, Value::Tensor(_));
            if let (true, Some(other)) = (tensor_valued, other) {
                out.residual_other_tensor_mode = evaluate_pair(&lhs, &rhs, other).ok().map(|t| t.2);
            }
            out.max_coeff_lhs = Some(l.norm_max());
            out.max_coeff_rhs = Some(r.norm_max());
            out.residual = Some(res);
            out.within_tol = res <= tol;
        }
        Err(e) => out.note = Some(e.to_string()),
    }
    out.status = match rel.expect {
        Expectation::Diagnostic => Status::Diagnostic,
        Expectation::MustPass if out.within_tol => Status::Pass,
        Expectation::MustPass => Status::Fail,
    };
    out
}

/// Rows of `suite` under `env`, in relation order then index order.
pub fn rows(suite: &RelationSuite, env: &Env) -> Vec<Row> {
    rows_with(suite, env, true)
}

/// As [`rows`]; `alternate` also evaluates tensor rows under the other
/// tensor sign rule.
pub(crate) fn rows_with(suite: &RelationSuite, env: &Env, alternate: bool) -> Vec<Row> {
    let other = alternate.then(|| {
        env.with_tensor_mode(match env.config().tensor_mode {
            ProductMode::Graded => ProductMode::Ungraded,
            ProductMode::Ungraded => ProductMode::Graded,
        })
    });
    let jobs: Vec<(&Relation, IndexMap<String, i64>)> = suite
        .relations
        .iter()
        .flat_map(|r| r.assignments().into_iter().map(move |a| (r, a)))
        .collect();
    jobs.into_par_iter()
        .map(|(rel, ix)| row(rel, ix, env, other.as_ref()))
        .collect()
}

pub fn run(suite: &RelationSuite, env: &Env) -> Report {
    let rows = rows(suite, env);
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        rows: rows.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        diagnostic: count(Status::Diagnostic),
        diagnostic_within_tol: rows
            .iter()
            .filter(|r| r.status == Status::Diagnostic && r.within_tol)
            .count(),
        max_residual: rows.iter().filter_map(|r| r.residual).reduce(f64::max),
    };
    let cfg = env.config();
    let environment = Fingerprint {
        basis: env
            .generators()
            .map_or(suite.basis, |g| g.basis_kind)
            .to_string(),
        kappa: env.kappa(),
        deformation: cfg.deformation.as_ref().map(|d| d.to_spec().a),
        deform_mode: cfg
            .deformation
            .as_ref()
            .map(|_| cfg.deform_mode.name().to_string()),
        coproduct_mode: cfg.coproduct_mode,
        tensor_mode: cfg.tensor_mode,
        tolerance: cfg.tol.eq_tol,
    };
    Report {
        tool: "cliffhopf".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: None,
        suite: suite.name.clone(),
        environment,
        rows,
        summary,
    }
}
