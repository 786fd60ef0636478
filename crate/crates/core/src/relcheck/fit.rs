use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::{DeformMode, Env, EvalConfig};
use super::report::rows_with;
use super::suite::{multivector_expr, Relation, RelationSuite};
use crate::error::{Error, Result};
use crate::kappagen::{generator_set, BasisKind, GeneratorSet};
use crate::mvcore::{Multivector, Signature};
use crate::qdeform::{bmul, Deformation, JsonComplex};

/// Penalty charged for a row that fails to evaluate.
pub const ERROR_PENALTY: f64 = 1e6;

/// Parametrization of the antisymmetric matrix `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum FitFamily {
    /// Real and imaginary part of `A_ij` for every `i < j`, optionally
    /// divided by κ.
    Default { scale_by_kappa: bool },
    /// Real `A_ij` for every `i < j`.
    Real,
}

impl Default for FitFamily {
    fn default() -> Self {
        FitFamily::Default {
            scale_by_kappa: false,
        }
    }
}

impl std::str::FromStr for FitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(FitFamily::Default {
                scale_by_kappa: false,
            }),
            "default-kappa" | "scaled" => Ok(FitFamily::Default {
                scale_by_kappa: true,
            }),
            "real" => Ok(FitFamily::Real),
            other => Err(Error::BadFamily(format!("unknown family '{other}'"))),
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

impl FitFamily {
    pub fn param_count(self, n: usize) -> usize {
        let p = n * (n - 1) / 2;
        match self {
            FitFamily::Default { .. } => 2 * p,
            FitFamily::Real => p,
        }
    }

    pub fn deformation(
        self,
        sig: &Arc<Signature>,
        params: &[f64],
        kappa: Option<f64>,
    ) -> Result<Deformation> {
        let n = sig.dim();
        if params.len() != self.param_count(n) {
            return Err(Error::BadFamily(format!(
                "expected {} parameters, got {}",
                self.param_count(n),
                params.len()
            )));
        }
        let scale = match self {
            FitFamily::Default {
                scale_by_kappa: true,
            } => {
                let k = kappa.ok_or_else(|| Error::MissingParameter("kappa".into()))?;
                1.0 / k
            }
            _ => 1.0,
        };
        let upper: Vec<((usize, usize), Complex64)> = pairs(n)
            .into_iter()
            .enumerate()
            .map(|(k, ij)| {
                let c = match self {
                    FitFamily::Default { .. } => Complex64::new(params[2 * k], params[2 * k + 1]),
                    FitFamily::Real => Complex64::new(params[k], 0.0),
                };
                (ij, c * scale)
            })
            .collect();
        Deformation::from_upper(sig, &upper).map_err(|e| Error::BadFamily(e.to_string()))
    }

    /// Inverse of [`FitFamily::deformation`]; imaginary parts are dropped by
    /// the real family.
    pub fn params_of(self, d: &Deformation, kappa: Option<f64>) -> Result<Vec<f64>> {
        let scale = match self {
            FitFamily::Default {
                scale_by_kappa: true,
            } => kappa.ok_or_else(|| Error::MissingParameter("kappa".into()))?,
            _ => 1.0,
        };
        let mut out = Vec::new();
        for (i, j) in pairs(d.signature().dim()) {
            let c = d.a(i, j) * scale;
            out.push(c.re);
            if let FitFamily::Default { .. } = self {
                out.push(c.im);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    pub max_iter: usize,
    pub ftol: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Initial simplex edge length.
    pub step: f64,
    pub kappa: Option<f64>,
    pub start: Option<Vec<f64>>,
    /// Evaluation settings; the deformation field is overwritten per trial.
    pub eval: EvalConfig,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iter: 2000,
            ftol: 1e-12,
            seed: 0,
            restarts: 5,
            step: 0.1,
            kappa: None,
            start: None,
            eval: EvalConfig {
                deform_mode: DeformMode::Both,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    #[serde(rename = "A")]
    pub a: Vec<Vec<JsonComplex>>,
    pub params: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective after each iteration, starting with the initial value.
    pub trace: Vec<f64>,
    #[serde(skip)]
    pub deformation: Deformation,
}

/// Σ residual² of `suite` at the deformation given by `params`.
pub struct Objective<'a> {
    suite: &'a RelationSuite,
    base: GeneratorSet,
    family: FitFamily,
    kappa: Option<f64>,
    eval: EvalConfig,
    rows: usize,
}

impl<'a> Objective<'a> {
    pub fn new(suite: &'a RelationSuite, family: FitFamily, cfg: &FitConfig) -> Result<Self> {
        let kappa = cfg.kappa.or_else(|| suite.parameters.get("kappa").copied());
        let base = generator_set(suite.basis, kappa)?;
        Ok(Objective {
            suite,
            base,
            family,
            kappa,
            eval: cfg.eval.clone(),
            rows: suite.row_count(),
        })
    }

    pub fn signature(&self) -> Arc<Signature> {
        self.base.signature()
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        let penalty = ERROR_PENALTY * self.rows.max(1) as f64;
        let Ok(d) = self
            .family
            .deformation(&self.signature(), params, self.kappa)
        else {
            return penalty;
        };
        let cfg = EvalConfig {
            deformation: Some(d),
            ..self.eval.clone()
        };
        let Ok(env) = Env::from_generators(self.base.clone(), cfg) else {
            return penalty;
        };
        rows_with(self.suite, &env, false)
            .iter()
            .map(|r| match r.residual {
                Some(x) if x.is_finite() => x * x,
                _ => ERROR_PENALTY,
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<f64>,
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.iter().map(|&i| self.points[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Nelder–Mead simplex descent with random restarts around the incumbent.
/// Iterations are counted across restarts; the trace holds the best value
/// seen so far and is therefore non-increasing.
pub fn minimize(f: impl Fn(&[f64]) -> f64, x0: &[f64], cfg: &FitConfig) -> Minimum {
    let m = x0.len();
    let mut best_x = x0.to_vec();
    let mut best_f = f(x0);
    let mut trace = vec![best_f];
    if best_f == 0.0 || m == 0 {
        return Minimum {
            x: best_x,
            value: best_f,
            iterations: 0,
            converged: true,
            trace,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut iterations = 0;
    let mut converged = false;
    for restart in 0..=cfg.restarts {
        if iterations >= cfg.max_iter || best_f == 0.0 {
            break;
        }
        let step = cfg.step
            * if restart == 0 {
                1.0
            } else {
                0.5f64.powi(restart as i32)
            };
        let mut points = vec![best_x.clone()];
        for k in 0..m {
            let mut p = best_x.clone();
            p[k] += if restart == 0 {
                step
            } else {
                step * rng.gen_range(0.5..1.5) * if rng.gen() { 1.0 } else { -1.0 }
            };
            points.push(p);
        }
        let values = points.iter().map(|p| f(p)).collect();
        let mut s = Simplex { points, values };
        converged = false;
        while iterations < cfg.max_iter {
            s.sort();
            let (lo, hi) = (s.values[0], s.values[m]);
            if lo < best_f {
                best_f = lo;
                best_x = s.points[0].clone();
            }
            if best_f == 0.0
                || (hi - lo).abs() <= cfg.ftol * (hi.abs() + lo.abs()) + f64::MIN_POSITIVE
            {
                converged = true;
                break;
            }
            iterations += 1;
            let centroid: Vec<f64> = (0..m)
                .map(|k| s.points[..m].iter().map(|p| p[k]).sum::<f64>() / m as f64)
                .collect();
            let worst = s.points[m].clone();
            let xr = affine(&centroid, &worst, -1.0);
            let fr = f(&xr);
            if fr < s.values[0] {
                let xe = affine(&centroid, &worst, -2.0);
                let fe = f(&xe);
                if fe < fr {
                    s.points[m] = xe;
                    s.values[m] = fe;
                } else {
                    s.points[m] = xr;
                    s.values[m] = fr;
                }
            } else if fr < s.values[m - 1] {
                s.points[m] = xr;
                s.values[m] = fr;
            } else {
                let (xc, fc) = if fr < s.values[m] {
                    let xc = affine(&centroid, &xr, 0.5);
                    let fc = f(&xc);
                    (xc, fc)
                } else {
                    let xc = affine(&centroid, &worst, 0.5);
                    let fc = f(&xc);
                    (xc, fc)
                };
                if fc < s.values[m].min(fr) {
                    s.points[m] = xc;
                    s.values[m] = fc;
                } else {
                    let x0 = s.points[0].clone();
                    for k in 1..=m {
                        s.points[k] = affine(&x0, &s.points[k], 0.5);
                        s.values[k] = f(&s.points[k]);
                    }
                }
            }
            let cur = s.values.iter().copied().fold(f64::INFINITY, f64::min);
            if cur < best_f {
                let k = s
                    .values
                    .iter()
                    .position(|&v| v == cur)
                    .expect("minimum is present");
                best_f = cur;
                best_x = s.points[k].clone();
            }
            trace.push(best_f);
        }
    }
    Minimum {
        x: best_x,
        value: best_f,
        iterations,
        converged,
        trace,
    }
}

/// Searches `A` in `family` minimizing the suite's sum of squared residuals.
pub fn fit(suite: &RelationSuite, family: FitFamily, cfg: &FitConfig) -> Result<FitResult> {
    let obj = Objective::new(suite, family, cfg)?;
    let sig = obj.signature();
    let m = family.param_count(sig.dim());
    let x0 = match &cfg.start {
        Some(s) if s.len() != m => {
            return Err(Error::BadFamily(format!(
                "start point has {} parameters, expected {m}",
                s.len()
            )))
        }
        Some(s) => s.clone(),
        None => vec![0.0; m],
    };
    let min = minimize(|p| obj.value(p), &x0, cfg);
    let deformation = family.deformation(&sig, &min.x, obj.kappa)?;
    Ok(FitResult {
        a: deformation.to_spec().a,
        params: min.x,
        objective: min.value,
        iterations: min.iterations,
        converged: min.converged,
        trace: min.trace,
        deformation,
    })
}

/// Suite whose rows `γ_m γ_n = …` (m ≠ n) hold exactly for the `B`-product
/// of `d` on `Cl(1,3)`. Fit it with [`DeformMode::Product`]; the right-hand
/// sides are wedge-written and do not move with the trial `A`.
pub fn synthetic_suite(d: &Deformation) -> Result<RelationSuite> {
    let sig = d.signature();
    if sig.diag() != Signature::cl13().diag() {
        return Err(Error::WrongSignature {
            expected: "Cl(1,3)".into(),
            found: sig.to_string(),
        });
    }
    let mut suite = RelationSuite::new("synthetic", BasisKind::Conformal);
    for m in 0..4 {
        for n in 0..4 {
            if m == n {
                continue;
            }
            let prod = bmul(
                &Multivector::basis_vector(sig, m)?,
                &Multivector::basis_vector(sig, n)?,
                d,
            )?;
            suite.push(Relation::new(
                format!("g{m}g{n}"),
                format!("{}*{}", sig.label(m), sig.label(n)),
                multivector_expr(&prod),
            ));
        }
    }
    Ok(suite)
}
