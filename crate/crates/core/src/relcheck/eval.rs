use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::{BinOp, Expr, Func};
use crate::error::{Error, Result};
use crate::hopfalg::{
    antipode, coproduct_with, counit, CoproductMode, LegProduct, ProductMode, TensorElement,
};
use crate::kappagen::{deform, generator_set, BasisKind, GeneratorSet};
use crate::mvcore::{
    format_complex, series_with, Multivector, SeriesFn, Signature, Tolerance, DEFAULT_MAX_DEGREE,
};
use crate::qdeform::{bmul, dotted_wedge_general, Deformation};

/// Where an active deformation enters evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DeformMode {
    /// `*` is the `B`-product; generators are left alone.
    Product,
    /// Generators are replaced by their Wick images; `*` stays `g`-based.
    Generators,
    /// Both of the above.
    #[default]
    Both,
}

impl DeformMode {
    pub fn name(self) -> &'static str {
        match self {
            DeformMode::Product => "product",
            DeformMode::Generators => "generators",
            DeformMode::Both => "both",
        }
    }
}

impl std::str::FromStr for DeformMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(DeformMode::Product),
            "generators" => Ok(DeformMode::Generators),
            "both" => Ok(DeformMode::Both),
            other => Err(Error::BadParameter(format!(
                "unknown deformation mode '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub deformation: Option<Deformation>,
    pub deform_mode: DeformMode,
    pub coproduct_mode: CoproductMode,
    pub tensor_mode: ProductMode,
    pub tol: Tolerance,
    pub max_series_degree: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            deformation: None,
            deform_mode: DeformMode::Both,
            coproduct_mode: CoproductMode::Grassmann,
            tensor_mode: ProductMode::Graded,
            tol: Tolerance::default(),
            max_series_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Complex64),
    Mv(Multivector),
    Tensor(TensorElement),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Mv(_) => "multivector",
            Value::Tensor(_) => "tensor",
        }
    }

    pub fn norm_max(&self) -> f64 {
        match self {
            Value::Scalar(c) => c.norm(),
            Value::Mv(m) => m.norm_max(),
            Value::Tensor(t) => t.norm_max(),
        }
    }

    pub fn into_multivector(self, env: &Env) -> Result<Multivector> {
        match self {
            Value::Scalar(c) => Ok(Multivector::scalar(env.signature(), c)),
            Value::Mv(m) => Ok(m),
            Value::Tensor(_) => Err(Error::TypeMismatch(
                "expected a multivector, got a tensor".into(),
            )),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Scalar(c) => serde_json::json!([c.re, c.im]),
            Value::Mv(m) => serde_json::Value::String(m.to_string()),
            Value::Tensor(t) => t.to_json_value(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(c) => f.write_str(&format_complex(*c)),
            Value::Mv(m) => write!(f, "{m}"),
            Value::Tensor(t) => write!(f, "{t}"),
        }
    }
}

/// Symbol table plus the product, coproduct and tensor conventions.
#[derive(Debug, Clone)]
pub struct Env {
    sig: Arc<Signature>,
    generators: Option<GeneratorSet>,
    bindings: IndexMap<String, Value>,
    product_deformation: Option<Deformation>,
    kappa: Option<f64>,
    cfg: EvalConfig,
}

impl Env {
    /// Basis labels, `i`, `g..`/`lc..` constants and `kappa` only.
    pub fn bare(sig: &Arc<Signature>, kappa: Option<f64>, cfg: EvalConfig) -> Result<Env> {
        let product_deformation = match (&cfg.deformation, cfg.deform_mode) {
            (Some(d), DeformMode::Product | DeformMode::Both) => {
                d.check_sig(sig)?;
                Some(d.clone())
            }
            _ => None,
        };
        Ok(Env {
            sig: Arc::clone(sig),
            generators: None,
            bindings: IndexMap::new(),
            product_deformation,
            kappa,
            cfg,
        })
    }

    /// Environment over a generator set. A set that already carries a
    /// deformation is used as is; otherwise `cfg.deformation` is applied per
    /// `cfg.deform_mode`.
    pub fn from_generators(set: GeneratorSet, cfg: EvalConfig) -> Result<Env> {
        let sig = set.signature();
        let kappa = set.kappa;
        let (set, product_deformation) = match (&set.deformation, &cfg.deformation) {
            (Some(d), _) => {
                let d = d.clone();
                (set, Some(d))
            }
            (None, Some(d)) => {
                d.check_sig(&sig)?;
                let set = match cfg.deform_mode {
                    DeformMode::Generators | DeformMode::Both => deform(&set, d)?,
                    DeformMode::Product => set,
                };
                let pd = match cfg.deform_mode {
                    DeformMode::Product | DeformMode::Both => Some(d.clone()),
                    DeformMode::Generators => None,
                };
                (set, pd)
            }
            (None, None) => (set, None),
        };
        Ok(Env {
            sig,
            generators: Some(set),
            bindings: IndexMap::new(),
            product_deformation,
            kappa,
            cfg,
        })
    }

    pub fn for_basis(kind: BasisKind, kappa: Option<f64>, cfg: EvalConfig) -> Result<Env> {
        Env::from_generators(generator_set(kind, kappa)?, cfg)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn config(&self) -> &EvalConfig {
        &self.cfg
    }

    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }

    pub fn generators(&self) -> Option<&GeneratorSet> {
        self.generators.as_ref()
    }

    /// Copy of the environment with another tensor sign rule.
    pub fn with_tensor_mode(&self, mode: ProductMode) -> Env {
        let mut e = self.clone();
        e.cfg.tensor_mode = mode;
        e
    }

    pub fn bind(&mut self, name: impl Into<String>, value: Value) {
        self.bindings.insert(name.into(), value);
    }

    fn product_deformation(&self) -> Option<&Deformation> {
        self.product_deformation.as_ref()
    }

    fn lookup(&self, name: &str) -> Result<Value> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if let Some(m) = self.generators.as_ref().and_then(|g| g.get(name)) {
            return Ok(Value::Mv(m.clone()));
        }
        if let Some(i) = self.sig.index_of(name) {
            return Ok(Value::Mv(Multivector::basis_vector(&self.sig, i)?));
        }
        match name {
            "i" => return Ok(Value::Scalar(Complex64::new(0.0, 1.0))),
            "kappa" => {
                return self
                    .kappa
                    .map(|k| Value::Scalar(Complex64::new(k, 0.0)))
                    .ok_or_else(|| Error::MissingParameter("kappa".into()))
            }
            _ => {}
        }
        if let Some(v) = self.constant(name) {
            return Ok(Value::Scalar(Complex64::new(v, 0.0)));
        }
        Err(Error::UnboundSymbol(name.to_string()))
    }

    /// `gMN` (metric entry) and `lcIJK…` (Levi-Civita symbol).
    fn constant(&self, name: &str) -> Option<f64> {
        let digits = |s: &str| -> Option<Vec<usize>> {
            (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
                .then(|| s.bytes().map(|b| (b - b'0') as usize).collect())
        };
        if let Some(ix) = name.strip_prefix("lc").and_then(digits) {
            let mut sign = 1.0;
            for a in 0..ix.len() {
                for b in a + 1..ix.len() {
                    if ix[a] == ix[b] {
                        return Some(0.0);
                    }
                    if ix[a] > ix[b] {
                        sign = -sign;
                    }
                }
            }
            return Some(sign);
        }
        if let Some(ix) = name.strip_prefix('g').and_then(digits) {
            if let [m, n] = ix[..] {
                if m < self.sig.dim() && n < self.sig.dim() {
                    return Some(if m == n { self.sig.metric(m) } else { 0.0 });
                }
            }
        }
        None
    }

    fn mv_product(&self, a: &Multivector, b: &Multivector) -> Result<Multivector> {
        match self.product_deformation() {
            Some(d) => bmul(a, b, d),
            None => a.gmul(b),
        }
    }

    fn tensor_of(
        &self,
        a: &Multivector,
        b: &Multivector,
        like: Option<&TensorElement>,
    ) -> Result<TensorElement> {
        let (pm, leg) = match like {
            Some(t) => (t.product_mode(), t.leg_product()),
            None => (self.cfg.tensor_mode, LegProduct::Clifford),
        };
        TensorElement::simple(a, b, Complex64::new(1.0, 0.0), pm, leg)
    }
}

fn to_mv(v: Value, env: &Env, op: &str) -> Result<Multivector> {
    match v {
        Value::Tensor(_) => Err(Error::TypeMismatch(format!(
            "'{op}' is not defined on tensors"
        ))),
        other => other.into_multivector(env),
    }
}

fn add(a: Value, b: Value, env: &Env) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
        (Value::Tensor(s), Value::Tensor(t)) => Value::Tensor(s.checked_add(&t)?),
        (Value::Tensor(_), _) | (_, Value::Tensor(_)) => {
            return Err(Error::TypeMismatch(
                "cannot add a tensor and a multivector".into(),
            ))
        }
        (x, y) => Value::Mv(
            x.into_multivector(env)?
                .checked_add(&y.into_multivector(env)?)?,
        ),
    })
}

fn neg(a: Value) -> Value {
    match a {
        Value::Scalar(x) => Value::Scalar(-x),
        Value::Mv(m) => Value::Mv(-m),
        Value::Tensor(t) => Value::Tensor(t.scale(Complex64::new(-1.0, 0.0))),
    }
}

fn scale(a: Value, c: Complex64) -> Value {
    match a {
        Value::Scalar(x) => Value::Scalar(x * c),
        Value::Mv(m) => Value::Mv(m.scale(c)),
        Value::Tensor(t) => Value::Tensor(t.scale(c)),
    }
}

fn mul(a: Value, b: Value, env: &Env) -> Result<Value> {
    let one = || Multivector::one(env.signature());
    let d = env.product_deformation();
    Ok(match (a, b) {
        (Value::Scalar(x), y) => scale(y, x),
        (x, Value::Scalar(y)) => scale(x, y),
        (Value::Mv(x), Value::Mv(y)) => Value::Mv(env.mv_product(&x, &y)?),
        (Value::Mv(x), Value::Tensor(t)) => {
            Value::Tensor(env.tensor_of(&x, &one(), Some(&t))?.tmul_in(&t, d)?)
        }
        (Value::Tensor(t), Value::Mv(y)) => {
            Value::Tensor(t.tmul_in(&env.tensor_of(&one(), &y, Some(&t))?, d)?)
        }
        (Value::Tensor(s), Value::Tensor(t)) => Value::Tensor(s.tmul_in(&t, d)?),
    })
}

fn divide(a: Value, b: Value, env: &Env) -> Result<Value> {
    let divisor = match b {
        Value::Scalar(c) => c,
        Value::Mv(m) => m
            .as_scalar(0.0)
            .ok_or_else(|| Error::TypeMismatch("division by a non-scalar".into()))?,
        Value::Tensor(_) => return Err(Error::TypeMismatch("division by a tensor".into())),
    };
    if divisor.norm() == 0.0 {
        return Err(Error::BadParameter("division by zero".into()));
    }
    let _ = env;
    Ok(scale(a, divisor.inv()))
}

fn series(f: SeriesFn, a: Value, env: &Env) -> Result<Value> {
    match a {
        Value::Scalar(x) => Ok(Value::Scalar(match f {
            SeriesFn::Exp => x.exp(),
            SeriesFn::Sinh => x.sinh(),
            SeriesFn::Cosh => x.cosh(),
        })),
        Value::Mv(m) => {
            let out = series_with(f, &m, env.cfg.max_series_degree, env.cfg.tol, |x, y| {
                env.mv_product(x, y)
            })?;
            Ok(Value::Mv(out.value))
        }
        Value::Tensor(_) => Err(Error::TypeMismatch("series of a tensor".into())),
    }
}

/// Evaluates `e`; the result is a scalar, a multivector or a tensor.
pub fn eval(e: &Expr, env: &Env) -> Result<Value> {
    match e {
        Expr::Num(c) => Ok(Value::Scalar(*c)),
        Expr::Sym(name) => env.lookup(name),
        Expr::Neg(a) => Ok(neg(eval(a, env)?)),
        Expr::Bin(op, a, b) => {
            let x = eval(a, env)?;
            let y = eval(b, env)?;
            match op {
                BinOp::Add => add(x, y, env),
                BinOp::Sub => add(x, neg(y), env),
                BinOp::Mul => mul(x, y, env),
                BinOp::Div => divide(x, y, env),
                BinOp::Tensor => {
                    let l = to_mv(x, env, "ox")?;
                    let r = to_mv(y, env, "ox")?;
                    Ok(Value::Tensor(env.tensor_of(&l, &r, None)?))
                }
                BinOp::Wedge | BinOp::DotWedge | BinOp::LContract | BinOp::RContract => {
                    let l = to_mv(x, env, op.symbol())?;
                    let r = to_mv(y, env, op.symbol())?;
                    Ok(Value::Mv(match op {
                        BinOp::Wedge => l.wedge(&r)?,
                        BinOp::DotWedge => match &env.cfg.deformation {
                            Some(d) => dotted_wedge_general(&l, &r, d)?,
                            None => l.wedge(&r)?,
                        },
                        BinOp::LContract => l.left_contract(&r)?,
                        _ => l.right_contract(&r)?,
                    }))
                }
            }
        }
        Expr::Grade(a, k) => Ok(Value::Mv(
            to_mv(eval(a, env)?, env, "grade")?.grade_project(*k)?,
        )),
        Expr::Call(func, args) => {
            let mut vals = args
                .iter()
                .map(|a| eval(a, env))
                .collect::<Result<Vec<_>>>()?;
            match func {
                Func::Comm | Func::Acomm => {
                    let y = vals.pop().expect("arity checked by the parser");
                    let x = vals.pop().expect("arity checked by the parser");
                    let xy = mul(x.clone(), y.clone(), env)?;
                    let yx = mul(y, x, env)?;
                    if *func == Func::Comm {
                        add(xy, neg(yx), env)
                    } else {
                        add(xy, yx, env)
                    }
                }
                _ => {
                    let x = vals.pop().expect("arity checked by the parser");
                    match func {
                        Func::Sinh => series(SeriesFn::Sinh, x, env),
                        Func::Cosh => series(SeriesFn::Cosh, x, env),
                        Func::Exp => series(SeriesFn::Exp, x, env),
                        Func::Eps => Ok(Value::Scalar(counit(&to_mv(x, env, "eps")?))),
                        Func::Delta => {
                            let m = to_mv(x, env, "Delta")?;
                            let d = match env.cfg.coproduct_mode {
                                CoproductMode::CliffordFormal => env.product_deformation(),
                                CoproductMode::Grassmann => None,
                            };
                            Ok(Value::Tensor(coproduct_with(
                                &m,
                                env.cfg.coproduct_mode,
                                env.cfg.tensor_mode,
                                d,
                            )?))
                        }
                        Func::S => Ok(match x {
                            Value::Scalar(c) => Value::Scalar(c),
                            other => Value::Mv(antipode(&to_mv(other, env, "S")?)),
                        }),
                        Func::Rev | Func::Gi | Func::Conj => {
                            let name = func.name();
                            Ok(match x {
                                Value::Scalar(c) => Value::Scalar(c),
                                other => {
                                    let m = to_mv(other, env, name)?;
                                    Value::Mv(match func {
                                        Func::Rev => m.reversion(),
                                        Func::Gi => m.grade_involution(),
                                        _ => m.conjugation(),
                                    })
                                }
                            })
                        }
                        Func::Comm | Func::Acomm => unreachable!("handled above"),
                    }
                }
            }
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str, env: &Env) -> Result<Value> {
    eval(&super::expr::parse(text)?, env)
}

/// `‖lhs − rhs‖_max`; a scalar compared with a tensor stands for `c·(1⊗1)`.
pub fn residual(lhs: &Value, rhs: &Value, env: &Env) -> Result<f64> {
    match (lhs, rhs) {
        (Value::Tensor(s), Value::Tensor(t)) => s.dist(t),
        (Value::Tensor(t), Value::Scalar(c)) | (Value::Scalar(c), Value::Tensor(t)) => {
            let unit = TensorElement::unit(t.signature(), *c, t.product_mode(), t.leg_product());
            t.dist(&unit)
        }
        (Value::Tensor(_), _) | (_, Value::Tensor(_)) => Err(Error::TypeMismatch(
            "cannot compare a tensor with a multivector".into(),
        )),
        (a, b) => a
            .clone()
            .into_multivector(env)?
            .dist(&b.clone().into_multivector(env)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Env {
        Env::for_basis(BasisKind::Conformal, None, EvalConfig::default()).unwrap()
    }

    fn zero_residual(text: &str, env: &Env) -> f64 {
        let v = eval_str(text, env).unwrap();
        residual(&v, &Value::Scalar(Complex64::new(0.0, 0.0)), env).unwrap()
    }

    #[test]
    fn spec_examples() {
        let e = env();
        assert_eq!(zero_residual("comm(P0,P1)", &e), 0.0);
        assert!(zero_residual("comm(P0,K0) - 2*D", &e) < 1e-15);
        let s = eval_str("S(gamma1^gamma2)", &e).unwrap();
        assert_eq!(s, eval_str("gamma1^gamma2", &e).unwrap());
    }

    #[test]
    fn constants() {
        let e = env();
        assert_eq!(
            eval_str("g00", &e).unwrap(),
            Value::Scalar(Complex64::new(1.0, 0.0))
        );
        assert_eq!(
            eval_str("g11", &e).unwrap(),
            Value::Scalar(Complex64::new(-1.0, 0.0))
        );
        assert_eq!(
            eval_str("g12", &e).unwrap(),
            Value::Scalar(Complex64::new(0.0, 0.0))
        );
        assert_eq!(
            eval_str("lc213", &e).unwrap(),
            Value::Scalar(Complex64::new(-1.0, 0.0))
        );
        assert_eq!(
            eval_str("lc113", &e).unwrap(),
            Value::Scalar(Complex64::new(0.0, 0.0))
        );
        assert_eq!(
            eval_str("kappa", &e),
            Err(Error::MissingParameter("kappa".into()))
        );
        assert_eq!(
            eval_str("nope", &e),
            Err(Error::UnboundSymbol("nope".into()))
        );
        assert_eq!(eval_str("g45", &e), Err(Error::UnboundSymbol("g45".into())));
    }

    #[test]
    fn type_errors() {
        let e = env();
        assert!(matches!(
            eval_str("(P0 ox P1) ^ P2", &e),
            Err(Error::TypeMismatch(_))
        ));
        assert!(matches!(
            eval_str("P0 ox P1 + P2", &e),
            Err(Error::TypeMismatch(_))
        ));
        assert!(matches!(
            eval_str("P0 / P1", &e),
            Err(Error::TypeMismatch(_))
        ));
        assert!(matches!(
            eval_str("P0 / 0", &e),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            eval_str("exp(40*gamma0)", &e),
            Err(Error::SeriesNotConverged { .. })
        ));
    }

    #[test]
    fn tensors_and_coproducts() {
        let e = env();
        let d = eval_str("Delta(gamma1^gamma2)", &e).unwrap();
        let by_hand = eval_str(
            "(gamma1 ^ gamma2) ox 1 + gamma1 ox gamma2 - gamma2 ox gamma1 + 1 ox (gamma1 ^ gamma2)",
            &e,
        )
        .unwrap();
        assert_eq!(residual(&d, &by_hand, &e).unwrap(), 0.0);
        let t = eval_str("gamma0 * (gamma1 ox 1)", &e).unwrap();
        let u = eval_str("(gamma0 * gamma1) ox 1", &e).unwrap();
        assert_eq!(residual(&t, &u, &e).unwrap(), 0.0);
        let t = eval_str("(1 ox gamma1) * gamma2", &e).unwrap();
        let u = eval_str("1 ox gamma1 * gamma2", &e).unwrap();
        assert_eq!(residual(&t, &u, &e).unwrap(), 0.0);
        assert_eq!(
            eval_str("eps(3 + gamma0)", &e).unwrap(),
            Value::Scalar(Complex64::new(3.0, 0.0))
        );
    }

    #[test]
    fn residual_is_symmetric() {
        let e = env();
        let a = eval_str("P0 + 2", &e).unwrap();
        let b = eval_str("K1", &e).unwrap();
        assert_eq!(residual(&a, &b, &e).unwrap(), residual(&b, &a, &e).unwrap());
    }

    #[test]
    fn deformed_product_mode_uses_b() {
        let s = Signature::cl13();
        let d = Deformation::from_upper(&s, &[((0, 1), Complex64::new(0.25, 0.0))]).unwrap();
        let cfg = EvalConfig {
            deformation: Some(d),
            deform_mode: DeformMode::Product,
            ..Default::default()
        };
        let e = Env::for_basis(BasisKind::Conformal, None, cfg).unwrap();
        let v = eval_str("gamma0 * gamma1 - gamma0 ^ gamma1", &e).unwrap();
        assert!(residual(&v, &Value::Scalar(Complex64::new(0.25, 0.0)), &e).unwrap() < 1e-15);
    }
}
