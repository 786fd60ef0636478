use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::paravector::{embed_point, require_cl30, Paravector};
use crate::error::{Error, Result};
use crate::mvcore::{Multivector, Signature, Tolerance};
use crate::qdeform::Matrix2;

/// `g = [[a, c], [b, d]]` over `Cl(3,0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VahlenMatrix {
    pub a: Multivector,
    pub b: Multivector,
    pub c: Multivector,
    pub d: Multivector,
}

impl VahlenMatrix {
    pub fn new(a: Multivector, b: Multivector, c: Multivector, d: Multivector) -> Result<Self> {
        require_cl30(a.signature())?;
        for x in [&b, &c, &d] {
            crate::mvcore::check_same(a.signature(), x.signature())?;
        }
        Ok(VahlenMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self::from_matrix(Matrix2::identity(&Signature::cl30())).expect("Cl(3,0)")
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.a.signature()
    }

    pub fn to_matrix(&self) -> Matrix2 {
        Matrix2::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    pub fn from_matrix(m: Matrix2) -> Result<Self> {
        let [[a, c], [b, d]] = m.entries;
        VahlenMatrix::new(a, b, c, d)
    }

    pub fn mul(&self, other: &VahlenMatrix) -> Result<VahlenMatrix> {
        Self::from_matrix(self.to_matrix().gmul(&other.to_matrix())?)
    }

    pub fn neg(&self) -> VahlenMatrix {
        VahlenMatrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// `[[d̄, c̄], [b̄, ā]]`, the right factor of the twisted adjoint action.
    pub fn bar_block(&self) -> Matrix2 {
        Matrix2::new(
            self.d.conjugation(),
            self.c.conjugation(),
            self.b.conjugation(),
            self.a.conjugation(),
        )
    }
}

/// Residuals of the six Vahlen conditions and their verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VahlenConditions {
    pub residuals: [f64; 6],
    pub tol: f64,
}

impl VahlenConditions {
    pub fn passed(&self) -> [bool; 6] {
        self.residuals.map(|r| r <= self.tol)
    }

    pub fn all(&self) -> bool {
        self.passed().iter().all(|&b| b)
    }

    /// Names of failed conditions, e.g. `["vi"]`.
    pub fn failures(&self) -> Vec<&'static str> {
        const NAMES: [&str; 6] = ["i", "ii", "iii", "iv", "v", "vi"];
        self.passed()
            .iter()
            .zip(NAMES)
            .filter(|(ok, _)| !**ok)
            .map(|(_, n)| n)
            .collect()
    }
}

/// Distance from the real scalars.
fn off_real(x: &Multivector) -> f64 {
    x.terms()
        .map(|(m, c)| if m == 0 { c.im.abs() } else { c.norm() })
        .fold(0.0, f64::max)
}

/// Distance from real paravectors.
fn off_paravector(x: &Multivector) -> f64 {
    x.terms()
        .map(|(m, c)| {
            if m.count_ones() <= 1 {
                c.im.abs()
            } else {
                c.norm()
            }
        })
        .fold(0.0, f64::max)
}

/// Evaluates the six conditions; (iii) and (iv) are tested on `trial`
/// together with the basis paravectors `1, e1, e2, e3`.
pub fn vahlen_check(
    g: &VahlenMatrix,
    trial: &[Paravector],
    tol: Tolerance,
) -> Result<VahlenConditions> {
    let sig = g.signature();
    let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
    let bar = |x: &Multivector| x.conjugation();
    let rev = |x: &Multivector| x.reversion();
    let mut vs: Vec<Multivector> = trial.iter().map(|v| v.as_multivector().clone()).collect();
    for coords in [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ] {
        vs.push(Paravector::on(sig, coords).into_multivector());
    }
    for v in &vs {
        require_cl30(v.signature())?;
    }

    let mut r = [0.0f64; 6];
    for x in [a, b, c, d] {
        r[0] = r[0].max(off_real(&x.gmul(&bar(x))?));
    }
    r[1] = off_paravector(&a.gmul(&bar(b))?).max(off_paravector(&c.gmul(&bar(d))?));
    for v in &vs {
        let vb = bar(v);
        let t1 = a.gmul(v)?.gmul(&bar(c))? + c.gmul(&vb)?.gmul(&bar(a))?;
        let t2 = c.gmul(v)?.gmul(&bar(d))? + d.gmul(&vb)?.gmul(&bar(c))?;
        r[2] = r[2].max(off_real(&t1)).max(off_real(&t2));
        let t3 = a.gmul(v)?.gmul(&bar(d))? + c.gmul(&vb)?.gmul(&bar(b))?;
        r[3] = r[3].max(off_paravector(&t3));
    }
    r[4] = a
        .gmul(&rev(c))?
        .dist(&c.gmul(&rev(a))?)?
        .max(b.gmul(&rev(d))?.dist(&d.gmul(&rev(b))?)?);
    r[5] = (a.gmul(&rev(d))? - c.gmul(&rev(b))?).dist(&Multivector::one(sig))?;
    Ok(VahlenConditions {
        residuals: r,
        tol: tol.eq_tol,
    })
}

/// The five conformal map families.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Translation(Paravector),
    Dilation(f64),
    /// `(g, ĝ)` supplied explicitly.
    Rotation {
        g: Multivector,
        g_hat: Multivector,
    },
    Inversion,
    Transvection(Paravector),
}

pub fn make_map(kind: &MapKind) -> Result<VahlenMatrix> {
    let sig = Signature::cl30();
    let one = || Multivector::one(&sig);
    let zero = || Multivector::zero(&sig);
    match kind {
        MapKind::Translation(h) => {
            VahlenMatrix::new(one(), zero(), h.as_multivector().clone(), one())
        }
        MapKind::Dilation(rho) => {
            if *rho <= 0.0 || !rho.is_finite() {
                return Err(Error::BadParameter(format!(
                    "dilation factor must be positive, got {rho}"
                )));
            }
            let s = rho.sqrt();
            VahlenMatrix::new(
                Multivector::scalar(&sig, s),
                zero(),
                zero(),
                Multivector::scalar(&sig, 1.0 / s),
            )
        }
        MapKind::Rotation { g, g_hat } => {
            if g.grades().iter().any(|k| k % 2 == 1) || g_hat.grades().iter().any(|k| k % 2 == 1) {
                return Err(Error::BadParameter("rotation blocks must be even".into()));
            }
            VahlenMatrix::new(
                g.clone(),
                Multivector::zero(g.signature()),
                Multivector::zero(g.signature()),
                g_hat.clone(),
            )
        }
        MapKind::Inversion => VahlenMatrix::new(zero(), one(), -&one(), zero()),
        MapKind::Transvection(h) => {
            VahlenMatrix::new(one(), h.as_multivector().clone(), zero(), one())
        }
    }
}

/// `exp(−θ/2 · e_i e_j)` as a rotation block pair; rotates `e_i` toward `e_j`.
pub fn rotor(i: usize, j: usize, theta: f64) -> Result<MapKind> {
    let sig = Signature::cl30();
    let plane = Multivector::blade(&sig, &[i, j], 1.0)?;
    let g = &Multivector::scalar(&sig, (theta / 2.0).cos()) - &plane.scale((theta / 2.0).sin());
    Ok(MapKind::Rotation {
        g_hat: g.grade_involution(),
        g,
    })
}

/// JSON map description, e.g. `{"kind":"dilation","rho":4}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MapSpec {
    Translation {
        h: [f64; 4],
    },
    Dilation {
        rho: f64,
    },
    /// Blocks as `{"1": 0.8, "e1^e2": -0.6}`; `g_hat` defaults to `ĝ`.
    Rotation {
        g: BTreeMap<String, f64>,
        #[serde(default)]
        g_hat: Option<BTreeMap<String, f64>>,
    },
    Inversion,
    Transvection {
        h: [f64; 4],
    },
}

fn blade_from_label(sig: &Arc<Signature>, label: &str, c: f64) -> Result<Multivector> {
    let label = label.trim();
    if label == "1" {
        return Ok(Multivector::scalar(sig, c));
    }
    let mut idx = Vec::new();
    for part in label.split('^') {
        let part = part.trim();
        idx.push(
            sig.index_of(part)
                .ok_or_else(|| Error::BadParameter(format!("unknown basis label '{part}'")))?,
        );
    }
    Multivector::blade(sig, &idx, c)
}

fn block(sig: &Arc<Signature>, entries: &BTreeMap<String, f64>) -> Result<Multivector> {
    let mut out = Multivector::zero(sig);
    for (label, c) in entries {
        out += &blade_from_label(sig, label, *c)?;
    }
    Ok(out)
}

impl MapSpec {
    pub fn to_kind(&self) -> Result<MapKind> {
        let sig = Signature::cl30();
        Ok(match self {
            MapSpec::Translation { h } => MapKind::Translation(Paravector::on(&sig, *h)),
            MapSpec::Dilation { rho } => MapKind::Dilation(*rho),
            MapSpec::Rotation { g, g_hat } => {
                let g = block(&sig, g)?;
                let g_hat = match g_hat {
                    Some(h) => block(&sig, h)?,
                    None => g.grade_involution(),
                };
                MapKind::Rotation { g, g_hat }
            }
            MapSpec::Inversion => MapKind::Inversion,
            MapSpec::Transvection { h } => MapKind::Transvection(Paravector::on(&sig, *h)),
        })
    }

    pub fn build(&self) -> Result<VahlenMatrix> {
        make_map(&self.to_kind()?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobiusResult {
    pub x_prime: Paravector,
    pub delta: f64,
}

/// Paravector-type inverse `ȳ / (yȳ)`; fails when `yȳ` is not a nonzero
/// real scalar.
fn inverse(y: &Multivector, tol: Tolerance) -> Result<(Multivector, f64)> {
    let yy = y.gmul(&y.conjugation())?;
    let delta = yy.scalar_part();
    let scale = 1.0 + y.norm_max() * y.norm_max();
    if off_real(&yy) > tol.eq_tol * scale {
        return Err(Error::ConditionsViolated(format!(
            "(bx+d) times its conjugate is not real: {yy}"
        )));
    }
    if delta.re.abs() <= tol.eq_tol {
        return Err(Error::PointAtInfinity(delta.re.abs()));
    }
    Ok((y.conjugation().scale(1.0 / delta.re), delta.re))
}

/// `x' = (ax + c)(bx + d)^{-1}`, `Δ = (bx + d)(overline(bx + d))`.
pub fn mobius(g: &VahlenMatrix, x: &Paravector, tol: Tolerance) -> Result<MobiusResult> {
    crate::mvcore::check_same(g.signature(), x.signature())?;
    let xm = x.as_multivector();
    let y = g.b.gmul(xm)? + g.d.clone();
    let (y_inv, delta) = inverse(&y, tol)?;
    let xp = (g.a.gmul(xm)? + g.c.clone()).gmul(&y_inv)?;
    let higher = xp
        .terms()
        .filter(|(m, _)| m.count_ones() > 1)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    if higher > 1e-9 * (1.0 + xp.norm_max()) {
        return Err(Error::ConditionsViolated(format!(
            "image is not a paravector: {xp}"
        )));
    }
    let xp = Multivector::from_terms(
        xp.signature(),
        xp.terms()
            .filter(|(m, _)| m.count_ones() <= 1)
            .collect::<Vec<_>>(),
    );
    Ok(MobiusResult {
        x_prime: Paravector::new(xp)?,
        delta,
    })
}

/// `g · m · [[d̄, c̄], [b̄, ā]]`; for embedded points this equals
/// `Δ · embed_point(x')`.
pub fn twisted_adjoint(g: &VahlenMatrix, m: &Matrix2, tol: Tolerance) -> Result<Matrix2> {
    let cond = vahlen_check(g, &[], tol)?;
    if !cond.all() {
        return Err(Error::ConditionsViolated(format!(
            "failed {:?}",
            cond.failures()
        )));
    }
    crate::mvcore::check_same(g.signature(), m.signature())?;
    g.to_matrix().gmul(m)?.gmul(&g.bar_block())
}

/// Sandwich form of the action on an embedded point.
pub fn act_on_point(g: &VahlenMatrix, x: &Paravector, tol: Tolerance) -> Result<Matrix2> {
    twisted_adjoint(g, &embed_point(x), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conformality {
    pub lambda: f64,
    pub residual: f64,
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const STEP_RESIDUAL_LIMIT: f64 = 1e-2;

/// Central-difference Jacobian `J` of `x ↦ x'`; returns `λ = (JᵀηJ)_00` and
/// `‖JᵀηJ − λη‖_max` with `η = diag(1, −1, −1, −1)`.
pub fn conformality(
    g: &VahlenMatrix,
    x: &Paravector,
    h: f64,
    tol: Tolerance,
) -> Result<Conformality> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::BadParameter(format!(
            "step must be positive, got {h}"
        )));
    }
    let sig = x.signature();
    let base = x.coords();
    mobius(g, x, tol)?;
    let mut jac = [[0.0f64; 4]; 4];
    for j in 0..4 {
        let mut up = base;
        let mut down = base;
        up[j] += h;
        down[j] -= h;
        let fu = mobius(g, &Paravector::on(sig, up), tol)?.x_prime.coords();
        let fd = mobius(g, &Paravector::on(sig, down), tol)?.x_prime.coords();
        for i in 0..4 {
            jac[i][j] = (fu[i] - fd[i]) / (2.0 * h);
        }
    }
    let eta = [1.0, -1.0, -1.0, -1.0];
    let mut m = [[0.0f64; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            m[r][c] = (0..4).map(|k| jac[k][r] * eta[k] * jac[k][c]).sum();
        }
    }
    let lambda = m[0][0];
    let mut residual = 0.0f64;
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let target = if r == c { lambda * eta[r] } else { 0.0 };
            residual = residual.max((v - target).abs());
        }
    }
    if residual > STEP_RESIDUAL_LIMIT {
        return Err(Error::StepTooLarge(residual));
    }
    Ok(Conformality { lambda, residual })
}

impl From<Paravector> for Multivector {
    fn from(p: Paravector) -> Self {
        p.into_multivector()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn p(c: [f64; 4]) -> Paravector {
        Paravector::from_coords(c)
    }

    #[test]
    fn identity_and_translation_pass_all_conditions() {
        let id = VahlenMatrix::identity();
        assert!(vahlen_check(&id, &[], tol()).unwrap().all());
        let t = make_map(&MapKind::Translation(p([0.0, 1.0, 0.0, 0.0]))).unwrap();
        assert!(vahlen_check(&t, &[p([0.2, 0.1, -0.3, 0.7])], tol())
            .unwrap()
            .all());
    }

    #[test]
    fn degenerate_block_fails_only_the_determinant_condition() {
        let s = Signature::cl30();
        let e1 = Multivector::basis_vector(&s, 0).unwrap();
        let z = Multivector::zero(&s);
        let g = VahlenMatrix::new(e1, z.clone(), z.clone(), z).unwrap();
        let cond = vahlen_check(&g, &[], tol()).unwrap();
        assert_eq!(cond.failures(), vec!["vi"]);
    }

    #[test]
    fn constructors() {
        let s = Signature::cl30();
        let dil = make_map(&MapKind::Dilation(4.0)).unwrap();
        assert_eq!(
            dil.to_matrix(),
            Matrix2::scalars(&s, [[2.0, 0.0], [0.0, 0.5]])
        );
        let inv = make_map(&MapKind::Inversion).unwrap();
        assert_eq!(
            inv.to_matrix(),
            Matrix2::scalars(&s, [[0.0, -1.0], [1.0, 0.0]])
        );
        assert!(make_map(&MapKind::Dilation(0.0)).is_err());
        assert!(make_map(&MapKind::Dilation(-2.0)).is_err());
        let t1 = make_map(&MapKind::Translation(p([0.0, 1.0, 0.0, 0.0]))).unwrap();
        let t2 = make_map(&MapKind::Translation(p([0.0, 0.0, 1.0, 0.0]))).unwrap();
        let t12 = make_map(&MapKind::Translation(p([0.0, 1.0, 1.0, 0.0]))).unwrap();
        assert_eq!(t1.mul(&t2).unwrap(), t12);
    }

    #[test]
    fn mobius_examples() {
        let dil = make_map(&MapKind::Dilation(4.0)).unwrap();
        let r = mobius(&dil, &p([1.0, 0.0, 0.0, 0.0]), tol()).unwrap();
        assert_eq!(r.x_prime.coords(), [4.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.delta, 0.25);

        let inv = make_map(&MapKind::Inversion).unwrap();
        let r = mobius(&inv, &p([0.0, 1.0, 0.0, 0.0]), tol()).unwrap();
        assert_eq!(r.x_prime.coords(), [0.0, -1.0, 0.0, 0.0]);
        assert!(matches!(
            mobius(&inv, &p([1.0, 1.0, 0.0, 0.0]), tol()),
            Err(Error::PointAtInfinity(_))
        ));
    }

    #[test]
    fn sandwich_matches_delta_times_embedded_image() {
        let x = p([0.4, -0.2, 0.9, 0.1]);
        for kind in [
            MapKind::Translation(p([0.3, 0.1, -0.5, 0.2])),
            MapKind::Dilation(2.5),
            MapKind::Inversion,
            MapKind::Transvection(p([0.1, 0.2, 0.0, -0.3])),
            rotor(0, 1, 0.7).unwrap(),
        ] {
            let g = make_map(&kind).unwrap();
            let r = mobius(&g, &x, tol()).unwrap();
            let lhs = act_on_point(&g, &x, tol()).unwrap();
            let rhs = embed_point(&r.x_prime).scale(r.delta);
            assert!(lhs.dist(&rhs).unwrap() < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn conformality_of_dilation() {
        let g = make_map(&MapKind::Dilation(3.0)).unwrap();
        let c = conformality(&g, &p([0.3, 0.2, -0.1, 0.5]), DEFAULT_FD_STEP, tol()).unwrap();
        assert!((c.lambda - 9.0).abs() < 1e-8);
        assert!(c.residual < 1e-8);
        assert!(conformality(&g, &p([0.0; 4]), 0.0, tol()).is_err());
    }

    #[test]
    fn map_spec_json() {
        let spec: MapSpec = serde_json::from_str(r#"{"kind":"dilation","rho":4}"#).unwrap();
        assert_eq!(spec, MapSpec::Dilation { rho: 4.0 });
        let rot: MapSpec =
            serde_json::from_str(r#"{"kind":"rotation","g":{"1":0.6,"e1^e2":0.8}}"#).unwrap();
        let g = rot.build().unwrap();
        assert!(vahlen_check(&g, &[], tol()).unwrap().all());
        assert!(serde_json::from_str::<MapSpec>(r#"{"kind":"shear"}"#).is_err());
    }
}
