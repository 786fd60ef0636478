use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mvcore::{Multivector, Signature};
use crate::qdeform::{wick, Deformation, WickDirection};
use crate::relcheck::{eval, parse, Env};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    #[default]
    Conformal,
    Kappa,
    #[serde(rename = "ringK")]
    RingK,
    Bicross,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Conformal => "conformal",
            BasisKind::Kappa => "kappa",
            BasisKind::RingK => "ringK",
            BasisKind::Bicross => "bicross",
        }
    }

    pub fn needs_kappa(self) -> bool {
        matches!(self, BasisKind::Kappa | BasisKind::RingK)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conformal" => Ok(BasisKind::Conformal),
            "kappa" => Ok(BasisKind::Kappa),
            "ringK" | "ringk" => Ok(BasisKind::RingK),
            "bicross" => Ok(BasisKind::Bicross),
            other => Err(Error::BadParameter(format!("unknown basis '{other}'"))),
        }
    }
}

/// Named generators over complexified `Cl(1,3)`. When `deformation` is set
/// the elements are Wick images and products are meant in `Cl(V, B)`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub basis_kind: BasisKind,
    pub kappa: Option<f64>,
    pub generators: IndexMap<String, Multivector>,
    pub deformation: Option<Deformation>,
}

impl GeneratorSet {
    pub fn signature(&self) -> Arc<Signature> {
        self.generators
            .values()
            .next()
            .map(|m| Arc::clone(m.signature()))
            .unwrap_or_else(Signature::cl13)
    }

    pub fn get(&self, name: &str) -> Option<&Multivector> {
        self.generators.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `γ_5 = γ_0123`.
pub fn gamma5(sig: &Arc<Signature>) -> Multivector {
    Multivector::blade(sig, &[0, 1, 2, 3], 1.0).expect("four-dimensional signature")
}

/// `X = γ_0(1 + iγ_5)`; `X² = 0`.
pub fn nilpotent_arg() -> Multivector {
    let s = Signature::cl13();
    let g0 = Multivector::basis_vector(&s, 0).expect("gamma0");
    let proj = &Multivector::one(&s) + &gamma5(&s).scale(c(0.0, 1.0));
    g0.gmul(&proj).expect("same signature")
}

/// `P_μ = ½(γ_μ + iγ_μγ_5)`, `K_μ = −½(γ_μ − iγ_μγ_5)`, `D = ½iγ_5`,
/// `M_μν = ½ γ_μ∧γ_ν`, plus `gamma5`.
pub fn conformal_generators() -> GeneratorSet {
    let s = Signature::cl13();
    let g5 = gamma5(&s);
    let gamma: Vec<Multivector> = (0..4)
        .map(|m| Multivector::basis_vector(&s, m).expect("gamma"))
        .collect();
    let mut map = IndexMap::new();
    for (mu, g) in gamma.iter().enumerate() {
        let gg5 = g.gmul(&g5).expect("same signature").scale(c(0.0, 1.0));
        map.insert(format!("P{mu}"), (g + &gg5).scale(0.5));
    }
    for (mu, g) in gamma.iter().enumerate() {
        let gg5 = g.gmul(&g5).expect("same signature").scale(c(0.0, 1.0));
        map.insert(format!("K{mu}"), (g - &gg5).scale(-0.5));
    }
    map.insert("D".to_string(), g5.scale(c(0.0, 0.5)));
    for mu in 0..4 {
        for nu in 0..4 {
            let m = gamma[mu]
                .wedge(&gamma[nu])
                .expect("same signature")
                .scale(0.5);
            map.insert(format!("M{mu}{nu}"), m);
        }
    }
    map.insert("gamma5".to_string(), g5);
    GeneratorSet {
        basis_kind: BasisKind::Conformal,
        kappa: None,
        generators: map,
        deformation: None,
    }
}

/// Definitions of the named combinations, in evaluation order.
const KAPPA_DEFINITIONS: &[(&str, &str)] = &[
    ("K1", "M10"),
    ("K2", "M20"),
    ("K3", "M30"),
    ("Kp", "K1 + i*K2"),
    ("Km", "K1 - i*K2"),
    ("Mp", "M23 + i*M31"),
    ("Mm", "M23 - i*M31"),
    ("Pp", "P2 + i*P1"),
    ("Pm", "P2 + i*P1"),
    ("M1", "M23"),
    ("M2", "M31"),
    ("M3", "M12"),
    (
        "RK3",
        "1/2*gamma3*gamma0 - i/(16*kappa)*gamma3*(1 - 4i + gamma1*gamma2)*(1 + i*gamma5)",
    ),
    (
        "RKp",
        "1/2*(i*gamma0 + 1/(2*kappa)*(1 - i/4))*1/2*(1 + i*gamma5)*(gamma1 + i*gamma2)",
    ),
    (
        "RKm",
        "1/2*(i*gamma0 + 1/(2*kappa)*(-1 - i/4))*1/2*(1 - i*gamma5)*(gamma1 - i*gamma2)",
    ),
    ("RK1", "(RKp + RKm)/2"),
    ("RK2", "(RKp - RKm)/(2*i)"),
];

/// κ-Poincaré generators: conformal `P_μ`, `D`, `M_μν`; boosts
/// `K_i = M_i0`; `K±`, `M±`, `P±`; `M_j = ½ε_jkl M_kl`; and the `K̊` basis
/// (`RK1..RK3`, `RKp`, `RKm`).
pub fn kappa_generators(kind: BasisKind, kappa: f64) -> Result<GeneratorSet> {
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::BadParameter(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let base = conformal_generators();
    let mut map: IndexMap<String, Multivector> = base
        .generators
        .into_iter()
        .filter(|(name, _)| !name.starts_with('K'))
        .collect();
    for (name, text) in KAPPA_DEFINITIONS {
        let set = GeneratorSet {
            basis_kind: kind,
            kappa: Some(kappa),
            generators: map.clone(),
            deformation: None,
        };
        let env = Env::from_generators(set, Default::default())?;
        let value = eval(&parse(text)?, &env)?.into_multivector(&env)?;
        map.insert((*name).to_string(), value);
    }
    Ok(GeneratorSet {
        basis_kind: kind,
        kappa: Some(kappa),
        generators: map,
        deformation: None,
    })
}

/// Generator set for a basis; `kappa` is required for the κ bases.
pub fn generator_set(kind: BasisKind, kappa: Option<f64>) -> Result<GeneratorSet> {
    match kind {
        BasisKind::Conformal | BasisKind::Bicross => {
            let mut set = conformal_generators();
            set.basis_kind = kind;
            set.kappa = kappa;
            Ok(set)
        }
        BasisKind::Kappa | BasisKind::RingK => {
            let kappa = kappa.ok_or_else(|| Error::MissingParameter("kappa".into()))?;
            kappa_generators(kind, kappa)
        }
    }
}

/// Applies `W_A` to every generator of `set` and marks it for evaluation with
/// the `B`-product.
pub fn deform(set: &GeneratorSet, d: &Deformation) -> Result<GeneratorSet> {
    let mut generators = IndexMap::with_capacity(set.len());
    for (name, value) in &set.generators {
        generators.insert(name.clone(), wick(d, WickDirection::Forward, value)?);
    }
    Ok(GeneratorSet {
        basis_kind: set.basis_kind,
        kappa: set.kappa,
        generators,
        deformation: Some(d.clone()),
    })
}

/// Wick images of the conformal generators, to be multiplied with `∘_B`.
pub fn deformed_generators(kappa: f64, d: &Deformation) -> Result<GeneratorSet> {
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::BadParameter(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let mut set = conformal_generators();
    set.kappa = Some(kappa);
    deform(&set, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcore::{series_apply, SeriesFn, Tolerance};

    #[test]
    fn conformal_set_has_fifteen_independent_generators() {
        let set = conformal_generators();
        let s = set.signature();
        let mut count = 0;
        for name in set.names() {
            let is_m = name.starts_with('M') && name.as_bytes()[1] < name.as_bytes()[2];
            if name.len() == 2 || name == "D" || is_m {
                count += 1;
            }
        }
        assert_eq!(count, 15);
        assert_eq!(set.get("D").unwrap(), &gamma5(&s).scale(c(0.0, 0.5)));
        assert!(set.get("M00").unwrap().is_empty());
    }

    #[test]
    fn p0_squares_to_zero_and_p0_k0_bracket_is_2d() {
        let set = conformal_generators();
        let p0 = set.get("P0").unwrap();
        let k0 = set.get("K0").unwrap();
        assert!(p0.gmul(p0).unwrap().is_empty());
        let br = p0.commutator(k0).unwrap();
        assert!(br.dist(&set.get("D").unwrap().scale(2.0)).unwrap() < 1e-15);
    }

    #[test]
    fn nilpotent_argument() {
        let x = nilpotent_arg();
        assert!(x.gmul(&x).unwrap().is_empty());
        let k = 3.0;
        let xk = x.scale(1.0 / k);
        let sinh = series_apply(SeriesFn::Sinh, &xk, 32, Tolerance::default()).unwrap();
        assert_eq!(sinh.value, xk);
        assert!(sinh.terms_used <= 2);
        let cosh = series_apply(SeriesFn::Cosh, &xk, 32, Tolerance::default()).unwrap();
        assert_eq!(cosh.value, Multivector::one(x.signature()));
    }

    #[test]
    fn kappa_set_relations_between_bases() {
        let set = kappa_generators(BasisKind::Kappa, 2.0).unwrap();
        let k1 = set.get("K1").unwrap();
        let k2 = set.get("K2").unwrap();
        let kp = set.get("Kp").unwrap();
        assert!(kp.dist(&(k1 + &k2.scale(c(0.0, 1.0)))).unwrap() < 1e-15);
        let rk1 = set.get("RK1").unwrap();
        let rk2 = set.get("RK2").unwrap();
        let rkp = set.get("RKp").unwrap();
        assert!(rkp.dist(&(rk1 + &rk2.scale(c(0.0, 1.0)))).unwrap() < 1e-14);
        assert!(set.get("K0").is_none());
        assert!(generator_set(BasisKind::Kappa, None).is_err());
        assert!(kappa_generators(BasisKind::Kappa, 0.0).is_err());
    }

    #[test]
    fn undeformed_limit_is_the_identity() {
        let s = Signature::cl13();
        let set = deformed_generators(1.0, &Deformation::zero(&s)).unwrap();
        let plain = conformal_generators();
        for (name, v) in &plain.generators {
            assert_eq!(set.get(name).unwrap(), v);
        }
    }
}
