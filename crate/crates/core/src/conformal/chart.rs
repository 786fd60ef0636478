use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mvcore::{Multivector, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// `E_A ↦ ε_A ε_5` into `Cl(2,4)`.
    Xi,
    /// `E_μ ↦ −iγ_μ`, `E_4 ↦ −iγ_0123` into `C ⊗ Cl(1,3)`.
    Poi,
}

impl ChartKind {
    pub fn target(self) -> Arc<Signature> {
        match self {
            ChartKind::Xi => Signature::cl24(),
            ChartKind::Poi => Signature::cl13(),
        }
    }

    /// Images of `E_0 … E_4`.
    pub fn generator_images(self) -> Vec<Multivector> {
        let t = self.target();
        match self {
            ChartKind::Xi => (0..5)
                .map(|a| Multivector::blade(&t, &[a, 5], 1.0).expect("valid blade"))
                .collect(),
            ChartKind::Poi => {
                let mi = Complex64::new(0.0, -1.0);
                let mut out: Vec<Multivector> = (0..4)
                    .map(|mu| Multivector::blade(&t, &[mu], mi).expect("valid blade"))
                    .collect();
                out.push(Multivector::blade(&t, &[0, 1, 2, 3], mi).expect("valid blade"));
                out
            }
        }
    }
}

/// Multiplicative extension of the generator assignment to `Cl(4,1)`.
pub fn chart_iso(kind: ChartKind, psi: &Multivector) -> Result<Multivector> {
    let src = psi.signature();
    if src.diag() != Signature::cl41().diag() {
        return Err(Error::WrongSignature {
            expected: "Cl(4,1)".into(),
            found: src.to_string(),
        });
    }
    let images = kind.generator_images();
    let target = kind.target();
    let mut out = Multivector::zero(&target);
    for (mask, c) in psi.terms() {
        let mut term = Multivector::scalar(&target, c);
        for (i, img) in images.iter().enumerate() {
            if mask >> i & 1 == 1 {
                term = term.gmul(img)?;
            }
        }
        out += &term;
    }
    Ok(out)
}
