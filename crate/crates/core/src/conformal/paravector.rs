use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mvcore::{Multivector, Signature};
use crate::qdeform::Matrix2;

pub(crate) fn require_cl30(sig: &Arc<Signature>) -> Result<()> {
    if sig.diag() != [1, 1, 1] {
        return Err(Error::WrongSignature {
            expected: "Cl(3,0)".into(),
            found: sig.to_string(),
        });
    }
    Ok(())
}

/// `x = x⁰ + xⁱe_i` in `Cl(3,0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Paravector {
    m: Multivector,
}

impl Paravector {
    pub fn new(m: Multivector) -> Result<Self> {
        require_cl30(m.signature())?;
        if m.grades().iter().any(|&k| k > 1) {
            return Err(Error::BadParameter(format!("not a paravector: {m}")));
        }
        Ok(Paravector { m })
    }

    pub fn from_coords(coords: [f64; 4]) -> Self {
        Paravector::on(&Signature::cl30(), coords)
    }

    /// Same as [`Paravector::from_coords`] but reusing a `Cl(3,0)` handle.
    pub fn on(sig: &Arc<Signature>, [x0, x1, x2, x3]: [f64; 4]) -> Self {
        let m = Multivector::from_terms(
            sig,
            [(0, x0), (1, x1), (2, x2), (4, x3)].map(|(k, v)| (k, Complex64::new(v, 0.0))),
        );
        Paravector { m }
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.m
    }

    pub fn into_multivector(self) -> Multivector {
        self.m
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.m.signature()
    }

    /// Real parts of `(x⁰, x¹, x², x³)`.
    pub fn coords(&self) -> [f64; 4] {
        [0, 1, 2, 4].map(|k| self.m.coeff(k).re)
    }

    pub fn bar(&self) -> Paravector {
        Paravector {
            m: self.m.conjugation(),
        }
    }

    /// `xx̄ = (x⁰)² − |x|²`.
    pub fn norm(&self) -> Complex64 {
        self.m
            .gmul(&self.m.conjugation())
            .map(|p| p.scalar_part())
            .unwrap_or_default()
    }
}

impl fmt::Display for Paravector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coords();
        write!(f, "{a},{b},{c},{d}")
    }
}

/// `[[x, xx̄], [1, x̄]]`: the point on the quadric with `μ = 1`.
pub fn embed_point(x: &Paravector) -> Matrix2 {
    let sig = x.signature();
    Matrix2::new(
        x.m.clone(),
        Multivector::scalar(sig, x.norm()),
        Multivector::one(sig),
        x.m.conjugation(),
    )
}

/// Grade-1 element `α = α^A ε_A` of `Cl(2,4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricPoint {
    alpha: Multivector,
}

impl QuadricPoint {
    pub fn new(alpha: Multivector) -> Result<Self> {
        if alpha.signature().diag() != Signature::cl24().diag() {
            return Err(Error::WrongSignature {
                expected: "Cl(2,4)".into(),
                found: alpha.signature().to_string(),
            });
        }
        match alpha.grades().as_slice() {
            [] | [1] => Ok(QuadricPoint { alpha }),
            _ => Err(Error::NotAVector),
        }
    }

    /// `α⁵ = x⁰`, `αⁱ = xⁱ`, and `λ = α⁴ − α⁰ = xx̄`, `μ = α⁴ + α⁰ = 1`.
    pub fn from_paravector(x: &Paravector) -> Self {
        let sig = Signature::cl24();
        let [x0, x1, x2, x3] = x.coords();
        let lambda = x.norm().re;
        let coeffs = [(1.0 - lambda) / 2.0, x1, x2, x3, (1.0 + lambda) / 2.0, x0];
        let alpha = Multivector::vector(&sig, &coeffs.map(|v| Complex64::new(v, 0.0)))
            .expect("six components");
        QuadricPoint { alpha }
    }

    pub fn alpha(&self) -> &Multivector {
        &self.alpha
    }

    pub fn lambda(&self) -> Complex64 {
        self.alpha.coeff(1 << 4) - self.alpha.coeff(1)
    }

    pub fn mu(&self) -> Complex64 {
        self.alpha.coeff(1 << 4) + self.alpha.coeff(1)
    }
}

/// `|α·α|` in `Cl(2,4)`.
pub fn klein_residual(p: &QuadricPoint) -> f64 {
    p.alpha
        .gpair(&p.alpha)
        .map(|c| c.norm())
        .unwrap_or(f64::INFINITY)
}
