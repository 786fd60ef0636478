use std::fmt;
use std::sync::Arc;

use super::deformation::{Deformation, ANTISYMMETRY_TOL};
use super::ops::{bmul, wick, WickDirection};
use crate::error::{Error, Result};
use crate::mvcore::{check_same, BladeMask, Multivector, Signature};

/// 2×2 matrix with multivector entries, row major: `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2 {
    pub entries: [[Multivector; 2]; 2],
}

impl Matrix2 {
    pub fn new(m11: Multivector, m12: Multivector, m21: Multivector, m22: Multivector) -> Self {
        Matrix2 {
            entries: [[m11, m12], [m21, m22]],
        }
    }

    /// Constant matrix `[[a, b], [c, d]]` of scalars over `sig`.
    pub fn scalars(sig: &Arc<Signature>, [[a, b], [c, d]]: [[f64; 2]; 2]) -> Self {
        Matrix2::new(
            Multivector::scalar(sig, a),
            Multivector::scalar(sig, b),
            Multivector::scalar(sig, c),
            Multivector::scalar(sig, d),
        )
    }

    pub fn identity(sig: &Arc<Signature>) -> Self {
        Matrix2::scalars(sig, [[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.entries[0][0].signature()
    }

    pub fn get(&self, row: usize, col: usize) -> &Multivector {
        &self.entries[row][col]
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Result<Multivector>) -> Result<Matrix2> {
        let [[a, b], [c, d]] = &self.entries;
        Ok(Matrix2::new(f(a)?, f(b)?, f(c)?, f(d)?))
    }

    pub fn scale(&self, k: f64) -> Matrix2 {
        self.map(|x| Ok(x.scale(k))).expect("scaling is infallible")
    }

    /// Matrix product with a caller supplied entry product.
    pub fn mul_with<P>(&self, other: &Matrix2, product: P) -> Result<Matrix2>
    where
        P: Fn(&Multivector, &Multivector) -> Result<Multivector>,
    {
        let x = &self.entries;
        let y = &other.entries;
        let entry = |r: usize, c: usize| -> Result<Multivector> {
            product(&x[r][0], &y[0][c])?.checked_add(&product(&x[r][1], &y[1][c])?)
        };
        Ok(Matrix2::new(
            entry(0, 0)?,
            entry(0, 1)?,
            entry(1, 0)?,
            entry(1, 1)?,
        ))
    }

    /// Matrix product with the Clifford product on entries.
    pub fn gmul(&self, other: &Matrix2) -> Result<Matrix2> {
        self.mul_with(other, |a, b| a.gmul(b))
    }

    pub fn checked_add(&self, other: &Matrix2) -> Result<Matrix2> {
        let x = &self.entries;
        let y = &other.entries;
        Ok(Matrix2::new(
            x[0][0].checked_add(&y[0][0])?,
            x[0][1].checked_add(&y[0][1])?,
            x[1][0].checked_add(&y[1][0])?,
            x[1][1].checked_add(&y[1][1])?,
        ))
    }

    /// Largest entrywise max-coefficient distance.
    pub fn dist(&self, other: &Matrix2) -> Result<f64> {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max(self.entries[r][c].dist(&other.entries[r][c])?);
            }
        }
        Ok(worst)
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// Basis indices `(plus, minus)` with `e_plus² = +1`, `e_minus² = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolicPair {
    pub plus: usize,
    pub minus: usize,
}

/// The isomorphism `Cl(p, q) → M(2, Cl(p−1, q−1))` fixed by
/// `e_plus ↦ [[0,1],[1,0]]`, `e_minus ↦ [[0,−1],[1,0]]` and
/// `e_i ↦ diag(e_i, −e_i)` on the remaining vectors, optionally conjugated by
/// the Wick maps of a block-diagonal deformation.
#[derive(Debug, Clone)]
pub struct PeriodicitySplit {
    full: Arc<Signature>,
    reduced: Arc<Signature>,
    pair: HyperbolicPair,
    /// Original index of each reduced basis vector.
    kept: Vec<usize>,
    deformation: Option<(Deformation, Deformation)>,
    blade_images: Vec<Matrix2>,
    lifts: Vec<Multivector>,
    units: [[Multivector; 2]; 2],
}

impl PeriodicitySplit {
    pub fn new(
        sig: &Arc<Signature>,
        pair: HyperbolicPair,
        d: Option<&Deformation>,
    ) -> Result<Self> {
        let n = sig.dim();
        let HyperbolicPair { plus, minus } = pair;
        if plus >= n
            || minus >= n
            || plus == minus
            || sig.diag()[plus] != 1
            || sig.diag()[minus] != -1
        {
            return Err(Error::BadHyperbolicPair { plus, minus });
        }
        let kept: Vec<usize> = (0..n).filter(|i| *i != plus && *i != minus).collect();
        let reduced = sig.without(&[plus, minus])?;
        let deformation = match d {
            None => None,
            Some(d) => {
                d.check_sig(sig)?;
                for &i in &kept {
                    for j in [plus, minus] {
                        if d.a(i, j).norm() > ANTISYMMETRY_TOL {
                            return Err(Error::CrossTermDeformation(i, j));
                        }
                    }
                }
                Some((d.clone(), d.restrict(&kept, &reduced)?))
            }
        };

        let generator = |k: usize| -> Matrix2 {
            if k == plus {
                Matrix2::scalars(&reduced, [[0.0, 1.0], [1.0, 0.0]])
            } else if k == minus {
                Matrix2::scalars(&reduced, [[0.0, -1.0], [1.0, 0.0]])
            } else {
                let r = kept.iter().position(|x| *x == k).expect("kept index");
                let e = Multivector::basis_vector(&reduced, r).expect("reduced index");
                Matrix2::new(
                    e.clone(),
                    Multivector::zero(&reduced),
                    Multivector::zero(&reduced),
                    -e,
                )
            }
        };
        let mut blade_images = Vec::with_capacity(sig.blade_count());
        for mask in 0..sig.blade_count() as BladeMask {
            let mut m = Matrix2::identity(&reduced);
            for k in (0..n).filter(|k| mask >> k & 1 == 1) {
                m = m.gmul(&generator(k))?;
            }
            blade_images.push(m);
        }

        // f_i = e_i e_plus e_minus maps to e_i · Id; products of f's lift the
        // reduced blades.
        let e_plus = Multivector::basis_vector(sig, plus)?;
        let e_minus = Multivector::basis_vector(sig, minus)?;
        let pm = e_plus.gmul(&e_minus)?;
        let mut lifts = Vec::with_capacity(reduced.blade_count());
        for mask in 0..reduced.blade_count() as BladeMask {
            let mut x = Multivector::one(sig);
            for r in (0..kept.len()).filter(|r| mask >> r & 1 == 1) {
                let f = Multivector::basis_vector(sig, kept[r])?.gmul(&pm)?;
                x = x.gmul(&f)?;
            }
            lifts.push(x);
        }
        let e_p = (&e_plus + &e_minus).scale(0.5);
        let e_m = (&e_plus - &e_minus).scale(0.5);
        let units = [
            [e_m.gmul(&e_p)?, e_m.clone()],
            [e_p.clone(), e_p.gmul(&e_m)?],
        ];
        Ok(PeriodicitySplit {
            full: Arc::clone(sig),
            reduced,
            pair,
            kept,
            deformation,
            blade_images,
            lifts,
            units,
        })
    }

    pub fn full_signature(&self) -> &Arc<Signature> {
        &self.full
    }

    pub fn reduced_signature(&self) -> &Arc<Signature> {
        &self.reduced
    }

    pub fn pair(&self) -> HyperbolicPair {
        self.pair
    }

    /// Original basis index of each reduced basis vector.
    pub fn kept_indices(&self) -> &[usize] {
        &self.kept
    }

    /// Restriction of the deformation to the reduced space, if any.
    pub fn reduced_deformation(&self) -> Option<&Deformation> {
        self.deformation.as_ref().map(|(_, r)| r)
    }

    /// Product used on matrix entries: `gmul`, or `bmul` for the reduced form.
    pub fn entry_product(&self, a: &Multivector, b: &Multivector) -> Result<Multivector> {
        match self.reduced_deformation() {
            Some(d) => bmul(a, b, d),
            None => a.gmul(b),
        }
    }

    pub fn matmul(&self, x: &Matrix2, y: &Matrix2) -> Result<Matrix2> {
        x.mul_with(y, |a, b| self.entry_product(a, b))
    }

    fn split_classical(&self, psi: &Multivector) -> Result<Matrix2> {
        check_same(psi.signature(), &self.full)?;
        let zero = Multivector::zero(&self.reduced);
        let mut out = Matrix2::new(zero.clone(), zero.clone(), zero.clone(), zero);
        for (mask, c) in psi.terms() {
            let image = &self.blade_images[mask as usize];
            for r in 0..2 {
                for col in 0..2 {
                    out.entries[r][col] += &image.entries[r][col].scale(c);
                }
            }
        }
        Ok(out)
    }

    fn lift(&self, x: &Multivector) -> Result<Multivector> {
        check_same(x.signature(), &self.reduced)?;
        let mut out = Multivector::zero(&self.full);
        for (mask, c) in x.terms() {
            out += &self.lifts[mask as usize].scale(c);
        }
        Ok(out)
    }

    fn assemble_classical(&self, m: &Matrix2) -> Result<Multivector> {
        let mut out = Multivector::zero(&self.full);
        for r in 0..2 {
            for c in 0..2 {
                out += &self.lift(&m.entries[r][c])?.gmul(&self.units[r][c])?;
            }
        }
        Ok(out)
    }

    pub fn split(&self, psi: &Multivector) -> Result<Matrix2> {
        match &self.deformation {
            None => self.split_classical(psi),
            Some((full, reduced)) => {
                let classical = wick(full, WickDirection::Inverse, psi)?;
                self.split_classical(&classical)?
                    .map(|x| wick(reduced, WickDirection::Forward, x))
            }
        }
    }

    pub fn assemble(&self, m: &Matrix2) -> Result<Multivector> {
        match &self.deformation {
            None => self.assemble_classical(m),
            Some((full, reduced)) => {
                let classical = m.map(|x| wick(reduced, WickDirection::Inverse, x))?;
                wick(
                    full,
                    WickDirection::Forward,
                    &self.assemble_classical(&classical)?,
                )
            }
        }
    }
}

/// Image of `psi` under the periodicity isomorphism.
pub fn periodicity_split(
    psi: &Multivector,
    pair: HyperbolicPair,
    d: Option<&Deformation>,
) -> Result<Matrix2> {
    PeriodicitySplit::new(psi.signature(), pair, d)?.split(psi)
}

/// Inverse of [`periodicity_split`]; `sig` is the full signature.
pub fn periodicity_assemble(
    m: &Matrix2,
    sig: &Arc<Signature>,
    pair: HyperbolicPair,
    d: Option<&Deformation>,
) -> Result<Multivector> {
    PeriodicitySplit::new(sig, pair, d)?.assemble(m)
}
