use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;

use super::signature::Signature;
use crate::error::{Error, Result};

/// Blade index: bit `i` set means basis vector `i` is a factor, factors in
/// ascending order.
pub type BladeMask = u32;

/// Sign picked up when the canonical blades `a` and `b` are concatenated
/// and sorted into ascending order.
pub fn reorder_sign(a: BladeMask, b: BladeMask) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn grade_of(mask: BladeMask) -> usize {
    mask.count_ones() as usize
}

/// Which side the contracted operand sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Gradewise sign (anti)automorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    /// `(-1)^{k(k-1)/2}`.
    Reversion,
    /// `(-1)^k`, the main automorphism.
    Grade,
    /// Reversion followed by the main automorphism.
    Conjugation,
}

impl Involution {
    pub fn sign(self, grade: usize) -> f64 {
        let odd = match self {
            Involution::Reversion => (grade / 2) % 2 == 1,
            Involution::Grade => grade % 2 == 1,
            Involution::Conjugation => ((grade / 2) + grade) % 2 == 1,
        };
        if odd {
            -1.0
        } else {
            1.0
        }
    }
}

/// Numerical tolerance used for approximate comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eq_tol: f64,
}

impl Tolerance {
    pub fn new(eq_tol: f64) -> Result<Self> {
        if eq_tol >= 0.0 && eq_tol.is_finite() {
            Ok(Tolerance { eq_tol })
        } else {
            Err(Error::BadParameter(format!(
                "tolerance {eq_tol} must be finite and >= 0"
            )))
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eq_tol: 1e-12 }
    }
}

/// Sparse element of the exterior algebra over a diagonal signature, with
/// complex coefficients.
#[derive(Debug, Clone)]
pub struct Multivector {
    sig: Arc<Signature>,
    terms: BTreeMap<BladeMask, Complex64>,
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        same_signature(&self.sig, &other.sig) && self.terms == other.terms
    }
}

pub(crate) fn same_signature(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_same(a: &Arc<Signature>, b: &Arc<Signature>) -> Result<()> {
    if same_signature(a, b) {
        Ok(())
    } else {
        Err(Error::SignatureMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

impl Multivector {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Multivector {
            sig: Arc::clone(sig),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: &Arc<Signature>, c: impl Into<Complex64>) -> Self {
        Multivector::zero(sig).with_term(0, c.into())
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Multivector::scalar(sig, 1.0)
    }

    /// Single canonical blade term without any validation of the mask.
    pub fn from_mask(sig: &Arc<Signature>, mask: BladeMask, c: impl Into<Complex64>) -> Self {
        debug_assert!((mask as usize) < sig.blade_count());
        Multivector::zero(sig).with_term(mask, c.into())
    }

    pub fn basis_vector(sig: &Arc<Signature>, i: usize) -> Result<Self> {
        Multivector::blade(sig, &[i], 1.0)
    }

    /// `coeff · e_{i1} ∧ ... ∧ e_{ik}` brought into canonical ascending order.
    pub fn blade(
        sig: &Arc<Signature>,
        indices: &[usize],
        coeff: impl Into<Complex64>,
    ) -> Result<Self> {
        let mut mask: BladeMask = 0;
        let mut sign = 1.0;
        for &i in indices {
            if i >= sig.dim() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: sig.dim(),
                });
            }
            let bit = 1 << i;
            if mask & bit != 0 {
                return Err(Error::RepeatedIndex { index: i });
            }
            sign *= reorder_sign(mask, bit);
            mask |= bit;
        }
        Ok(Multivector::from_mask(sig, mask, coeff.into() * sign))
    }

    /// `Σ c_i e_i`.
    pub fn vector(sig: &Arc<Signature>, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != sig.dim() {
            return Err(Error::IndexOutOfRange {
                index: coeffs.len(),
                dim: sig.dim(),
            });
        }
        Ok(Multivector::from_terms(
            sig,
            coeffs.iter().enumerate().map(|(i, c)| (1 << i, *c)),
        ))
    }

    pub fn from_terms<I>(sig: &Arc<Signature>, terms: I) -> Self
    where
        I: IntoIterator<Item = (BladeMask, Complex64)>,
    {
        let mut mv = Multivector::zero(sig);
        for (mask, c) in terms {
            mv.add_term(mask, c);
        }
        mv
    }

    fn with_term(mut self, mask: BladeMask, c: Complex64) -> Self {
        self.add_term(mask, c);
        self
    }

    /// Accumulates `c` onto the coefficient of `mask`; exact zeros are dropped.
    pub(crate) fn add_term(&mut self, mask: BladeMask, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(mask).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.remove(&mask);
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: BladeMask) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeff(0)
    }

    /// Maximum absolute coefficient.
    pub fn norm_max(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.norm_max() <= tol
    }

    /// Max-coefficient distance `‖self − other‖`.
    pub fn dist(&self, other: &Multivector) -> Result<f64> {
        check_same(&self.sig, &other.sig)?;
        let mut worst = 0.0f64;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coeff(*m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        Ok(worst)
    }

    pub fn approx_eq(&self, other: &Multivector, tol: Tolerance) -> bool {
        self.dist(other).map(|d| d <= tol.eq_tol).unwrap_or(false)
    }

    /// Drops coefficients whose magnitude is at or below `threshold`.
    pub fn normalize(&self, threshold: f64) -> Self {
        Multivector {
            sig: Arc::clone(&self.sig),
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > threshold)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(BladeMask, Complex64) -> Complex64) -> Self {
        Multivector::from_terms(&self.sig, self.terms().map(|(m, c)| (m, f(m, c))))
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        self.map_coeffs(|_, x| x * c)
    }

    /// The scalar, if every non-scalar coefficient is within `tol` of zero.
    pub fn as_scalar(&self, tol: f64) -> Option<Complex64> {
        self.terms
            .iter()
            .all(|(m, c)| *m == 0 || c.norm() <= tol)
            .then(|| self.scalar_part())
    }

    /// Grades present with a nonzero coefficient, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|m| grade_of(*m)).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// `Some(k)` for a nonzero element of pure grade `k`.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// `Some(0 | 1)` for a nonzero element of pure even or odd parity.
    pub fn parity(&self) -> Option<usize> {
        let mut p = self.terms.keys().map(|m| grade_of(*m) % 2);
        let first = p.next()?;
        p.all(|x| x == first).then_some(first)
    }

    pub fn checked_add(&self, other: &Multivector) -> Result<Self> {
        check_same(&self.sig, &other.sig)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Multivector) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Bilinear extension of `op` applied blade by blade.
    fn bilinear<F>(&self, other: &Multivector, mut op: F) -> Result<Self>
    where
        F: FnMut(BladeMask, BladeMask) -> Option<(BladeMask, f64)>,
    {
        check_same(&self.sig, &other.sig)?;
        let mut out = Multivector::zero(&self.sig);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((mask, sign)) = op(*a, *b) {
                    out.add_term(mask, ca * cb * sign);
                }
            }
        }
        Ok(out)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Multivector) -> Result<Self> {
        self.bilinear(other, |a, b| {
            (a & b == 0).then(|| (a | b, reorder_sign(a, b)))
        })
    }

    /// Clifford product for the diagonal metric of the signature.
    pub fn gmul(&self, other: &Multivector) -> Result<Self> {
        let sig = Arc::clone(&self.sig);
        self.bilinear(other, |a, b| {
            Some((a ^ b, reorder_sign(a, b) * sig.metric_of_mask(a & b)))
        })
    }

    pub fn left_contract(&self, other: &Multivector) -> Result<Self> {
        let sig = Arc::clone(&self.sig);
        self.bilinear(other, |a, b| {
            (a & !b == 0).then(|| (a ^ b, reorder_sign(a, b) * sig.metric_of_mask(a)))
        })
    }

    pub fn right_contract(&self, other: &Multivector) -> Result<Self> {
        let sig = Arc::clone(&self.sig);
        self.bilinear(other, |a, b| {
            (b & !a == 0).then(|| (a ^ b, reorder_sign(a, b) * sig.metric_of_mask(b)))
        })
    }

    /// Left contraction `self ⌟ other` or right contraction `self ⌞ other`.
    pub fn contract(&self, side: Side, other: &Multivector) -> Result<Self> {
        match side {
            Side::Left => self.left_contract(other),
            Side::Right => self.right_contract(other),
        }
    }

    pub fn involute(&self, kind: Involution) -> Self {
        self.map_coeffs(|m, c| c * kind.sign(grade_of(m)))
    }

    pub fn reversion(&self) -> Self {
        self.involute(Involution::Reversion)
    }

    pub fn grade_involution(&self) -> Self {
        self.involute(Involution::Grade)
    }

    pub fn conjugation(&self) -> Self {
        self.involute(Involution::Conjugation)
    }

    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > self.sig.dim() {
            return Err(Error::GradeOutOfRange {
                grade: k,
                dim: self.sig.dim(),
            });
        }
        Ok(Multivector {
            sig: Arc::clone(&self.sig),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| grade_of(**m) == k)
                .map(|(m, c)| (*m, *c))
                .collect(),
        })
    }

    /// Metric pairing `g(ψ, φ)`: the Gram determinant on blades of equal
    /// grade, zero across grades. Bilinear, no complex conjugation.
    pub fn gpair(&self, other: &Multivector) -> Result<Complex64> {
        check_same(&self.sig, &other.sig)?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c * other.coeff(*m) * self.sig.metric_of_mask(*m))
            .sum())
    }

    /// Commutator `ab − ba` under the Clifford product.
    pub fn commutator(&self, other: &Multivector) -> Result<Self> {
        self.gmul(other)?.checked_sub(&other.gmul(self)?)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    /// Panics when the operands carry different signatures; use
    /// [`Multivector::checked_add`] for a fallible version.
    fn add(self, rhs: &Multivector) -> Multivector {
        self.checked_add(rhs)
            .expect("operands must share a signature")
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.checked_sub(rhs)
            .expect("operands must share a signature")
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        check_same(&self.sig, &rhs.sig).expect("operands must share a signature");
        for (m, c) in rhs.terms() {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        *self += &-rhs;
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

/// Formats a complex number compactly: `2`, `-0.5i`, `(1+2i)`.
pub fn format_complex(c: Complex64) -> String {
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("({re}-{}i)", -im)
    } else {
        format!("({re}+{im}i)")
    }
}

pub(crate) fn blade_label(sig: &Signature, mask: BladeMask) -> String {
    (0..sig.dim())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| sig.label(i))
        .collect::<Vec<_>>()
        .join("^")
}

impl fmt::Display for Multivector {
    /// Terms as `c·l1^l2`, scalar first, then by grade and index.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut masks: Vec<BladeMask> = self.terms.keys().copied().collect();
        masks.sort_by_key(|m| (grade_of(*m), *m));
        for (k, mask) in masks.iter().enumerate() {
            let c = self.terms[mask];
            let negative = c.im == 0.0 && c.re < 0.0;
            let shown = if negative { -c } else { c };
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            f.write_str(&format_complex(shown))?;
            if *mask != 0 {
                write!(f, "·{}", blade_label(&self.sig, *mask))?;
            }
        }
        Ok(())
    }
}
