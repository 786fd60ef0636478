use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mvcore::{check_same, grade_of, reorder_sign, BladeMask, Multivector, Signature};
use crate::qdeform::Deformation;

/// Sign rule used when multiplying simple tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    /// Koszul sign `(−1)^{|b||c|}` for `(a⊗b)(c⊗d)`.
    Graded,
    Ungraded,
}

/// Product used inside each tensor leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LegProduct {
    Wedge,
    Clifford,
}

/// Finite sum `Σ w · e_l ⊗ e_r` over canonical blade pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    sig: Arc<Signature>,
    terms: BTreeMap<(BladeMask, BladeMask), Complex64>,
    product_mode: ProductMode,
    leg_product: LegProduct,
}

impl TensorElement {
    pub fn zero(sig: &Arc<Signature>, product_mode: ProductMode, leg_product: LegProduct) -> Self {
        TensorElement {
            sig: Arc::clone(sig),
            terms: BTreeMap::new(),
            product_mode,
            leg_product,
        }
    }

    /// `w · (1 ⊗ 1)`.
    pub fn unit(
        sig: &Arc<Signature>,
        w: Complex64,
        product_mode: ProductMode,
        leg_product: LegProduct,
    ) -> Self {
        let mut t = TensorElement::zero(sig, product_mode, leg_product);
        t.add_term(0, 0, w);
        t
    }

    /// `w · a ⊗ b`, expanded bilinearly over the blades of `a` and `b`.
    pub fn simple(
        a: &Multivector,
        b: &Multivector,
        w: Complex64,
        product_mode: ProductMode,
        leg_product: LegProduct,
    ) -> Result<Self> {
        check_same(a.signature(), b.signature())?;
        let mut t = TensorElement::zero(a.signature(), product_mode, leg_product);
        for (l, cl) in a.terms() {
            for (r, cr) in b.terms() {
                t.add_term(l, r, w * cl * cr);
            }
        }
        Ok(t)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn product_mode(&self) -> ProductMode {
        self.product_mode
    }

    pub fn leg_product(&self) -> LegProduct {
        self.leg_product
    }

    pub fn with_modes(mut self, product_mode: ProductMode, leg_product: LegProduct) -> Self {
        self.product_mode = product_mode;
        self.leg_product = leg_product;
        self
    }

    pub(crate) fn add_term(&mut self, l: BladeMask, r: BladeMask, w: Complex64) {
        if w == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry((l, r)).or_default();
        *slot += w;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.remove(&(l, r));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, BladeMask, Complex64)> + '_ {
        self.terms.iter().map(|((l, r), w)| (*l, *r, *w))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, l: BladeMask, r: BladeMask) -> Complex64 {
        self.terms.get(&(l, r)).copied().unwrap_or_default()
    }

    pub fn norm_max(&self) -> f64 {
        self.terms.values().map(|w| w.norm()).fold(0.0, f64::max)
    }

    fn check_compatible(&self, other: &TensorElement) -> Result<()> {
        check_same(&self.sig, &other.sig)?;
        if self.product_mode != other.product_mode || self.leg_product != other.leg_product {
            return Err(Error::ModeMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TensorElement) -> Result<Self> {
        check_same(&self.sig, &other.sig)?;
        let mut out = self.clone();
        for (l, r, w) in other.terms() {
            out.add_term(l, r, w);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TensorElement) -> Result<Self> {
        self.checked_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = TensorElement::zero(&self.sig, self.product_mode, self.leg_product);
        for (l, r, w) in self.terms() {
            out.add_term(l, r, w * c);
        }
        out
    }

    /// Max-coefficient distance across all blade pairs.
    pub fn dist(&self, other: &TensorElement) -> Result<f64> {
        Ok(self.checked_sub(other)?.norm_max())
    }

    fn leg(
        &self,
        a: BladeMask,
        b: BladeMask,
        d: Option<&Deformation>,
    ) -> Vec<(BladeMask, Complex64)> {
        match self.leg_product {
            LegProduct::Wedge => {
                if a & b == 0 {
                    vec![(a | b, Complex64::new(reorder_sign(a, b), 0.0))]
                } else {
                    Vec::new()
                }
            }
            LegProduct::Clifford => match d {
                Some(d) => d.product_table().blade_product(a, b).to_vec(),
                None => vec![(
                    a ^ b,
                    Complex64::new(reorder_sign(a, b) * self.sig.metric_of_mask(a & b), 0.0),
                )],
            },
        }
    }

    /// Product of tensor elements: `(a⊗b)(c⊗d) = σ (a∘c) ⊗ (b∘d)`.
    pub fn tmul(&self, other: &TensorElement) -> Result<TensorElement> {
        self.tmul_in(other, None)
    }

    /// As [`TensorElement::tmul`], with Clifford legs taken in `Cl(V, B)`
    /// when a deformation is given.
    pub fn tmul_in(&self, other: &TensorElement, d: Option<&Deformation>) -> Result<TensorElement> {
        self.check_compatible(other)?;
        if let Some(d) = d {
            d.check_sig(&self.sig)?;
        }
        let mut out = TensorElement::zero(&self.sig, self.product_mode, self.leg_product);
        for (a, b, w1) in self.terms() {
            for (c, dd, w2) in other.terms() {
                let sigma = match self.product_mode {
                    ProductMode::Graded if grade_of(b) * grade_of(c) % 2 == 1 => -1.0,
                    _ => 1.0,
                };
                let left = self.leg(a, c, d);
                if left.is_empty() {
                    continue;
                }
                let right = self.leg(b, dd, d);
                for (l, cl) in &left {
                    for (r, cr) in &right {
                        out.add_term(*l, *r, w1 * w2 * cl * cr * sigma);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Graded flip `a⊗b ↦ (−1)^{|a||b|} b⊗a` (plain flip in ungraded mode).
    pub fn swap(&self) -> TensorElement {
        let mut out = TensorElement::zero(&self.sig, self.product_mode, self.leg_product);
        for (l, r, w) in self.terms() {
            let sign = match self.product_mode {
                ProductMode::Graded if grade_of(l) * grade_of(r) % 2 == 1 => -1.0,
                _ => 1.0,
            };
            out.add_term(r, l, w * sign);
        }
        out
    }

    /// Applies linear maps to each leg: `Σ w f(e_l) ⊗ g(e_r)`.
    pub fn map_legs(
        &self,
        f: impl Fn(&Multivector) -> Multivector,
        g: impl Fn(&Multivector) -> Multivector,
    ) -> Result<TensorElement> {
        let mut out = TensorElement::zero(&self.sig, self.product_mode, self.leg_product);
        for (l, r, w) in self.terms() {
            let fl = f(&Multivector::from_mask(&self.sig, l, 1.0));
            let gr = g(&Multivector::from_mask(&self.sig, r, 1.0));
            out = out.checked_add(&TensorElement::simple(
                &fl,
                &gr,
                w,
                self.product_mode,
                self.leg_product,
            )?)?;
        }
        Ok(out)
    }

    /// JSON form: `[{"left": …, "right": …, "w": [re, im]}]`.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms()
                .map(|(l, r, w)| {
                    serde_json::json!({
                        "left": Multivector::from_mask(&self.sig, l, 1.0).to_string(),
                        "right": Multivector::from_mask(&self.sig, r, 1.0).to_string(),
                        "w": [w.re, w.im],
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for TensorElement {
    /// `w·(a) (x) (b)` terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (l, r, w)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let left = Multivector::from_mask(&self.sig, l, 1.0);
            let right = Multivector::from_mask(&self.sig, r, 1.0);
            write!(
                f,
                "{}·({left}) (x) ({right})",
                crate::mvcore::format_complex(w)
            )?;
        }
        Ok(())
    }
}
