use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::tensor::{LegProduct, ProductMode, TensorElement};
use crate::error::Result;
use crate::mvcore::{BladeMask, Multivector, Signature};
use crate::qdeform::Deformation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoproductMode {
    /// Wedge legs: the Grassmann–Hopf structure.
    Grassmann,
    /// Clifford legs with the same primitive coproduct. Not an algebra map;
    /// kept as a diagnostic.
    CliffordFormal,
}

impl CoproductMode {
    pub fn leg_product(self) -> LegProduct {
        match self {
            CoproductMode::Grassmann => LegProduct::Wedge,
            CoproductMode::CliffordFormal => LegProduct::Clifford,
        }
    }
}

fn primitive(sig: &Arc<Signature>, i: usize, pm: ProductMode, leg: LegProduct) -> TensorElement {
    let mut t = TensorElement::zero(sig, pm, leg);
    t.add_term(1 << i, 0, Complex64::new(1.0, 0.0));
    t.add_term(0, 1 << i, Complex64::new(1.0, 0.0));
    t
}

fn blade_coproduct(
    sig: &Arc<Signature>,
    mask: BladeMask,
    pm: ProductMode,
    leg: LegProduct,
    d: Option<&Deformation>,
) -> Result<TensorElement> {
    let mut acc = TensorElement::unit(sig, Complex64::new(1.0, 0.0), pm, leg);
    for i in 0..sig.dim() {
        if mask >> i & 1 == 1 {
            acc = acc.tmul_in(&primitive(sig, i, pm, leg), d)?;
        }
    }
    Ok(acc)
}

/// `Δ`, extended multiplicatively from `Δ(e_i) = e_i⊗1 + 1⊗e_i` with the
/// graded tensor product.
pub fn coproduct(psi: &Multivector, mode: CoproductMode) -> Result<TensorElement> {
    coproduct_in(psi, mode, None)
}

/// As [`coproduct`]; in Clifford-formal mode the legs multiply in `Cl(V, B)`
/// when a deformation is given.
pub fn coproduct_in(
    psi: &Multivector,
    mode: CoproductMode,
    d: Option<&Deformation>,
) -> Result<TensorElement> {
    coproduct_with(psi, mode, ProductMode::Graded, d)
}

/// Multiplicative extension under an explicit tensor sign rule. Only the
/// graded rule yields a Hopf algebra; the ungraded one is for comparing
/// printed coproduct formulas.
pub fn coproduct_with(
    psi: &Multivector,
    mode: CoproductMode,
    product_mode: ProductMode,
    d: Option<&Deformation>,
) -> Result<TensorElement> {
    let sig = psi.signature();
    let leg = mode.leg_product();
    let mut out = TensorElement::zero(sig, product_mode, leg);
    for (mask, c) in psi.terms() {
        out = out.checked_add(&blade_coproduct(sig, mask, product_mode, leg, d)?.scale(c))?;
    }
    Ok(out)
}

/// `ε`: the scalar coefficient.
pub fn counit(psi: &Multivector) -> Complex64 {
    psi.scalar_part()
}

/// `S(ψ_p) = (−1)^p ψ_p`.
pub fn antipode(psi: &Multivector) -> Multivector {
    psi.grade_involution()
}

/// `m ∘ (f ⊗ g)` on a tensor, with `m` the wedge product.
fn wedge_collapse(
    t: &TensorElement,
    f: impl Fn(&Multivector) -> Multivector,
    g: impl Fn(&Multivector) -> Multivector,
) -> Result<Multivector> {
    let sig = t.signature();
    let mut out = Multivector::zero(sig);
    for (l, r, w) in t.terms() {
        let fl = f(&Multivector::from_mask(sig, l, 1.0));
        let gr = g(&Multivector::from_mask(sig, r, 1.0));
        out += &fl.wedge(&gr)?.scale(w);
    }
    Ok(out)
}

/// Max residual per Hopf axiom over every basis blade.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfReport {
    pub signature: String,
    pub blades: usize,
    pub coassociativity: f64,
    pub counit_left: f64,
    pub counit_right: f64,
    pub antipode_left: f64,
    pub antipode_right: f64,
    pub antipode_involution: f64,
    pub cocommutativity: f64,
}

impl HopfReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.coassociativity,
            self.counit_left,
            self.counit_right,
            self.antipode_left,
            self.antipode_right,
            self.antipode_involution,
            self.cocommutativity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn rows(&self) -> [(&'static str, f64); 7] {
        [
            ("coassociativity", self.coassociativity),
            ("counit_left", self.counit_left),
            ("counit_right", self.counit_right),
            ("antipode_left", self.antipode_left),
            ("antipode_right", self.antipode_right),
            ("antipode_involution", self.antipode_involution),
            ("cocommutativity", self.cocommutativity),
        ]
    }
}

impl fmt::Display for HopfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} blades)", self.signature, self.blades)?;
        for (name, r) in self.rows() {
            writeln!(f, "  {name:<20} {r:.3e}")?;
        }
        Ok(())
    }
}

/// Triple-tensor residual of coassociativity for one blade: both sides are
/// expanded into `(l, m, r)` blade triples and compared coefficientwise.
fn coassociativity_residual(delta: &TensorElement, cache: &[TensorElement]) -> f64 {
    use std::collections::BTreeMap;
    let mut diff: BTreeMap<(BladeMask, BladeMask, BladeMask), Complex64> = BTreeMap::new();
    for (l, r, w) in delta.terms() {
        for (ll, lr, ww) in cache[l as usize].terms() {
            *diff.entry((ll, lr, r)).or_default() += w * ww;
        }
        for (rl, rr, ww) in cache[r as usize].terms() {
            *diff.entry((l, rl, rr)).or_default() -= w * ww;
        }
    }
    diff.values().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Evaluates the Grassmann–Hopf axioms on every basis blade of `Λ(V)`.
pub fn hopf_check(sig: &Arc<Signature>) -> Result<HopfReport> {
    let count = sig.blade_count();
    let cache: Vec<TensorElement> = (0..count as BladeMask)
        .map(|m| blade_coproduct(sig, m, ProductMode::Graded, LegProduct::Wedge, None))
        .collect::<Result<_>>()?;
    let mut report = HopfReport {
        signature: sig.to_string(),
        blades: count,
        coassociativity: 0.0,
        counit_left: 0.0,
        counit_right: 0.0,
        antipode_left: 0.0,
        antipode_right: 0.0,
        antipode_involution: 0.0,
        cocommutativity: 0.0,
    };
    let eta_eps = |psi: &Multivector| Multivector::scalar(sig, counit(psi));
    let scalar_of = |m: &Multivector| Multivector::scalar(sig, counit(m));
    let id = |m: &Multivector| m.clone();
    for mask in 0..count as BladeMask {
        let psi = Multivector::from_mask(sig, mask, 1.0);
        let delta = &cache[mask as usize];
        let bump = |slot: &mut f64, v: f64| *slot = slot.max(v);

        bump(
            &mut report.coassociativity,
            coassociativity_residual(delta, &cache),
        );
        bump(
            &mut report.counit_left,
            wedge_collapse(delta, scalar_of, id)?.dist(&psi)?,
        );
        bump(
            &mut report.counit_right,
            wedge_collapse(delta, id, scalar_of)?.dist(&psi)?,
        );
        bump(
            &mut report.antipode_left,
            wedge_collapse(delta, antipode, id)?.dist(&eta_eps(&psi))?,
        );
        bump(
            &mut report.antipode_right,
            wedge_collapse(delta, id, antipode)?.dist(&eta_eps(&psi))?,
        );
        bump(
            &mut report.antipode_involution,
            antipode(&antipode(&psi)).dist(&psi)?,
        );
        bump(&mut report.cocommutativity, delta.swap().dist(delta)?);
    }
    Ok(report)
}

/// `Δ(e_i)·Δ(e_i)` in Clifford-formal mode divided by `g_ii`, read off the
/// `1⊗1` slot, for each basis vector. The primitive coproduct would need
/// `1`; it gives `2`.
pub fn clifford_coproduct_obstruction(
    sig: &Arc<Signature>,
) -> Result<Vec<(String, Complex64, f64)>> {
    let mut out = Vec::with_capacity(sig.dim());
    for i in 0..sig.dim() {
        let u = Multivector::basis_vector(sig, i)?;
        let du = coproduct(&u, CoproductMode::CliffordFormal)?;
        let sq = du.tmul(&du)?;
        let factor = sq.coeff(0, 0) / sig.metric(i);
        let rest = sq
            .checked_sub(&TensorElement::unit(
                sig,
                sq.coeff(0, 0),
                ProductMode::Graded,
                LegProduct::Clifford,
            ))?
            .norm_max();
        out.push((sig.label(i).to_string(), factor, rest));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn coproduct_examples() {
        let s = Signature::cl30();
        let one = Multivector::one(&s);
        let d1 = coproduct(&one, CoproductMode::Grassmann).unwrap();
        assert_eq!(d1.len(), 1);
        assert_eq!(d1.coeff(0, 0), c(1.0));

        let e1 = Multivector::basis_vector(&s, 0).unwrap();
        let de = coproduct(&e1, CoproductMode::Grassmann).unwrap();
        assert_eq!(de.len(), 2);
        assert_eq!(de.coeff(1, 0), c(1.0));
        assert_eq!(de.coeff(0, 1), c(1.0));

        let e12 = Multivector::blade(&s, &[0, 1], 1.0).unwrap();
        let d12 = coproduct(&e12, CoproductMode::Grassmann).unwrap();
        assert_eq!(d12.len(), 4);
        assert_eq!(d12.coeff(0b11, 0), c(1.0));
        assert_eq!(d12.coeff(0b01, 0b10), c(1.0));
        assert_eq!(d12.coeff(0b10, 0b01), c(-1.0));
        assert_eq!(d12.coeff(0, 0b11), c(1.0));
    }

    #[test]
    fn counit_and_antipode_examples() {
        let s = Signature::cl30();
        assert_eq!(counit(&Multivector::one(&s)), c(1.0));
        assert_eq!(counit(&Multivector::basis_vector(&s, 0).unwrap()), c(0.0));
        let x = &Multivector::scalar(&s, 3.0) + &Multivector::blade(&s, &[0, 1], 2.0).unwrap();
        assert_eq!(counit(&x), c(3.0));
        let e1 = Multivector::basis_vector(&s, 0).unwrap();
        assert_eq!(antipode(&e1), -&e1);
        let e12 = Multivector::blade(&s, &[0, 1], 1.0).unwrap();
        assert_eq!(antipode(&e12), e12);
    }

    #[test]
    fn hopf_axioms_hold_on_small_algebras() {
        for sig in [Signature::cl30(), Signature::cl13()] {
            let r = hopf_check(&sig).unwrap();
            assert_eq!(r.max_residual(), 0.0, "{r}");
            assert_eq!(r.blades, sig.blade_count());
        }
    }

    #[test]
    fn clifford_formal_square_of_a_primitive_is_twice_the_metric() {
        let s = Signature::cl13();
        for (_, factor, rest) in clifford_coproduct_obstruction(&s).unwrap() {
            assert_eq!(factor, c(2.0));
            assert_eq!(rest, 0.0);
        }
    }
}
