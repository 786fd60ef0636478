use num_complex::Complex64;

use super::deformation::{vector_contract, Deformation};
use crate::error::{Error, Result};
use crate::mvcore::{check_same, BladeMask, Multivector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WickDirection {
    /// `W_A`: maps `Cl(V, g)` monomials to `Cl(V, B)` monomials.
    Forward,
    /// `W_{−A}`.
    Inverse,
}

fn require_vector(u: &Multivector) -> Result<()> {
    match u.grades().as_slice() {
        [] | [1] => Ok(()),
        _ => Err(Error::NotAVector),
    }
}

fn contract_with(
    u: &Multivector,
    psi: &Multivector,
    form: impl Fn(usize, usize) -> Complex64,
) -> Result<Multivector> {
    require_vector(u)?;
    check_same(u.signature(), psi.signature())?;
    let n = u.signature().dim();
    let mut out = Multivector::zero(psi.signature());
    for i in 0..n {
        let ui = u.coeff(1 << i);
        if ui.norm() == 0.0 {
            continue;
        }
        for (m, c) in psi.terms() {
            for (mm, cc) in vector_contract(i, m, &form) {
                out.add_term(mm, ui * c * cc);
            }
        }
    }
    Ok(out)
}

/// `u ⌟_B ψ = u ⌟_g ψ + u ⌟_A ψ` for a vector `u`.
pub fn bcontract(u: &Multivector, psi: &Multivector, d: &Deformation) -> Result<Multivector> {
    d.check_sig(u.signature())?;
    contract_with(u, psi, |i, j| d.b(i, j))
}

/// The contraction built from `A` alone, `u ⌟_A ψ`.
pub fn acontract(u: &Multivector, psi: &Multivector, d: &Deformation) -> Result<Multivector> {
    d.check_sig(u.signature())?;
    contract_with(u, psi, |i, j| d.a(i, j))
}

/// `u ∧̇ v = u ∧ v + A(u, v)` for vectors.
pub fn dotted_wedge(u: &Multivector, v: &Multivector, d: &Deformation) -> Result<Multivector> {
    require_vector(u)?;
    require_vector(v)?;
    d.check_sig(u.signature())?;
    let mut out = u.wedge(v)?;
    out.add_term(0, d.a_form(u, v));
    Ok(out)
}

/// Dotted wedge of arbitrary elements, `W_A(W_{−A}(a) ∧ W_{−A}(b))`; agrees
/// with [`dotted_wedge`] on vectors.
pub fn dotted_wedge_general(
    a: &Multivector,
    b: &Multivector,
    d: &Deformation,
) -> Result<Multivector> {
    d.check_sig(a.signature())?;
    let back_a = wick(d, WickDirection::Inverse, a)?;
    let back_b = wick(d, WickDirection::Inverse, b)?;
    wick(d, WickDirection::Forward, &back_a.wedge(&back_b)?)
}

/// Clifford product of `Cl(V, B)`.
pub fn bmul(a: &Multivector, b: &Multivector, d: &Deformation) -> Result<Multivector> {
    d.check_sig(a.signature())?;
    d.product_table().multiply(a, b)
}

/// Pairing sum of a canonical blade: every partial pairing of its factors,
/// each pair `(p, q)` replaced by `A_pq` with the sign of the permutation
/// that brings the paired factors to the front.
fn wick_blade(
    indices: &[usize],
    a: &impl Fn(usize, usize) -> Complex64,
) -> Vec<(BladeMask, Complex64)> {
    let Some((&first, rest)) = indices.split_first() else {
        return vec![(0, Complex64::new(1.0, 0.0))];
    };
    let mut out: Vec<(BladeMask, Complex64)> = wick_blade(rest, a)
        .into_iter()
        .map(|(m, c)| (m | 1 << first, c))
        .collect();
    for p in 0..rest.len() {
        let factor = a(first, rest[p]);
        if factor.norm() == 0.0 {
            continue;
        }
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let remaining: Vec<usize> = rest
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != p)
            .map(|(_, x)| *x)
            .collect();
        out.extend(
            wick_blade(&remaining, a)
                .into_iter()
                .map(|(m, c)| (m, c * factor * sign)),
        );
    }
    out
}

/// Wick isomorphism as contraction by the exterior exponential of the
/// 2-form attached to `A`: `W_A` sums over partial pairings; the inverse is
/// `W_{−A}`. Scalars and vectors are fixed.
pub fn wick(d: &Deformation, direction: WickDirection, psi: &Multivector) -> Result<Multivector> {
    d.check_sig(psi.signature())?;
    let sign = match direction {
        WickDirection::Forward => 1.0,
        WickDirection::Inverse => -1.0,
    };
    let n = psi.signature().dim();
    let form = |i: usize, j: usize| d.a(i, j) * sign;
    let mut out = Multivector::zero(psi.signature());
    for (mask, c) in psi.terms() {
        let indices: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        for (m, cc) in wick_blade(&indices, &form) {
            out.add_term(m, c * cc);
        }
    }
    Ok(out)
}

/// `‖e_{i1} ∘_B ⋯ ∘_B e_{ik} − W_A(e_{i1} ∘_g ⋯ ∘_g e_{ik})‖` for strictly
/// ascending indices.
pub fn wick_iso_check(d: &Deformation, indices: &[usize]) -> Result<f64> {
    let sig = d.signature();
    for pair in indices.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::BadParameter(format!(
                "indices must be strictly ascending, got {indices:?}"
            )));
        }
    }
    let mut deformed = Multivector::one(sig);
    let mut classical = Multivector::one(sig);
    for &i in indices {
        let e = Multivector::basis_vector(sig, i)?;
        deformed = bmul(&deformed, &e, d)?;
        classical = classical.gmul(&e)?;
    }
    deformed.dist(&wick(d, WickDirection::Forward, &classical)?)
}
