//! Reference implementations used as oracles. Everything here is written
//! from the textbook definitions and shares no code with the library.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use cliffhopf::{Complex64, Multivector, Signature};
use proptest::prelude::*;

pub type Terms = BTreeMap<u32, Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn terms_of(m: &Multivector) -> Terms {
    m.terms().collect()
}

pub fn max_diff(a: &Terms, b: &Terms) -> f64 {
    let mut keys: Vec<u32> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    keys.iter()
        .map(|k| {
            (a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default()).norm()
        })
        .fold(0.0, f64::max)
}

fn add_into(out: &mut Terms, mask: u32, v: Complex64) {
    *out.entry(mask).or_default() += v;
}

/// Clifford product of two blades by bubble-sorting the concatenated index
/// word: swapping distinct neighbours flips the sign, equal neighbours
/// collapse to their metric value.
pub fn blade_product(metric: &[f64], a: u32, b: u32) -> (u32, f64) {
    let word = |m: u32| (0..32).filter(move |i| m >> i & 1 == 1);
    let mut w: Vec<u32> = word(a).chain(word(b)).collect();
    let mut sign = 1.0;
    loop {
        let mut changed = false;
        let mut k = 0;
        while k + 1 < w.len() {
            if w[k] > w[k + 1] {
                w.swap(k, k + 1);
                sign = -sign;
                changed = true;
            } else if w[k] == w[k + 1] {
                sign *= metric[w[k] as usize];
                w.drain(k..k + 2);
                changed = true;
                continue;
            }
            k += 1;
        }
        if !changed {
            break;
        }
    }
    (w.iter().fold(0, |m, i| m | 1 << i), sign)
}

pub fn clifford_product(metric: &[f64], x: &Terms, y: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&a, &ca) in x {
        for (&b, &cb) in y {
            let (m, s) = blade_product(metric, a, b);
            add_into(&mut out, m, ca * cb * s);
        }
    }
    out
}

/// `e_i ⌟_B e_m` with `B(e_i, e_j)` from `form`.
fn vec_contract(form: &dyn Fn(usize, usize) -> Complex64, i: usize, m: u32) -> Terms {
    let mut out = Terms::new();
    let mut pos = 0;
    for j in 0..32 {
        if m >> j & 1 == 1 {
            let s = if pos % 2 == 0 { 1.0 } else { -1.0 };
            add_into(&mut out, m & !(1 << j), form(i, j) * s);
            pos += 1;
        }
    }
    out
}

fn vec_wedge(i: usize, m: u32) -> Option<(u32, f64)> {
    if m >> i & 1 == 1 {
        return None;
    }
    let below = (m & ((1 << i) - 1)).count_ones();
    Some((m | 1 << i, if below & 1 == 0 { 1.0 } else { -1.0 }))
}

fn vec_mul(form: &dyn Fn(usize, usize) -> Complex64, i: usize, psi: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&m, &cm) in psi {
        for (k, v) in vec_contract(form, i, m) {
            add_into(&mut out, k, v * cm);
        }
        if let Some((k, s)) = vec_wedge(i, m) {
            add_into(&mut out, k, cm * s);
        }
    }
    out
}

/// Chevalley recursion for `Cl(V, B)` in the wedge basis:
/// `e_i ∧ r = e_i ∘ r − e_i ⌟ r`.
pub fn chevalley_product(form: &dyn Fn(usize, usize) -> Complex64, x: &Terms, y: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&m, &cm) in x {
        for (k, v) in chevalley_blade(form, m, y) {
            add_into(&mut out, k, v * cm);
        }
    }
    out
}

fn chevalley_blade(form: &dyn Fn(usize, usize) -> Complex64, m: u32, y: &Terms) -> Terms {
    if m == 0 {
        return y.clone();
    }
    let i = m.trailing_zeros() as usize;
    let rest = m & !(1 << i);
    let first = vec_mul(form, i, &chevalley_blade(form, rest, y));
    let mut out = first;
    let contracted = vec_contract(form, i, rest);
    for (k, v) in chevalley_product(form, &contracted, y) {
        add_into(&mut out, k, -v);
    }
    out
}

/// 4×4 complex matrices for the Dirac representation of `Cl(1,3)`.
pub type Mat4 = [[Complex64; 4]; 4];

pub fn mat_zero() -> Mat4 {
    [[Complex64::default(); 4]; 4]
}

pub fn mat_id() -> Mat4 {
    let mut m = mat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = mat_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_add(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mat_scale(a: &Mat4, s: Complex64) -> Mat4 {
    let mut out = *a;
    for row in &mut out {
        for x in row {
            *x *= s;
        }
    }
    out
}

pub fn mat_sub(a: &Mat4, b: &Mat4) -> Mat4 {
    mat_add(a, &mat_scale(b, c(-1.0, 0.0)))
}

pub fn mat_comm(a: &Mat4, b: &Mat4) -> Mat4 {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

pub fn mat_dist(a: &Mat4, b: &Mat4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// `γ_0 = diag(1, 1, −1, −1)`, `γ_k = [[0, σ_k], [−σ_k, 0]]`.
pub fn dirac() -> [Mat4; 4] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let sigma = [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]];
    let mut g = [mat_zero(); 4];
    g[0][0][0] = o;
    g[0][1][1] = o;
    g[0][2][2] = -o;
    g[0][3][3] = -o;
    for k in 0..3 {
        for r in 0..2 {
            for s in 0..2 {
                g[k + 1][r][s + 2] = sigma[k][r][s];
                g[k + 1][r + 2][s] = -sigma[k][r][s];
            }
        }
    }
    g
}

/// Image of a `Cl(1,3)` multivector under the Dirac representation.
pub fn dirac_image(m: &Multivector) -> Mat4 {
    let g = dirac();
    let mut out = mat_zero();
    for (mask, coeff) in m.terms() {
        let mut term = mat_id();
        for (k, gk) in g.iter().enumerate() {
            if mask >> k & 1 == 1 {
                term = mat_mul(&term, gk);
            }
        }
        out = mat_add(&out, &mat_scale(&term, coeff));
    }
    out
}

pub fn metric(sig: &Arc<Signature>) -> Vec<f64> {
    sig.diag().iter().map(|&d| f64::from(d)).collect()
}

/// Strategy for a full complex multivector with coefficients in `[-1, 1]`.
pub fn arb_multivector(sig: Arc<Signature>) -> impl Strategy<Value = Multivector> {
    let n = sig.blade_count();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |cs| {
        Multivector::from_terms(
            &sig,
            cs.into_iter()
                .enumerate()
                .map(|(m, (re, im))| (m as u32, c(re, im)))
                .collect::<Vec<_>>(),
        )
    })
}

pub fn arb_real_multivector(sig: Arc<Signature>) -> impl Strategy<Value = Multivector> {
    let n = sig.blade_count();
    prop::collection::vec(-1.0f64..1.0, n).prop_map(move |cs| {
        Multivector::from_terms(
            &sig,
            cs.into_iter()
                .enumerate()
                .map(|(m, re)| (m as u32, c(re, 0.0)))
                .collect::<Vec<_>>(),
        )
    })
}

pub fn arb_vector(sig: Arc<Signature>) -> impl Strategy<Value = Multivector> {
    let n = sig.dim();
    prop::collection::vec(-1.0f64..1.0, n).prop_map(move |cs| {
        let coeffs: Vec<Complex64> = cs.into_iter().map(|x| c(x, 0.0)).collect();
        Multivector::vector(&sig, &coeffs).unwrap()
    })
}

/// Real antisymmetric `n × n` matrix from its upper triangle.
#[allow(clippy::needless_range_loop)]
pub fn arb_antisymmetric(n: usize) -> impl Strategy<Value = Vec<Vec<Complex64>>> {
    prop::collection::vec(-1.0f64..1.0, n * (n - 1) / 2).prop_map(move |up| {
        let mut a = vec![vec![Complex64::default(); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                a[i][j] = c(up[k], 0.0);
                a[j][i] = c(-up[k], 0.0);
                k += 1;
            }
        }
        a
    })
}

pub fn all_blades(sig: &Arc<Signature>) -> Vec<Multivector> {
    (0..sig.blade_count() as u32)
        .map(|m| Multivector::from_mask(sig, m, 1.0))
        .collect()
}
