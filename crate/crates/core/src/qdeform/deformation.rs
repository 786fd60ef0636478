use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mvcore::{check_same, reorder_sign, BladeMask, Multivector, Signature};

/// Largest tolerated `|A + Aᵀ|` entry.
pub const ANTISYMMETRY_TOL: f64 = 1e-14;

/// A non-symmetric bilinear form `B = g + A` over a diagonal signature,
/// stored through its antisymmetric part `A`.
#[derive(Debug, Clone)]
pub struct Deformation {
    sig: Arc<Signature>,
    a: Vec<Vec<Complex64>>,
    table: OnceLock<Arc<ProductTable>>,
}

impl PartialEq for Deformation {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.a == other.a
    }
}

impl Deformation {
    pub fn new(sig: &Arc<Signature>, a: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = sig.dim();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::BadDeformationShape {
                rows: a.len(),
                cols: a.first().map_or(0, Vec::len),
                dim: n,
            });
        }
        let mut worst = 0.0f64;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                worst = worst.max((x + a[j][i]).norm());
            }
        }
        if worst > ANTISYMMETRY_TOL {
            return Err(Error::NotAntisymmetric(worst));
        }
        Ok(Deformation {
            sig: Arc::clone(sig),
            a,
            table: OnceLock::new(),
        })
    }

    /// Builds `A` from its strictly upper triangle.
    pub fn from_upper(sig: &Arc<Signature>, upper: &[((usize, usize), Complex64)]) -> Result<Self> {
        let n = sig.dim();
        let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for &((i, j), v) in upper {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    dim: n,
                });
            }
            if i == j {
                return Err(Error::NotAntisymmetric(2.0 * v.norm()));
            }
            a[i][j] = v;
            a[j][i] = -v;
        }
        Deformation::new(sig, a)
    }

    /// The undeformed case `A = 0`.
    pub fn zero(sig: &Arc<Signature>) -> Self {
        let n = sig.dim();
        Deformation::new(sig, vec![vec![Complex64::new(0.0, 0.0); n]; n])
            .expect("zero is antisymmetric")
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn matrix(&self) -> &[Vec<Complex64>] {
        &self.a
    }

    /// `A(e_i, e_j)`.
    pub fn a(&self, i: usize, j: usize) -> Complex64 {
        self.a[i][j]
    }

    /// `B(e_i, e_j) = g_ij + A_ij`.
    pub fn b(&self, i: usize, j: usize) -> Complex64 {
        let g = if i == j { self.sig.metric(i) } else { 0.0 };
        self.a[i][j] + g
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(|c| c.norm() == 0.0)
    }

    /// `A(u, v)` for vectors.
    pub fn a_form(&self, u: &Multivector, v: &Multivector) -> Complex64 {
        let n = self.sig.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += u.coeff(1 << i) * v.coeff(1 << j) * self.a[i][j];
            }
        }
        acc
    }

    /// Same form with `A` negated, used for the inverse Wick map.
    pub fn negated(&self) -> Deformation {
        let a = self
            .a
            .iter()
            .map(|row| row.iter().map(|c| -c).collect())
            .collect();
        Deformation::new(&self.sig, a).expect("negation keeps antisymmetry")
    }

    /// Restriction of `A` to the basis vectors in `keep`, over `sub`.
    pub fn restrict(&self, keep: &[usize], sub: &Arc<Signature>) -> Result<Deformation> {
        let a = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.a[i][j]).collect())
            .collect();
        Deformation::new(sub, a)
    }

    /// Blade-by-blade product table of `Cl(V, B)`, built on first use.
    pub fn product_table(&self) -> Arc<ProductTable> {
        Arc::clone(
            self.table
                .get_or_init(|| Arc::new(ProductTable::build(self.sig.dim(), |i, j| self.b(i, j)))),
        )
    }

    pub(crate) fn check_sig(&self, sig: &Arc<Signature>) -> Result<()> {
        check_same(&self.sig, sig)
    }

    pub fn to_spec(&self) -> DeformationSpec {
        DeformationSpec {
            signature: self.sig.diag().to_vec(),
            a: self
                .a
                .iter()
                .map(|row| row.iter().map(|c| JsonComplex::from(*c)).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("plain data serializes")
    }

    /// Parses the JSON form. When `base` has the same diagonal its labels
    /// are reused, otherwise labels `e1..en` are generated.
    pub fn from_json(text: &str, base: Option<&Arc<Signature>>) -> Result<Self> {
        let spec: DeformationSpec = serde_json::from_str(text)?;
        spec.into_deformation(base)
    }
}

/// On-disk form: `{ "signature": [±1, ...], "A": [[...], ...] }`. Entries are
/// real numbers or `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationSpec {
    pub signature: Vec<i8>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<JsonComplex>>,
}

impl DeformationSpec {
    pub fn into_deformation(self, base: Option<&Arc<Signature>>) -> Result<Deformation> {
        let sig = match base {
            Some(b) if b.diag() == self.signature.as_slice() => Arc::clone(b),
            _ => Signature::from_diag(self.signature)?,
        };
        let a = self
            .a
            .into_iter()
            .map(|row| row.into_iter().map(Complex64::from).collect())
            .collect();
        Deformation::new(&sig, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonComplex {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Complex64> for JsonComplex {
    fn from(c: Complex64) -> Self {
        if c.im == 0.0 {
            JsonComplex::Real(c.re)
        } else {
            JsonComplex::Pair([c.re, c.im])
        }
    }
}

impl From<JsonComplex> for Complex64 {
    fn from(c: JsonComplex) -> Self {
        match c {
            JsonComplex::Real(re) => Complex64::new(re, 0.0),
            JsonComplex::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

type SparseTerms = Vec<(BladeMask, Complex64)>;

/// Products `e_a ∘ e_b` of all canonical blades for a bilinear form `b`,
/// obtained from the vector action `e_i ∘ ψ = e_i ⌟_B ψ + e_i ∧ ψ` by
/// factoring `e_a = e_i ∧ e_rest = e_i ∘ e_rest − e_i ⌟_B e_rest`.
#[derive(Debug, Clone)]
pub struct ProductTable {
    n: usize,
    entries: Vec<SparseTerms>,
}

impl ProductTable {
    pub fn build(n: usize, b: impl Fn(usize, usize) -> Complex64) -> Self {
        let size = 1usize << n;
        let mut entries: Vec<SparseTerms> = vec![Vec::new(); size * size];
        let mut order: Vec<BladeMask> = (0..size as BladeMask).collect();
        order.sort_by_key(|m| (m.count_ones(), *m));
        for &a in &order {
            for bm in 0..size as BladeMask {
                let value = if a == 0 {
                    vec![(bm, Complex64::new(1.0, 0.0))]
                } else {
                    let i = a.trailing_zeros() as usize;
                    let rest = a & !(1 << i);
                    let mut acc = Accumulator::default();
                    for &(m, c) in &entries[rest as usize * size + bm as usize] {
                        vector_action(i, m, c, &b, &mut acc);
                    }
                    for (m, c) in vector_contract(i, rest, &b) {
                        for &(mm, cc) in &entries[m as usize * size + bm as usize] {
                            acc.add(mm, -c * cc);
                        }
                    }
                    acc.into_terms()
                };
                entries[a as usize * size + bm as usize] = value;
            }
        }
        ProductTable { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blade_product(&self, a: BladeMask, b: BladeMask) -> &[(BladeMask, Complex64)] {
        &self.entries[((a as usize) << self.n) + b as usize]
    }

    /// Bilinear extension over two multivectors sharing the signature.
    pub fn multiply(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        check_same(x.signature(), y.signature())?;
        let mut out = Multivector::zero(x.signature());
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                for &(m, c) in self.blade_product(a, b) {
                    out.add_term(m, ca * cb * c);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
struct Accumulator(std::collections::BTreeMap<BladeMask, Complex64>);

impl Accumulator {
    fn add(&mut self, m: BladeMask, c: Complex64) {
        *self.0.entry(m).or_default() += c;
    }

    fn into_terms(self) -> SparseTerms {
        self.0
            .into_iter()
            .filter(|(_, c)| c.norm() != 0.0)
            .collect()
    }
}

/// `e_i ⌟_B e_m` as sparse terms: `Σ_p (−1)^p B(i, j_p) e_{m \ j_p}`.
pub(crate) fn vector_contract(
    i: usize,
    m: BladeMask,
    b: &impl Fn(usize, usize) -> Complex64,
) -> SparseTerms {
    let mut out = Vec::new();
    let mut position = 0;
    for j in 0..BladeMask::BITS as usize {
        if m >> j & 1 == 0 {
            continue;
        }
        let factor = b(i, j);
        if factor.norm() != 0.0 {
            let sign = if position % 2 == 0 { 1.0 } else { -1.0 };
            out.push((m & !(1 << j), factor * sign));
        }
        position += 1;
    }
    out
}

/// Accumulates `c · (e_i ⌟_B e_m + e_i ∧ e_m)`.
fn vector_action(
    i: usize,
    m: BladeMask,
    c: Complex64,
    b: &impl Fn(usize, usize) -> Complex64,
    acc: &mut Accumulator,
) {
    let bit = 1 << i;
    if m & bit == 0 {
        acc.add(m | bit, c * reorder_sign(bit, m));
    }
    for (mm, cc) in vector_contract(i, m, b) {
        acc.add(mm, c * cc);
    }
}
