use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported number of basis vectors.
pub const MAX_DIM: usize = 8;

/// A diagonal metric `diag(±1, ...)` together with display names for the
/// basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    diag: Vec<i8>,
    labels: Vec<String>,
}

impl Signature {
    pub fn new<S: Into<String>>(diag: Vec<i8>, labels: Vec<S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if diag.len() > MAX_DIM {
            return Err(Error::InvalidSignature(format!(
                "dimension {} exceeds {}",
                diag.len(),
                MAX_DIM
            )));
        }
        if let Some(bad) = diag.iter().find(|d| **d != 1 && **d != -1) {
            return Err(Error::InvalidSignature(format!(
                "diagonal entry {bad} is not ±1"
            )));
        }
        if labels.len() != diag.len() {
            return Err(Error::InvalidSignature(format!(
                "{} labels for {} basis vectors",
                labels.len(),
                diag.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if !is_identifier(l) {
                return Err(Error::InvalidSignature(format!(
                    "label '{l}' is not an identifier"
                )));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidSignature(format!("duplicate label '{l}'")));
            }
        }
        Ok(Arc::new(Signature { diag, labels }))
    }

    /// Signature with generated labels `e1..en`.
    pub fn from_diag(diag: Vec<i8>) -> Result<Arc<Self>> {
        let labels = (1..=diag.len())
            .map(|i| format!("e{i}"))
            .collect::<Vec<_>>();
        Signature::new(diag, labels)
    }

    /// Spacetime algebra Cl(1,3): `gamma0..gamma3`, metric (+,−,−,−).
    pub fn cl13() -> Arc<Self> {
        Signature::new(
            vec![1, -1, -1, -1],
            vec!["gamma0", "gamma1", "gamma2", "gamma3"],
        )
        .expect("preset")
    }

    /// Euclidean Cl(3,0): `e1..e3`.
    pub fn cl30() -> Arc<Self> {
        Signature::new(vec![1, 1, 1], vec!["e1", "e2", "e3"]).expect("preset")
    }

    /// Cl(4,1) with `E0^2 = -1` and `E1..E4` squaring to +1.
    pub fn cl41() -> Arc<Self> {
        Signature::new(vec![-1, 1, 1, 1, 1], vec!["E0", "E1", "E2", "E3", "E4"]).expect("preset")
    }

    /// Conformal space Cl(2,4): `eps0, eps5` square to +1, `eps1..eps4` to −1.
    pub fn cl24() -> Arc<Self> {
        Signature::new(
            vec![1, -1, -1, -1, -1, 1],
            vec!["eps0", "eps1", "eps2", "eps3", "eps4", "eps5"],
        )
        .expect("preset")
    }

    /// Resolves `cl13`, `cl30`, `cl41`, `cl24` or an explicit comma separated
    /// diagonal such as `1,-1,-1`.
    pub fn preset(name: &str) -> Result<Arc<Self>> {
        match name.trim() {
            "cl13" => Ok(Signature::cl13()),
            "cl30" => Ok(Signature::cl30()),
            "cl41" => Ok(Signature::cl41()),
            "cl24" => Ok(Signature::cl24()),
            other => {
                let diag = other
                    .split(',')
                    .map(|s| s.trim().parse::<i8>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidSignature(format!("unknown signature '{other}'")))?;
                Signature::from_diag(diag)
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[i8] {
        &self.diag
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `g(e_i, e_i)`.
    pub fn metric(&self, i: usize) -> f64 {
        f64::from(self.diag[i])
    }

    /// `(p, q)`: counts of +1 and −1 entries.
    pub fn pq(&self) -> (usize, usize) {
        let p = self.diag.iter().filter(|d| **d > 0).count();
        (p, self.diag.len() - p)
    }

    /// Number of blades, `2^n`.
    pub fn blade_count(&self) -> usize {
        1 << self.diag.len()
    }

    /// Product of the metric entries over the set bits of `mask`.
    pub fn metric_of_mask(&self, mask: u32) -> f64 {
        let negatives = (0..self.dim())
            .filter(|i| mask >> i & 1 == 1 && self.diag[*i] < 0)
            .count();
        if negatives % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Signature with the listed basis vectors removed, labels kept.
    pub fn without(&self, removed: &[usize]) -> Result<Arc<Self>> {
        let (diag, labels): (Vec<i8>, Vec<String>) = (0..self.dim())
            .filter(|i| !removed.contains(i))
            .map(|i| (self.diag[i], self.labels[i].clone()))
            .unzip();
        Signature::new(diag, labels)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.pq();
        write!(f, "Cl({p},{q})[")?;
        for (i, (d, l)) in self.diag.iter().zip(&self.labels).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}:{}", if *d > 0 { '+' } else { '-' })?;
        }
        f.write_str("]")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
