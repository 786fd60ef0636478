use std::fmt::Write as _;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kappagen::BasisKind;
use crate::mvcore::Multivector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    #[default]
    MustPass,
    Diagnostic,
}

/// One relation template `lhs = rhs`; `{var}` placeholders are filled from
/// the inclusive `indices` ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub indices: IndexMap<String, [i64; 2]>,
    #[serde(default)]
    pub expect: Expectation,
}

impl Relation {
    pub fn new(name: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Relation {
            name: name.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            indices: IndexMap::new(),
            expect: Expectation::MustPass,
        }
    }

    pub fn over(mut self, var: &str, lo: i64, hi: i64) -> Self {
        self.indices.insert(var.to_string(), [lo, hi]);
        self
    }

    pub fn diagnostic(mut self) -> Self {
        self.expect = Expectation::Diagnostic;
        self
    }

    /// All index assignments, first index outermost.
    pub fn assignments(&self) -> Vec<IndexMap<String, i64>> {
        let mut out = vec![IndexMap::new()];
        for (var, &[lo, hi]) in &self.indices {
            let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
            for partial in &out {
                for v in lo..=hi {
                    let mut p = partial.clone();
                    p.insert(var.clone(), v);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// `(lhs, rhs)` with the assignment substituted.
    pub fn instantiate(&self, assignment: &IndexMap<String, i64>) -> (String, String) {
        (
            substitute(&self.lhs, assignment),
            substitute(&self.rhs, assignment),
        )
    }
}

pub fn substitute(template: &str, assignment: &IndexMap<String, i64>) -> String {
    let mut s = template.to_string();
    for (var, v) in assignment {
        s = s.replace(&format!("{{{var}}}"), &v.to_string());
    }
    s
}

/// `(t[v=lo] + … + t[v=hi])`, expanded for each variable in turn.
pub fn expand_sum(vars: &[&str], lo: i64, hi: i64, template: &str) -> String {
    let mut terms = vec![template.to_string()];
    for var in vars {
        let pat = format!("{{{var}}}");
        terms = terms
            .iter()
            .flat_map(|t| {
                (lo..=hi)
                    .map(|v| t.replace(&pat, &v.to_string()))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    format!("({})", terms.join(" + "))
}

/// Expression text for a multivector using its signature labels, e.g.
/// `(5e-1 + 0e0i) + (1e0 + 0e0i)*(gamma0^gamma1)`. Blades are written as
/// wedges so the text means the same thing under any deformation;
/// coefficients round-trip exactly.
pub fn multivector_expr(m: &Multivector) -> String {
    let sig = m.signature();
    let mut out = String::new();
    for (mask, c) in m.terms() {
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let _ = write!(out, "({:e} + {:e}i)", c.re, c.im);
        let labels: Vec<&str> = (0..sig.dim())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| sig.label(i))
            .collect();
        if !labels.is_empty() {
            let _ = write!(out, "*({})", labels.join("^"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSuite {
    pub name: String,
    #[serde(default)]
    pub basis: BasisKind,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub parameters: IndexMap<String, f64>,
    pub relations: Vec<Relation>,
}

impl RelationSuite {
    pub fn new(name: impl Into<String>, basis: BasisKind) -> Self {
        RelationSuite {
            name: name.into(),
            basis,
            parameters: IndexMap::new(),
            relations: Vec::new(),
        }
    }

    pub fn push(&mut self, r: Relation) -> &mut Self {
        self.relations.push(r);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let suite: RelationSuite = serde_json::from_str(text)?;
        suite.validate()?;
        Ok(suite)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSuite(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")
            .map_err(|e| Error::InvalidSuite(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.relations {
            for (var, [lo, hi]) in &r.indices {
                if lo > hi {
                    return Err(Error::InvalidSuite(format!(
                        "relation '{}': empty range {lo}..{hi} for '{var}'",
                        r.name
                    )));
                }
                if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::InvalidSuite(format!(
                        "relation '{}': bad index name '{var}'",
                        r.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.relations.iter().map(|r| r.assignments().len()).sum()
    }
}
