//! Linear constraint systems over named rational variables (H-representation).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::rational::{dot, fmt_rational, serde_rational, serde_rational_vec, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

/// One constraint `a·x (rel) b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Row {
    #[serde(with = "serde_rational_vec")]
    pub a: Vec<Rational>,
    pub rel: Relation,
    #[serde(with = "serde_rational")]
    pub b: Rational,
}

impl Row {
    pub fn new(a: Vec<Rational>, rel: Relation, b: Rational) -> Self {
        Self { a, rel, b }
    }

    pub fn le(a: Vec<Rational>, b: Rational) -> Self {
        Self::new(a, Relation::Le, b)
    }

    pub fn eq(a: Vec<Rational>, b: Rational) -> Self {
        Self::new(a, Relation::Eq, b)
    }

    /// `a·x >= b`, stored as `-a·x <= -b`.
    pub fn ge(a: Vec<Rational>, b: Rational) -> Self {
        Self::le(a.into_iter().map(|c| -c).collect(), -b)
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.a, x);
        match self.rel {
            Relation::Le => lhs <= self.b,
            Relation::Eq => lhs == self.b,
        }
    }

    /// Scales to a primitive integer row. `<=` rows are only scaled by
    /// positive factors; `=` rows additionally get a positive leading
    /// coefficient.
    pub fn canonical(&self) -> Row {
        let mut lcm = BigInt::one();
        for r in self.a.iter().chain(std::iter::once(&self.b)) {
            lcm = lcm.lcm(r.denom());
        }
        let lcm = Rational::from_integer(lcm);
        let scaled: Vec<Rational> = self.a.iter().map(|c| c * &lcm).collect();
        let b = &self.b * &lcm;
        let mut g = BigInt::zero();
        for r in scaled.iter().chain(std::iter::once(&b)) {
            g = g.gcd(r.numer());
        }
        if g.is_zero() {
            return self.clone();
        }
        let mut g = Rational::from_integer(g);
        if self.rel == Relation::Eq {
            let lead = scaled.iter().find(|c| !c.is_zero()).unwrap_or(&b);
            if lead.is_negative() {
                g = -g;
            }
        }
        Row {
            a: scaled.iter().map(|c| c / &g).collect(),
            rel: self.rel,
            b: b / g,
        }
    }

    /// The same row with every `=` relation split into two `<=` rows.
    pub fn as_inequalities(&self) -> Vec<Row> {
        match self.rel {
            Relation::Le => vec![self.clone()],
            Relation::Eq => vec![
                Row::le(self.a.clone(), self.b.clone()),
                Row::ge(self.a.clone(), self.b.clone()),
            ],
        }
    }
}

/// A set of linear constraints over an ordered list of named variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub vars: Vec<String>,
    pub rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Self {
        Self {
            vars: vars.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn push(&mut self, row: Row) -> Result<()> {
        if row.a.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: row.a.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds `Σ coeff·x[idx] (rel) b` from sparse terms.
    pub fn push_sparse(&mut self, terms: &[(usize, Rational)], rel: Relation, b: Rational) {
        let mut a = vec![Rational::zero(); self.dim()];
        for (i, c) in terms {
            a[*i] += c;
        }
        self.rows.push(Row::new(a, rel, b));
    }

    pub fn with_rows(mut self, rows: impl IntoIterator<Item = Row>) -> Result<Self> {
        for r in rows {
            self.push(r)?;
        }
        Ok(self)
    }

    pub fn check_shape(&self) -> Result<()> {
        for r in &self.rows {
            if r.a.len() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), got: r.a.len() });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && self.rows.iter().all(|r| r.satisfied_by(x))
    }

    /// Canonical rows, duplicates removed, original order of first
    /// occurrence kept.
    pub fn canonicalize(&self) -> LinearSystem {
        let mut seen = BTreeSet::new();
        let mut rows = Vec::new();
        for r in &self.rows {
            let c = r.canonical();
            if seen.insert(c.clone()) {
                rows.push(c);
            }
        }
        LinearSystem { vars: self.vars.clone(), rows }
    }

    /// Canonical rows as a sorted set; two systems over the same variables
    /// with equal row sets describe the same constraint list.
    pub fn row_set(&self) -> BTreeSet<Row> {
        self.rows.iter().map(Row::canonical).collect()
    }

    pub fn same_rows(&self, other: &LinearSystem) -> bool {
        self.vars == other.vars && self.row_set() == other.row_set()
    }

    /// Rewrites the system over `vars`, which must contain every variable
    /// that has a nonzero coefficient.
    pub fn reindex(&self, vars: &[String]) -> Result<LinearSystem> {
        let mut out = LinearSystem::new(vars.iter().cloned());
        for r in &self.rows {
            let mut a = vec![Rational::zero(); vars.len()];
            for (j, c) in r.a.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let k = vars
                    .iter()
                    .position(|v| v == &self.vars[j])
                    .ok_or_else(|| contract(format!("variable `{}` not in target list", self.vars[j])))?;
                a[k] = c.clone();
            }
            out.rows.push(Row::new(a, r.rel, r.b.clone()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sys: LinearSystem = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        sys.check_shape()?;
        Ok(sys)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let mut terms = Vec::new();
            for (c, v) in r.a.iter().zip(&self.vars) {
                if c.is_zero() {
                    continue;
                }
                let t = if c.is_one() {
                    v.clone()
                } else if (-c).is_one() {
                    format!("-{v}")
                } else {
                    format!("{}*{v}", fmt_rational(c))
                };
                terms.push(t);
            }
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
            writeln!(f, "{lhs} {} {}", r.rel, fmt_rational(&r.b))?;
        }
        Ok(())
    }
}
