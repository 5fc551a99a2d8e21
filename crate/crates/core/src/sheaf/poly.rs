use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// A polynomial in `k[x_0, …, x_n]` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

const SHORT_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Variable names used for display: `x, y, z, w` up to four variables,
/// `x0, x1, …` beyond.
pub fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= SHORT_NAMES.len() {
        SHORT_NAMES[i].to_string()
    } else {
        format!("x{i}")
    }
}

fn var_index(nvars: usize, name: &str) -> Option<usize> {
    if let Some(i) = SHORT_NAMES.iter().position(|&s| s == name) {
        return (nvars <= SHORT_NAMES.len() && i < nvars).then_some(i);
    }
    let i: usize = name.strip_prefix('x')?.parse().ok()?;
    (i < nvars).then_some(i)
}

impl Poly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(field: FieldSpec, exps: Vec<u32>, c: Scalar) -> Self {
        let mut p = Self::zero(field, exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    /// The common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Parses expanded monomial form such as `"x^2 - 3/2*x*y + y^2"`.
    pub fn parse(field: FieldSpec, nvars: usize, s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Schema(format!("bad polynomial {s:?}: {why}"));
        let mut p = Self::zero(field, nvars);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let mut coef = field.one();
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coef = &coef * &field.parse(factor)?;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                let i = var_index(nvars, name).ok_or_else(|| bad(&format!("unknown variable {name}")))?;
                exps[i] += e;
            }
            p.add_term(exps, if neg { -coef } else { coef });
        }
        Ok(p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y);
            }
        }
        out
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, exps: &[u32]) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, x) in &self.terms {
            out.add_term(m.iter().zip(exps).map(|(i, j)| i + j).collect(), x.clone());
        }
        out
    }

    pub fn coerce(&self, field: FieldSpec) -> Result<Self> {
        let mut out = Self::zero(field, self.nvars);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), field.coerce(x)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    /// Terms in decreasing lexicographic order of exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0 && matches!(c, Scalar::Q(_));
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = var_name(self.nvars, i);
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
