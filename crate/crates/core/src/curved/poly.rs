use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{ensure_dims, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Symbols of a graded-commutative polynomial algebra: names and cohomological degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbols {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
}

impl Symbols {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.degrees[i].rem_euclid(2) == 1
    }
}

/// Exponent vector; odd symbols have exponent 0 or 1.
pub type Monomial = Vec<u32>;

/// A polynomial in graded-commutative symbols with exact coefficients.
///
/// Each monomial stands for the ordered product of its even symbols (in index
/// order, with multiplicity) followed by its odd symbols in index order; the
/// coefficient refers to that ordering. Terms of weight (total exponent) above
/// the cutoff are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgPolynomial {
    field: FieldSpec,
    symbols: Arc<Symbols>,
    cutoff: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub coefficient: String,
    pub factors: Vec<(String, u32)>,
}

impl DgPolynomial {
    pub fn zero(field: FieldSpec, symbols: Arc<Symbols>, cutoff: u32) -> Self {
        DgPolynomial { field, symbols, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, symbols: Arc<Symbols>, cutoff: u32, c: Scalar) -> Self {
        let mut p = Self::zero(field, symbols, cutoff);
        let n = p.symbols.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn generator(field: FieldSpec, symbols: Arc<Symbols>, cutoff: u32, i: usize) -> Self {
        let mut p = Self::zero(field, symbols, cutoff);
        let mut m = vec![0; p.symbols.len()];
        m[i] = 1;
        p.add_term(m, field.one());
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn symbols(&self) -> &Arc<Symbols> {
        &self.symbols
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight(m: &Monomial) -> u32 {
        m.iter().sum()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.iter().zip(&self.symbols.degrees).map(|(&e, &d)| e as i64 * d).sum()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || Self::weight(&m) > self.cutoff {
            return;
        }
        if m.iter().enumerate().any(|(i, &e)| e > 1 && self.symbols.is_odd(i)) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.symbols.clone(), self.cutoff);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Product of two normal-ordered monomials: the result monomial and the
    /// Koszul sign of sorting the odd factors, or `None` if an odd symbol repeats.
    fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut negative = false;
        let mut odd_after = 0u32;
        // Count pairs (i in a, j in b) of odd symbols with i > j.
        for j in (0..b.len()).rev() {
            if self.symbols.is_odd(j) {
                if b[j] == 1 && a[j] == 1 {
                    return None;
                }
                if b[j] == 1 && odd_after % 2 == 1 {
                    negative = !negative;
                }
                odd_after += a[j];
            }
        }
        Some((a.iter().zip(b).map(|(x, y)| x + y).collect(), negative))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.field, self.symbols.clone(), self.cutoff.min(other.cutoff));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if Self::weight(ma) + Self::weight(mb) > out.cutoff {
                    continue;
                }
                if let Some((m, neg)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Sets every symbol not in `keep` to zero and evaluates the kept ones at
    /// `values` (indexed by symbol). Kept symbols must be even.
    pub fn evaluate(&self, values: &[Option<Scalar>]) -> Result<Scalar> {
        ensure_dims!(values.len() == self.symbols.len(), "one value slot per symbol");
        let mut acc = self.field.zero();
        'terms: for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let Some(v) = &values[i] else { continue 'terms };
                for _ in 0..e {
                    t = &t * v;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn coerce(&self, field: FieldSpec) -> Result<Self> {
        let mut out = Self::zero(field, self.symbols.clone(), self.cutoff);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), field.coerce(c)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coefficient: c.to_string(),
                factors: m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (self.symbols.names[i].clone(), e))
                    .collect(),
            })
            .collect()
    }
}

/// The monomial's factors in normal order, with multiplicity.
pub(crate) fn factors(symbols: &Symbols, m: &Monomial) -> Vec<usize> {
    let mut out = Vec::new();
    for odd in [false, true] {
        for (i, &e) in m.iter().enumerate() {
            if symbols.is_odd(i) == odd {
                out.extend(std::iter::repeat(i).take(e as usize));
            }
        }
    }
    out
}
