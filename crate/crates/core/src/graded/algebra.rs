use std::collections::BTreeMap;

use crate::error::{ensure_dims, Error, Result};
use crate::linalg::{unit, Matrix, Vector};
use crate::scalar::{FieldSpec, Scalar};

/// A graded algebra `A_{[0,d]} = k ⊕ A_1 ⊕ … ⊕ A_d`, with products landing
/// above `d` set to zero.
///
/// Multiplication is stored as left-multiplication matrices: for each pair of
/// degrees `(i, j)` with `i + j ≤ d` and each basis element `a` of `A_i`, the
/// matrix of `b ↦ a·b` from `A_j` to `A_{i+j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedGradedAlgebra {
    field: FieldSpec,
    dims: Vec<usize>,
    mult: BTreeMap<(usize, usize), Vec<Matrix>>,
    monomials: Option<(usize, Vec<Vec<Vec<u32>>>)>,
}

impl TruncatedGradedAlgebra {
    /// Builds an algebra from left-multiplication matrices without validating
    /// unit or associativity laws (see [`validate_algebra`]).
    pub fn from_mult(
        field: FieldSpec,
        dims: Vec<usize>,
        mult: BTreeMap<(usize, usize), Vec<Matrix>>,
    ) -> Result<Self> {
        if dims.first() != Some(&1) {
            return Err(Error::Schema("degree-0 part of the algebra must be one-dimensional".into()));
        }
        let top = dims.len() - 1;
        for i in 0..=top {
            for j in 0..=top - i {
                let ms = mult
                    .get(&(i, j))
                    .ok_or_else(|| Error::Schema(format!("missing multiplication table ({i},{j})")))?;
                ensure_dims!(ms.len() == dims[i], "table ({i},{j}) has {} entries, expected {}", ms.len(), dims[i]);
                for m in ms {
                    ensure_dims!(
                        m.rows() == dims[i + j] && m.cols() == dims[j],
                        "table ({i},{j}) has a {}x{} block",
                        m.rows(),
                        m.cols()
                    );
                }
            }
        }
        if mult.keys().any(|&(i, j)| i + j > top) {
            return Err(Error::Schema("multiplication table above the top degree".into()));
        }
        Ok(TruncatedGradedAlgebra { field, dims, mult, monomials: None })
    }

    /// `k[x_0, …, x_{n-1}]` truncated to degree `d`, with the monomials of each
    /// degree in decreasing lexicographic order of exponent vectors
    /// (`x², xy, y²` for two variables).
    pub fn polynomial(field: FieldSpec, nvars: usize, d: usize) -> Self {
        let monos: Vec<Vec<Vec<u32>>> = (0..=d).map(|e| monomials(nvars, e as u32)).collect();
        let dims: Vec<usize> = monos.iter().map(Vec::len).collect();
        let index: Vec<BTreeMap<Vec<u32>, usize>> = monos
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect())
            .collect();
        let mut mult = BTreeMap::new();
        for i in 0..=d {
            for j in 0..=d - i {
                let mats = monos[i]
                    .iter()
                    .map(|a| {
                        let mut m = Matrix::zeros(field, dims[i + j], dims[j]);
                        for (col, b) in monos[j].iter().enumerate() {
                            let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                            m.set(index[i + j][&prod], col, field.one());
                        }
                        m
                    })
                    .collect();
                mult.insert((i, j), mats);
            }
        }
        TruncatedGradedAlgebra { field, dims, mult, monomials: Some((nvars, monos)) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `dim A_e`, zero above the top degree.
    pub fn dim(&self, e: usize) -> usize {
        self.dims.get(e).copied().unwrap_or(0)
    }

    /// Number of polynomial variables and monomial labels, when the algebra
    /// was built by [`TruncatedGradedAlgebra::polynomial`].
    pub fn monomial_labels(&self) -> Option<(usize, &[Vec<Vec<u32>>])> {
        self.monomials.as_ref().map(|(n, m)| (*n, m.as_slice()))
    }

    pub fn with_monomial_labels(mut self, nvars: usize, labels: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        ensure_dims!(labels.len() == self.dims.len(), "monomial labels for every degree");
        for (e, l) in labels.iter().enumerate() {
            ensure_dims!(l.len() == self.dims[e], "monomial labels for degree {e}");
        }
        self.monomials = Some((nvars, labels));
        Ok(self)
    }

    /// Left multiplication by the `a`-th basis element of `A_i` on `A_j`.
    pub fn left_mult(&self, i: usize, a: usize, j: usize) -> Option<&Matrix> {
        self.mult.get(&(i, j)).map(|ms| &ms[a])
    }

    /// `a·b` for basis elements, as a vector in `A_{i+j}`; empty when `i+j` exceeds the top degree.
    pub fn product(&self, i: usize, a: usize, j: usize, b: usize) -> Vector {
        match self.left_mult(i, a, j) {
            Some(m) => m.col(b),
            None => Vec::new(),
        }
    }

    pub fn mult_tables(&self) -> &BTreeMap<(usize, usize), Vec<Matrix>> {
        &self.mult
    }

    /// Overwrites one structure constant: the coefficient of basis element `c`
    /// of `A_{i+j}` in `a·b`.
    pub fn perturbed(&self, i: usize, a: usize, j: usize, b: usize, c: usize, value: Scalar) -> Result<Self> {
        let mut out = self.clone();
        let m = out
            .mult
            .get_mut(&(i, j))
            .and_then(|ms| ms.get_mut(a))
            .ok_or_else(|| Error::Precondition(format!("no product ({i},{j}) with index {a}")))?;
        ensure_dims!(c < m.rows() && b < m.cols(), "structure constant index out of range");
        m.set(c, b, value);
        out.monomials = None;
        Ok(out)
    }

    pub fn coerce(&self, field: FieldSpec) -> Result<Self> {
        let mult = self
            .mult
            .iter()
            .map(|(k, ms)| Ok((*k, ms.iter().map(|m| m.coerce(field)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(TruncatedGradedAlgebra { field, dims: self.dims.clone(), mult, monomials: self.monomials.clone() })
    }

    /// The same algebra truncated to a lower top degree.
    pub fn truncated(&self, d: usize) -> Self {
        let d = d.min(self.top_degree());
        let dims = self.dims[..=d].to_vec();
        let mult = self.mult.iter().filter(|((i, j), _)| i + j <= d).map(|(k, v)| (*k, v.clone())).collect();
        let monomials = self.monomials.as_ref().map(|(n, m)| (*n, m[..=d].to_vec()));
        TruncatedGradedAlgebra { field: self.field, dims, mult, monomials }
    }

    /// True iff `self` and `other` have the same structure constants.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.field == other.field && self.dims == other.dims && self.mult == other.mult
    }
}

/// Checks the unit law and associativity on all basis triples whose degrees
/// sum to at most the top degree.
pub fn validate_algebra(alg: &TruncatedGradedAlgebra) -> bool {
    let f = alg.field;
    let top = alg.top_degree();
    for j in 0..=top {
        let n = alg.dims[j];
        let Some(left_unit) = alg.left_mult(0, 0, j) else { return false };
        if *left_unit != Matrix::identity(f, n) {
            return false;
        }
        for a in 0..n {
            let Some(m) = alg.left_mult(j, a, 0) else { return false };
            if m.col(0) != unit(f, n, a) {
                return false;
            }
        }
    }
    for i in 1..=top {
        for j in 1..=top - i {
            for k in 1..=top - i - j {
                for a in 0..alg.dims[i] {
                    for b in 0..alg.dims[j] {
                        let ab = alg.product(i, a, j, b);
                        let lhs = combine(alg, i + j, &ab, k);
                        let la = alg.left_mult(i, a, j + k).expect("degree within range");
                        let rhs = la.mul(alg.left_mult(j, b, k).expect("degree within range")).expect("shapes");
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// `Σ_c x_c · L_c` for left multiplications of degree `deg` acting on `A_k`.
fn combine(alg: &TruncatedGradedAlgebra, deg: usize, x: &[Scalar], k: usize) -> Matrix {
    let mut out = Matrix::zeros(alg.field, alg.dim(deg + k), alg.dim(k));
    for (c, coeff) in x.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        out = out.add(&alg.left_mult(deg, c, k).expect("degree within range").scale(coeff)).expect("shapes");
    }
    out
}

/// Exponent vectors of total degree `e` in `n` variables, decreasing lexicographically.
pub fn monomials(n: usize, e: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if e == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=e).rev() {
        for mut rest in monomials(n - 1, e - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
