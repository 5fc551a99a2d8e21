use std::collections::BTreeMap;

use crate::error::{ensure_dims, Result};
use crate::scalar::{FieldSpec, Scalar};

use super::Matrix;

/// A sparse vector as a sorted list of nonzero `(index, value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + c·b` for sorted sparse vectors, dropping cancellations.
pub fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + &(c * &b[j].1);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Accumulates entries into a sparse vector.
#[derive(Clone, Debug, Default)]
pub struct SparseAcc {
    map: BTreeMap<usize, Scalar>,
}

impl SparseAcc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, x: Scalar) {
        if x.is_zero() {
            return;
        }
        match self.map.get_mut(&i) {
            Some(y) => {
                *y += &x;
                if y.is_zero() {
                    self.map.remove(&i);
                }
            }
            None => {
                self.map.insert(i, x);
            }
        }
    }

    pub fn finish(self) -> SparseVec {
        self.map.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

/// A sparse matrix stored by rows; columns act on column vectors as in [`Matrix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, data: vec![Vec::new(); rows] }
    }

    /// Builds from columns given as sparse vectors (row index, value).
    pub fn from_sparse_cols(field: FieldSpec, rows: usize, cols: &[SparseVec]) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col {
                if !x.is_zero() {
                    data[*i].push((j, x.clone()));
                }
            }
        }
        SparseMatrix { field, rows, cols: cols.len(), data }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let data = (0..m.rows())
            .map(|i| {
                m.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect()
            })
            .collect();
        SparseMatrix { field: m.field(), rows: m.rows(), cols: m.cols(), data }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                m.set(i, *j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        ensure_dims!(self.rows == other.rows && self.cols == other.cols, "sparse add shape mismatch");
        let one = self.field.one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &one, b)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        ensure_dims!(self.cols == other.rows, "sparse mul shape mismatch");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = SparseAcc::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        acc.add(*j, a * b);
                    }
                }
                acc.finish()
            })
            .collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: other.cols, data })
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.data
            .iter()
            .map(|row| {
                let mut s = self.field.zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        s += &(a * &v[*j]);
                    }
                }
                s
            })
            .collect()
    }

    /// Rank of the submatrix on the selected rows and columns.
    pub fn sub_rank(&self, keep_row: impl Fn(usize) -> bool, keep_col: impl Fn(usize) -> bool) -> usize {
        let rows: Vec<SparseVec> = (0..self.rows)
            .filter(|&i| keep_row(i))
            .map(|i| self.data[i].iter().filter(|(j, _)| keep_col(*j)).cloned().collect::<SparseVec>())
            .filter(|r| !r.is_empty())
            .collect();
        sparse_rank(rows)
    }

    pub fn rank(&self) -> usize {
        sparse_rank(self.data.iter().filter(|r| !r.is_empty()).cloned().collect())
    }
}

/// Rank of a list of sparse rows by incremental elimination on leading columns.
pub fn sparse_rank(mut rows: Vec<SparseVec>) -> usize {
    rows.sort_by_key(|r| r.len());
    let mut pivots: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for mut r in rows {
        loop {
            let Some((lead, x)) = r.first().cloned() else { break };
            match pivots.get(&lead) {
                Some(p) => {
                    // p is normalized to leading coefficient 1.
                    r = axpy(&r, &(-&x), p);
                }
                None => {
                    let inv = x.inv();
                    let normalized = r.iter().map(|(j, y)| (*j, y * &inv)).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}
