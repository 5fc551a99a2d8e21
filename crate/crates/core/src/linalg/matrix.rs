use std::fmt;

use crate::error::{ensure_dims, Error, Result};
use crate::scalar::{FieldSpec, Scalar};

use super::Subspace;

pub type Vector = Vec<Scalar>;

/// A dense matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vector>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            ensure_dims!(r.len() == cols, "row of length {} in a {cols}-column matrix", r.len());
            data.extend(r);
        }
        Ok(Matrix { field, rows: n, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(field: FieldSpec, rows: usize, cols: Vec<Vector>) -> Result<Self> {
        let n = cols.len();
        let mut m = Self::zeros(field, rows, n);
        for (j, c) in cols.into_iter().enumerate() {
            ensure_dims!(c.len() == rows, "column of length {} in a {rows}-row matrix", c.len());
            for (i, x) in c.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, cols, rows).expect("ragged literal")
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Scalar) {
        self.data[i * self.cols + j] += x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        ensure_dims!(
            self.cols == other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        ensure_dims!(
            self.rows == other.rows && self.cols == other.cols,
            "cannot add {}x{} and {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        ensure_dims!(self.cols == other.cols, "vstack of {} and {} columns", self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Reduced row-echelon form, its rank and pivot columns.
    pub fn rref_full(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let y = m.get(r, j);
                    if !y.is_zero() {
                        let d = &f * y;
                        m.data[i * m.cols + j] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rref(&self) -> (Matrix, usize) {
        let (m, r, _) = self.rref_full();
        (m, r)
    }

    pub fn rank(&self) -> usize {
        self.rref_full().1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// The null space `{x : self·x = 0}` inside `k^cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, rank, pivots) = self.rref_full();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -r.get(row, free);
            }
            basis.push(v);
        }
        Subspace::span(self.field, self.cols, basis).expect("kernel vectors have ambient length")
    }

    /// The column space inside `k^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.rows, self.col_vecs()).expect("columns have ambient length")
    }

    pub fn inverse(&self) -> Result<Matrix> {
        ensure_dims!(self.rows == self.cols, "inverse of non-square {}x{}", self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, rank, pivots) = aug.rref_full();
        if rank < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Coerces every entry into another field.
    pub fn coerce(&self, field: FieldSpec) -> Result<Matrix> {
        let data = self.data.iter().map(|x| field.coerce(x)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { field, rows: self.rows, cols: self.cols, data })
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(Q, 2);
        assert_eq!(id.rref(), (id.clone(), 2));

        let z = Matrix::zeros(Q, 3, 2);
        assert_eq!(z.rref(), (z.clone(), 0));

        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r, Matrix::from_i64(Q, &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_and_image() {
        let id = Matrix::identity(Q, 3);
        assert_eq!(id.kernel().dim(), 0);
        assert_eq!(id.image().dim(), 3);

        let z = Matrix::zeros(Q, 2, 3);
        assert_eq!(z.kernel().dim(), 3);
        assert_eq!(z.image().dim(), 0);

        let f2 = FieldSpec::Prime(2);
        let k = Matrix::from_i64(f2, &[&[1, 1]]).kernel();
        let expected = Subspace::span(f2, 2, vec![vec![f2.one(), f2.one()]]).unwrap();
        assert_eq!(k, expected);
        // Enumerating F_2^2 by hand: only (0,0) and (1,1) are killed.
        let killed: Vec<_> = f2
            .elements()
            .unwrap()
            .iter()
            .flat_map(|a| f2.elements().unwrap().into_iter().map(move |b| vec![a.clone(), b]))
            .filter(|v| (&v[0] + &v[1]).is_zero())
            .collect();
        assert_eq!(killed.len(), 1 << k.dim());
        assert!(killed.iter().all(|v| k.contains_vector(v)));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(Q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(Q, 2));
        assert!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).inverse().is_err());
    }
}
