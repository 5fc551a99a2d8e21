use std::cmp::Ordering;

use crate::error::{ensure_dims, Error, Result};
use crate::scalar::{FieldSpec, Scalar};

use super::{Matrix, Vector};

/// A linear subspace of `k^n`, stored by its reduced row-echelon basis.
///
/// The representation is canonical, so equality of values is equality of
/// subspaces. The derived order (dimension first, then basis entries) is the
/// tie-breaking order used by the HN search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| unit(field, ambient, i)).collect();
        Subspace { field, ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: Vec<Vector>) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &Matrix) -> Self {
        let (r, rank, pivots) = m.rref_full();
        let rows = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Subspace { field: m.field(), ambient: m.cols(), rows, pivots }
    }

    /// Span of the coordinate vectors `e_i` for `i` in `indices`.
    pub fn coordinate(field: FieldSpec, ambient: usize, indices: &[usize]) -> Self {
        let vecs = indices.iter().map(|&i| unit(field, ambient, i)).collect();
        Self::span(field, ambient, vecs).expect("unit vectors")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.ambient, self.rows.clone()).expect("consistent rows")
    }

    /// Columns not used as pivots; their unit vectors span a canonical complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// `v` minus its component along the echelon basis; zero at every pivot.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &(&c * r);
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Coordinates of `v` modulo the subspace, against the canonical complement.
    pub fn quotient_coordinates(&self, v: &[Scalar]) -> Vector {
        let r = self.reduce(v);
        self.non_pivots().into_iter().map(|c| r[c].clone()).collect()
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        ensure_dims!(
            self.ambient == other.ambient,
            "ambient dimensions {} and {} differ",
            self.ambient,
            other.ambient
        );
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        Ok(other.rows.iter().all(|v| self.contains_vector(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut vecs = self.rows.clone();
        vecs.extend(other.rows.iter().cloned());
        Subspace::span(self.field, self.ambient, vecs)
    }

    pub fn add_vectors(&self, vecs: Vec<Vector>) -> Result<Subspace> {
        let mut all = self.rows.clone();
        all.extend(vecs);
        Subspace::span(self.field, self.ambient, all)
    }

    /// The annihilator `{w : Σ v_i w_i = 0 for all v}` under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::full(self.field, self.ambient);
        }
        self.basis_matrix().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Vectors completing `sub`'s basis to a basis of `self` (requires `self ⊇ sub`).
    pub fn quotient_basis(&self, sub: &Subspace) -> Result<Vec<Vector>> {
        if !self.contains(sub)? {
            return Err(Error::Precondition("quotient_basis requires containment".into()));
        }
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for v in &self.rows {
            if !acc.contains_vector(v) {
                acc = acc.add_vectors(vec![v.clone()])?;
                out.push(v.clone());
            }
        }
        Ok(out)
    }

    /// Image under `m : k^n → k^m` where `n` is this ambient dimension.
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace> {
        ensure_dims!(m.cols() == self.ambient, "map with {} columns on k^{}", m.cols(), self.ambient);
        let vecs = self.rows.iter().map(|v| m.apply(v)).collect();
        Subspace::span(self.field, m.rows(), vecs)
    }

    /// `{x ∈ k^n : m·x ∈ self}` for `m : k^n → k^ambient`.
    pub fn preimage_under(&self, m: &Matrix) -> Result<Subspace> {
        ensure_dims!(m.rows() == self.ambient, "map with {} rows into k^{}", m.rows(), self.ambient);
        let ann = self.annihilator();
        if ann.is_zero() {
            return Ok(Subspace::full(self.field, m.cols()));
        }
        Ok(ann.basis_matrix().mul(m)?.kernel())
    }

    pub fn coerce(&self, field: FieldSpec) -> Result<Subspace> {
        let vecs = self
            .rows
            .iter()
            .map(|v| v.iter().map(|x| field.coerce(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(field, self.ambient, vecs)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.rows.len(), &self.rows).cmp(&(other.ambient, other.rows.len(), &other.rows))
    }
}

pub fn unit(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Every subspace of `k^n` over a prime field, enumerated by echelon pattern.
///
/// Returns `None` if the count would exceed `limit`.
pub fn all_subspaces(field: FieldSpec, n: usize, limit: usize) -> Option<Vec<Subspace>> {
    let FieldSpec::Prime(p) = field else { return None };
    let total = count_subspaces(p, n)?;
    if total > limit as u128 {
        return None;
    }
    let mut out = Vec::with_capacity(total as usize);
    for r in 0..=n {
        for pivots in combinations(n, r) {
            // Free slots: row i, column c > pivots[i], c not a pivot.
            let slots: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| {
                    let piv = &pivots;
                    ((piv[i] + 1)..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
                })
                .collect();
            let count = (p as u128).pow(slots.len() as u32);
            for code in 0..count {
                let mut rows = vec![vec![field.zero(); n]; r];
                for (i, &pc) in pivots.iter().enumerate() {
                    rows[i][pc] = field.one();
                }
                let mut c = code;
                for &(i, col) in &slots {
                    rows[i][col] = field.from_i64((c % p as u128) as i64);
                    c /= p as u128;
                }
                out.push(Subspace { field, ambient: n, rows, pivots: pivots.clone() });
            }
        }
    }
    Some(out)
}

/// Number of subspaces of `F_p^n`, or `None` on overflow.
pub fn count_subspaces(p: u64, n: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for r in 0..=n {
        // Gaussian binomial [n choose r]_p.
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..r {
            num = num.checked_mul((p as u128).checked_pow((n - i) as u32)?.checked_sub(1)?)?;
            den = den.checked_mul((p as u128).checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
        }
        total = total.checked_add(num / den)?;
    }
    Some(total)
}

pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}
