use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{ensure_dims, precondition, Result};
use crate::hochschild::HochschildDgla;
use crate::linalg::{axpy, SparseAcc, SparseVec};
use crate::scalar::{FieldSpec, Scalar};

/// A finite-dimensional dgla concentrated in degrees `≥ 1`, given by structure
/// constants on a homogeneous basis.
///
/// `d(e_α) = Σ_γ D_{γα} e_γ` and `[e_α, e_β] = Σ_γ C^γ_{αβ} e_γ`. The bracket is
/// stored for `α ≤ β` only and extended by graded antisymmetry, so it is
/// antisymmetric by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDgla {
    field: FieldSpec,
    degrees: Vec<usize>,
    d_cols: Vec<SparseVec>,
    brackets: BTreeMap<(usize, usize), SparseVec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiniteAxioms {
    pub d_squared: bool,
    pub leibniz: bool,
    pub jacobi: bool,
}

impl FiniteAxioms {
    pub fn all_hold(&self) -> bool {
        self.d_squared && self.leibniz && self.jacobi
    }
}

/// A structure constant that can be perturbed: `D_{γα}` or `C^γ_{αβ}` with `α ≤ β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Slot {
    Differential { alpha: usize, gamma: usize },
    Bracket { alpha: usize, beta: usize, gamma: usize },
}

fn neg_if(negate: bool, x: &Scalar) -> Scalar {
    if negate {
        -x
    } else {
        x.clone()
    }
}

impl FiniteDgla {
    pub fn new(
        field: FieldSpec,
        degrees: Vec<usize>,
        d_cols: Vec<SparseVec>,
        brackets: BTreeMap<(usize, usize), SparseVec>,
    ) -> Result<Self> {
        let n = degrees.len();
        precondition!(degrees.iter().all(|&k| k >= 1), "basis degrees must be at least 1");
        ensure_dims!(d_cols.len() == n, "{} differential columns for {n} basis vectors", d_cols.len());
        for (a, col) in d_cols.iter().enumerate() {
            for (g, _) in col {
                precondition!(*g < n && degrees[*g] == degrees[a] + 1, "differential of e_{a} is not of degree +1");
            }
        }
        for (&(a, b), v) in &brackets {
            precondition!(a <= b && b < n, "bracket key ({a},{b}) must have α ≤ β < {n}");
            if a == b && degrees[a] % 2 == 0 && !v.is_empty() {
                return Err(crate::Error::Precondition(format!("[e_{a}, e_{a}] must vanish in even degree")));
            }
            for (g, _) in v {
                precondition!(*g < n && degrees[*g] == degrees[a] + degrees[b], "bracket ({a},{b}) is not additive in degree");
            }
        }
        let brackets = brackets.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(FiniteDgla { field, degrees, d_cols, brackets })
    }

    /// Zero differential and bracket.
    pub fn abelian(field: FieldSpec, degrees: Vec<usize>) -> Self {
        let d_cols = vec![Vec::new(); degrees.len()];
        FiniteDgla { field, degrees, d_cols, brackets: BTreeMap::new() }
    }

    /// The part of a Hochschild dgla in degrees `≥ 1`, on its (filtered) basis,
    /// with its own differential (twisted if the dgla is). Also returns, per
    /// basis vector, its degree and index in the Hochschild layout.
    pub fn from_hochschild(l: &HochschildDgla) -> Result<(Self, Vec<(usize, usize)>)> {
        let mut origin = Vec::new();
        for n in 1..=l.top() {
            origin.extend(l.basis(n).into_iter().map(|j| (n, j)));
        }
        let pos: HashMap<(usize, usize), usize> = origin.iter().enumerate().map(|(k, &o)| (o, k)).collect();
        let to_basis = |deg: usize, entries: &SparseVec| -> SparseVec {
            let mut v: SparseVec = entries.iter().map(|(j, x)| (pos[&(deg, *j)], x.clone())).collect();
            v.sort_by_key(|(k, _)| *k);
            v
        };
        let degrees: Vec<usize> = origin.iter().map(|&(n, _)| n).collect();
        let cochains: Vec<_> = origin.iter().map(|&(n, j)| l.basis_cochain(n, j)).collect();
        let d_cols = cochains.iter().map(|c| to_basis(c.degree + 1, &l.d(c).entries)).collect();
        let mut brackets = BTreeMap::new();
        for a in 0..cochains.len() {
            for b in a..cochains.len() {
                if degrees[a] + degrees[b] > l.top() {
                    continue;
                }
                let br = l.bracket(&cochains[a], &cochains[b]);
                if !br.is_zero() {
                    brackets.insert((a, b), to_basis(br.degree, &br.entries));
                }
            }
        }
        Ok((FiniteDgla::new(l.field(), degrees, d_cols, brackets)?, origin))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, a: usize) -> usize {
        self.degrees[a]
    }

    /// Basis indices of `Lⁿ`.
    pub fn indices_of_degree(&self, n: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.degrees[a] == n).collect()
    }

    /// Stored bracket constants, keyed by `(α, β)` with `α ≤ β`.
    pub fn bracket_entries(&self) -> &BTreeMap<(usize, usize), SparseVec> {
        &self.brackets
    }

    pub fn d_basis(&self, a: usize) -> &SparseVec {
        &self.d_cols[a]
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> SparseVec {
        if a <= b {
            return self.brackets.get(&(a, b)).cloned().unwrap_or_default();
        }
        let negate = (self.degrees[a] * self.degrees[b]) % 2 == 0;
        let v = self.brackets.get(&(b, a)).cloned().unwrap_or_default();
        v.iter().map(|(g, x)| (*g, neg_if(negate, x))).collect()
    }

    pub fn d(&self, x: &SparseVec) -> SparseVec {
        let mut acc = SparseAcc::new();
        for (a, c) in x {
            for (g, y) in &self.d_cols[*a] {
                acc.add(*g, c * y);
            }
        }
        acc.finish()
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = SparseAcc::new();
        for (a, c) in x {
            for (b, e) in y {
                let ce = c * e;
                for (g, z) in self.bracket_basis(*a, *b) {
                    acc.add(g, &ce * &z);
                }
            }
        }
        acc.finish()
    }

    /// `dμ + ½[μ, μ]` for `μ ∈ L¹` given by coordinates on the degree-1 basis;
    /// returns coordinates on the degree-2 basis. `½[μ, μ]` is expanded as
    /// `Σ_{α<β} μ_α μ_β C_{αβ} + Σ_α μ_α² C_{αα}/2`, which needs characteristic ≠ 2
    /// only when a diagonal term `C_{αα}` is hit.
    pub fn mc_residual(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        let l1 = self.indices_of_degree(1);
        let l2 = self.indices_of_degree(2);
        ensure_dims!(coords.len() == l1.len(), "{} coordinates for L¹ of dimension {}", coords.len(), l1.len());
        let mu: SparseVec = l1.iter().zip(coords).filter(|(_, x)| !x.is_zero()).map(|(&a, x)| (a, x.clone())).collect();
        let mut out = self.d(&mu);
        for (i, (a, x)) in mu.iter().enumerate() {
            for (b, y) in &mu[i..] {
                let br = self.bracket_basis(*a, *b);
                if br.is_empty() {
                    continue;
                }
                let c = if a == b { &(x * y) * &self.field.from_ratio(1, 2)? } else { x * y };
                out = axpy(&out, &c, &br);
            }
        }
        let pos: HashMap<usize, usize> = l2.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let mut res = vec![self.field.zero(); l2.len()];
        for (g, x) in out {
            res[pos[&g]] = x;
        }
        Ok(res)
    }

    pub fn slots(&self) -> Vec<Slot> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for g in 0..n {
                if self.degrees[g] == self.degrees[a] + 1 {
                    out.push(Slot::Differential { alpha: a, gamma: g });
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                if a == b && self.degrees[a] % 2 == 0 {
                    continue;
                }
                for g in 0..n {
                    if self.degrees[g] == self.degrees[a] + self.degrees[b] {
                        out.push(Slot::Bracket { alpha: a, beta: b, gamma: g });
                    }
                }
            }
        }
        out
    }

    /// The same structure with `delta` added to one structure constant.
    pub fn mutate(&self, slot: Slot, delta: &Scalar) -> Self {
        let mut out = self.clone();
        let bump = |v: &SparseVec, g: usize| axpy(v, delta, &[(g, self.field.one())]);
        match slot {
            Slot::Differential { alpha, gamma } => out.d_cols[alpha] = bump(&self.d_cols[alpha], gamma),
            Slot::Bracket { alpha, beta, gamma } => {
                let v = bump(&self.bracket_basis(alpha, beta), gamma);
                if v.is_empty() {
                    out.brackets.remove(&(alpha, beta));
                } else {
                    out.brackets.insert((alpha, beta), v);
                }
            }
        }
        out
    }

    /// `d² = 0`, Leibniz and graded Jacobi on all basis elements, pairs and triples.
    pub fn check_axioms(&self) -> FiniteAxioms {
        let n = self.dim();
        let one = self.field.one();
        let e = |a: usize| -> SparseVec { vec![(a, one.clone())] };
        let mut r = FiniteAxioms { d_squared: true, leibniz: true, jacobi: true };
        for a in 0..n {
            r.d_squared &= self.d(&self.d_cols[a]).is_empty();
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = self.d(&self.bracket_basis(a, b));
                let t1 = self.bracket(&self.d_cols[a], &e(b));
                let t2 = self.bracket(&e(a), &self.d_cols[b]);
                let sign = if self.degrees[a] % 2 == 1 { -one.clone() } else { one.clone() };
                let rhs = axpy(&t1, &sign, &t2);
                r.leibniz &= axpy(&lhs, &-one.clone(), &rhs).is_empty();
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket_basis(a, b);
                for c in 0..n {
                    let lhs = self.bracket(&e(a), &self.bracket_basis(b, c));
                    let t1 = self.bracket(&ab, &e(c));
                    let t2 = self.bracket(&e(b), &self.bracket_basis(a, c));
                    let sign = if (self.degrees[a] * self.degrees[b]) % 2 == 1 { -one.clone() } else { one.clone() };
                    let rhs = axpy(&t1, &sign, &t2);
                    r.jacobi &= axpy(&lhs, &-one.clone(), &rhs).is_empty();
                }
            }
        }
        r
    }
}
