use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{ensure_dims, precondition, Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::FieldSpec;

use super::TruncatedGradedAlgebra;

/// Per-degree subspaces `N_p, …, N_q` of a window module.
pub type SubTuple = Vec<Subspace>;

/// A `[p, q]`-graded space with an action of `A_{[1, q-p]}` raising degree.
///
/// Degrees are stored relative to `p`: index `i` means degree `p + i`. For each
/// `e ≥ 1`, each relative degree `i` with `i + e ≤ q - p`, and each basis
/// element `a` of `A_e`, `act(e, i, a)` is the matrix `V_i → V_{i+e}`.
/// Associativity is not assumed.
#[derive(Clone, Debug)]
pub struct LambdaModule {
    algebra: Arc<TruncatedGradedAlgebra>,
    p: i64,
    dims: Vec<usize>,
    action: BTreeMap<(usize, usize), Vec<Matrix>>,
}

impl PartialEq for LambdaModule {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dims == other.dims
            && self.action == other.action
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.same_structure(&other.algebra))
    }
}

impl LambdaModule {
    pub fn new(
        algebra: Arc<TruncatedGradedAlgebra>,
        p: i64,
        dims: Vec<usize>,
        action: BTreeMap<(usize, usize), Vec<Matrix>>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Schema("window must contain at least one degree".into()));
        }
        let len = dims.len() - 1;
        for e in 1..=len {
            for i in 0..=len - e {
                let ms = action.get(&(e, i)).ok_or_else(|| Error::Schema(format!("missing action ({e},{i})")))?;
                ensure_dims!(
                    ms.len() == algebra.dim(e),
                    "action ({e},{i}) has {} generators, A_{e} has dimension {}",
                    ms.len(),
                    algebra.dim(e)
                );
                for m in ms {
                    ensure_dims!(
                        m.rows() == dims[i + e] && m.cols() == dims[i],
                        "action ({e},{i}) block is {}x{}",
                        m.rows(),
                        m.cols()
                    );
                    if m.field() != algebra.field() {
                        return Err(Error::FieldMismatch("action and algebra fields differ".into()));
                    }
                }
            }
        }
        if action.keys().any(|&(e, i)| e == 0 || i + e > len) {
            return Err(Error::Schema("action outside the window".into()));
        }
        Ok(LambdaModule { algebra, p, dims, action })
    }

    pub fn zero_action(algebra: Arc<TruncatedGradedAlgebra>, p: i64, dims: Vec<usize>) -> Self {
        let f = algebra.field();
        let len = dims.len() - 1;
        let mut action = BTreeMap::new();
        for e in 1..=len {
            for i in 0..=len - e {
                action.insert((e, i), vec![Matrix::zeros(f, dims[i + e], dims[i]); algebra.dim(e)]);
            }
        }
        LambdaModule { algebra, p, dims, action }
    }

    pub fn algebra(&self) -> &Arc<TruncatedGradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.p + self.len() as i64
    }

    /// `q - p`.
    pub fn len(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_p(&self) -> usize {
        self.dims[0]
    }

    pub fn dim_q(&self) -> usize {
        self.dims[self.len()]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn act(&self, e: usize, i: usize, a: usize) -> &Matrix {
        &self.action[&(e, i)][a]
    }

    pub fn act_mut(&mut self, e: usize, i: usize, a: usize) -> &mut Matrix {
        &mut self.action.get_mut(&(e, i)).expect("action slot")[a]
    }

    pub fn actions(&self) -> &BTreeMap<(usize, usize), Vec<Matrix>> {
        &self.action
    }

    /// All action matrices leaving relative degree `i`, as `(e, a, matrix)`.
    pub fn actions_from(&self, i: usize) -> impl Iterator<Item = (usize, usize, &Matrix)> {
        (1..=self.len().saturating_sub(i))
            .flat_map(move |e| self.action[&(e, i)].iter().enumerate().map(move |(a, m)| (e, a, m)))
    }

    pub fn zero_subs(&self) -> SubTuple {
        self.dims.iter().map(|&n| Subspace::zero(self.field(), n)).collect()
    }

    pub fn full_subs(&self) -> SubTuple {
        self.dims.iter().map(|&n| Subspace::full(self.field(), n)).collect()
    }

    /// Failing slots `(e, f, i, a, b)` of `a·(b·v) = (ab)·v` with `v ∈ V_i`,
    /// `a ∈ A_e`, `b ∈ A_f`. Products above the algebra's top degree are zero.
    pub fn associativity_failures(&self) -> Vec<(usize, usize, usize, usize, usize)> {
        let f = self.field();
        let len = self.len();
        let mut out = Vec::new();
        for e in 1..=len {
            for g in 1..=len.saturating_sub(e) {
                for i in 0..=len - e - g {
                    for a in 0..self.algebra.dim(e) {
                        for b in 0..self.algebra.dim(g) {
                            let lhs = self.act(e, i + g, a).mul(self.act(g, i, b)).expect("shapes");
                            let ab = self.algebra.product(e, a, g, b);
                            let mut rhs = Matrix::zeros(f, self.dims[i + e + g], self.dims[i]);
                            for (c, x) in ab.iter().enumerate() {
                                if !x.is_zero() {
                                    rhs = rhs.add(&self.act(e + g, i, c).scale(x)).expect("shapes");
                                }
                            }
                            if lhs != rhs {
                                out.push((e, g, i, a, b));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_failures().is_empty()
    }

    fn check_subs(&self, subs: &[Subspace]) -> Result<()> {
        ensure_dims!(subs.len() == self.dims.len(), "subspace tuple of length {}", subs.len());
        for (s, &n) in subs.iter().zip(&self.dims) {
            ensure_dims!(s.ambient() == n, "subspace of k^{} in a degree of dimension {n}", s.ambient());
        }
        Ok(())
    }

    /// Smallest action-closed tuple containing the seeds. Actions raise degree,
    /// so one sweep upward reaches the fixed point.
    pub fn closure(&self, seeds: &[Subspace]) -> Result<SubTuple> {
        self.check_subs(seeds)?;
        let mut out: SubTuple = Vec::with_capacity(seeds.len());
        for d in 0..self.dims.len() {
            let mut vecs: Vec<Vector> = seeds[d].basis().to_vec();
            for src in 0..d {
                let e = d - src;
                for m in &self.action[&(e, src)] {
                    vecs.extend(out[src].basis().iter().map(|v| m.apply(v)));
                }
            }
            out.push(Subspace::span(self.field(), self.dims[d], vecs)?);
        }
        Ok(out)
    }

    /// Closure of seed vectors given per relative degree.
    pub fn submodule_closure(&self, seeds: &[Vec<Vector>]) -> Result<SubTuple> {
        ensure_dims!(seeds.len() == self.dims.len(), "seeds for every degree");
        let subs = seeds
            .iter()
            .zip(&self.dims)
            .map(|(vs, &n)| Subspace::span(self.field(), n, vs.clone()))
            .collect::<Result<Vec<_>>>()?;
        self.closure(&subs)
    }

    pub fn is_closed(&self, subs: &[Subspace]) -> Result<bool> {
        self.check_subs(subs)?;
        for ((e, i), ms) in &self.action {
            for m in ms {
                for v in subs[*i].basis() {
                    if !subs[i + e].contains_vector(&m.apply(v)) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Largest action-closed tuple whose top-degree part lies in `top` and
    /// whose degree-`p` part lies in `bottom`.
    pub fn largest_with_top(&self, bottom: &Subspace, top: &Subspace) -> Result<SubTuple> {
        let len = self.len();
        let mut out: Vec<Option<Subspace>> = vec![None; len + 1];
        out[len] = Some(top.clone());
        for d in (0..len).rev() {
            let mut s = Subspace::full(self.field(), self.dims[d]);
            for (e, _, m) in self.actions_from(d) {
                let target = out[d + e].as_ref().expect("filled above");
                s = s.intersect(&target.preimage_under(m)?)?;
            }
            out[d] = Some(s);
        }
        let mut out: SubTuple = out.into_iter().map(|s| s.expect("filled")).collect();
        if len > 0 {
            out[0] = out[0].intersect(bottom)?;
        } else {
            out[0] = top.intersect(bottom)?;
        }
        Ok(out)
    }

    /// The quotient by an action-closed tuple, with the canonical complement
    /// (non-pivot coordinates) as basis of each quotient degree.
    pub fn quotient(&self, sub: &[Subspace]) -> Result<Quotient> {
        self.check_subs(sub)?;
        precondition!(self.is_closed(sub)?, "quotient by a tuple that is not closed under the action");
        let f = self.field();
        let mut proj = Vec::new();
        let mut lift = Vec::new();
        for (s, &n) in sub.iter().zip(&self.dims) {
            let np = s.non_pivots();
            let mut pm = Matrix::zeros(f, np.len(), n);
            for c in 0..n {
                let mut e = vec![f.zero(); n];
                e[c] = f.one();
                for (r, x) in s.quotient_coordinates(&e).into_iter().enumerate() {
                    pm.set(r, c, x);
                }
            }
            let mut lm = Matrix::zeros(f, n, np.len());
            for (k, &c) in np.iter().enumerate() {
                lm.set(c, k, f.one());
            }
            proj.push(pm);
            lift.push(lm);
        }
        let dims: Vec<usize> = proj.iter().map(Matrix::rows).collect();
        let mut action = BTreeMap::new();
        for ((e, i), ms) in &self.action {
            let qs = ms
                .iter()
                .map(|m| proj[i + e].mul(&m.mul(&lift[*i])?))
                .collect::<Result<Vec<_>>>()?;
            action.insert((*e, *i), qs);
        }
        let module = LambdaModule { algebra: self.algebra.clone(), p: self.p, dims, action };
        Ok(Quotient { module, proj, lift })
    }

    /// The submodule spanned by an action-closed tuple, in its echelon basis.
    pub fn submodule(&self, sub: &[Subspace]) -> Result<Submodule> {
        self.check_subs(sub)?;
        precondition!(self.is_closed(sub)?, "submodule tuple is not closed under the action");
        let f = self.field();
        let incl: Vec<Matrix> = sub
            .iter()
            .zip(&self.dims)
            .map(|(s, &n)| Matrix::from_cols(f, n, s.basis().to_vec()))
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = sub.iter().map(Subspace::dim).collect();
        let mut action = BTreeMap::new();
        for ((e, i), ms) in &self.action {
            let rs = ms
                .iter()
                .map(|m| {
                    let cols = sub[*i]
                        .basis()
                        .iter()
                        .map(|v| sub[i + e].coordinates(&m.apply(v)).expect("closed tuple"))
                        .collect();
                    Matrix::from_cols(f, dims[i + e], cols)
                })
                .collect::<Result<Vec<_>>>()?;
            action.insert((*e, *i), rs);
        }
        let module = LambdaModule { algebra: self.algebra.clone(), p: self.p, dims, action };
        Ok(Submodule { module, incl })
    }

    /// Restriction to the window `[new_p, q]`, dropping lower degrees.
    pub fn truncate_below(&self, new_p: i64) -> Result<LambdaModule> {
        precondition!(new_p >= self.p && new_p <= self.q(), "truncation point {new_p} outside [{}, {}]", self.p, self.q());
        let shift = (new_p - self.p) as usize;
        let dims = self.dims[shift..].to_vec();
        let len = dims.len() - 1;
        let mut action = BTreeMap::new();
        for e in 1..=len {
            for i in 0..=len - e {
                action.insert((e, i), self.action[&(e, i + shift)].clone());
            }
        }
        Ok(LambdaModule { algebra: self.algebra.clone(), p: new_p, dims, action })
    }

    /// Restriction to the window `[p, new_q]`, dropping higher degrees.
    pub fn truncate_above(&self, new_q: i64) -> Result<LambdaModule> {
        precondition!(new_q >= self.p && new_q <= self.q(), "truncation point {new_q} outside [{}, {}]", self.p, self.q());
        let len = (new_q - self.p) as usize;
        let dims = self.dims[..=len].to_vec();
        let action = self.action.iter().filter(|((e, i), _)| e + i <= len).map(|(k, v)| (*k, v.clone())).collect();
        Ok(LambdaModule { algebra: self.algebra.clone(), p: self.p, dims, action })
    }

    pub fn direct_sum(&self, other: &LambdaModule) -> Result<LambdaModule> {
        precondition!(self.p == other.p && self.len() == other.len(), "direct sum of different windows");
        precondition!(self.algebra.same_structure(&other.algebra), "direct sum over different algebras");
        let f = self.field();
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut action = BTreeMap::new();
        for (key, ms) in &self.action {
            let (e, i) = *key;
            let blocks = ms
                .iter()
                .zip(&other.action[key])
                .map(|(a, b)| {
                    let mut m = Matrix::zeros(f, dims[i + e], dims[i]);
                    for r in 0..a.rows() {
                        for c in 0..a.cols() {
                            m.set(r, c, a.get(r, c).clone());
                        }
                    }
                    for r in 0..b.rows() {
                        for c in 0..b.cols() {
                            m.set(a.rows() + r, a.cols() + c, b.get(r, c).clone());
                        }
                    }
                    m
                })
                .collect();
            action.insert(*key, blocks);
        }
        Ok(LambdaModule { algebra: self.algebra.clone(), p: self.p, dims, action })
    }

    /// Transports the structure along a graded automorphism `g`:
    /// `(g·λ)(a ⊗ v) = g λ(a ⊗ g⁻¹ v)`.
    pub fn gauge(&self, g: &[Matrix]) -> Result<LambdaModule> {
        ensure_dims!(g.len() == self.dims.len(), "gauge element for every degree");
        let inv = g.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        let mut action = BTreeMap::new();
        for ((e, i), ms) in &self.action {
            let ts = ms.iter().map(|m| g[i + e].mul(&m.mul(&inv[*i])?)).collect::<Result<Vec<_>>>()?;
            action.insert((*e, *i), ts);
        }
        Ok(LambdaModule { algebra: self.algebra.clone(), p: self.p, dims: self.dims.clone(), action })
    }

    /// Same structure constants read in another field.
    pub fn coerce(&self, field: FieldSpec) -> Result<LambdaModule> {
        let algebra = Arc::new(self.algebra.coerce(field)?);
        let action = self
            .action
            .iter()
            .map(|(k, ms)| Ok((*k, ms.iter().map(|m| m.coerce(field)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(LambdaModule { algebra, p: self.p, dims: self.dims.clone(), action })
    }

    pub fn with_algebra(&self, algebra: Arc<TruncatedGradedAlgebra>) -> Result<LambdaModule> {
        LambdaModule::new(algebra, self.p, self.dims.clone(), self.action.clone())
    }

    /// Common denominator of every action entry (1 over prime fields).
    pub fn denominators(&self) -> Vec<num_bigint::BigInt> {
        let mut out = Vec::new();
        for ms in self.action.values() {
            for m in ms {
                for x in m.entries() {
                    let d = x.denominator();
                    if d != num_bigint::BigInt::from(1) {
                        out.push(d);
                    }
                }
            }
        }
        out
    }
}

/// A quotient module with projection and section matrices per degree.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: LambdaModule,
    pub proj: Vec<Matrix>,
    pub lift: Vec<Matrix>,
}

impl Quotient {
    /// Pulls a tuple of subspaces of the quotient back to the ambient module.
    pub fn pull_back(&self, subs: &[Subspace]) -> Result<SubTuple> {
        subs.iter().zip(&self.proj).map(|(s, p)| s.preimage_under(p)).collect()
    }
}

/// A submodule in its own basis together with the inclusion matrices.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: LambdaModule,
    pub incl: Vec<Matrix>,
}

impl Submodule {
    /// Pushes a tuple of subspaces of the submodule forward to the ambient module.
    pub fn push_forward(&self, subs: &[Subspace]) -> Result<SubTuple> {
        subs.iter().zip(&self.incl).map(|(s, m)| s.image_under(m)).collect()
    }
}

pub fn subs_dims(subs: &[Subspace]) -> Vec<usize> {
    subs.iter().map(Subspace::dim).collect()
}

pub fn subs_contains(big: &[Subspace], small: &[Subspace]) -> Result<bool> {
    ensure_dims!(big.len() == small.len(), "tuples of different lengths");
    for (b, s) in big.iter().zip(small) {
        if !b.contains(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn subs_sum(a: &[Subspace], b: &[Subspace]) -> Result<SubTuple> {
    a.iter().zip(b).map(|(x, y)| x.sum(y)).collect()
}
