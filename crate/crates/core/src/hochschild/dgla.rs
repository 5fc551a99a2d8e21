use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{Coord, Layout};
use crate::error::{ensure_dims, precondition, Error, Result};
use crate::graded::{FilteredLambdaModule, LambdaModule, TruncatedGradedAlgebra};
use crate::linalg::{Matrix, SparseAcc, SparseMatrix, SparseVec};
use crate::scalar::{FieldSpec, Scalar};

use super::GaugeElement;

/// Largest window length `q − p` accepted by [`HochschildDgla::build`].
pub const MAX_WINDOW_LENGTH: usize = 4;

/// An element of `Lⁿ`, stored sparsely in the coordinates of the full
/// (unfiltered) cochain layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cochain {
    pub degree: usize,
    pub entries: SparseVec,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, entries: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn from_acc(degree: usize, acc: SparseAcc) -> Self {
        Cochain { degree, entries: acc.finish() }
    }
}

/// The dgla `L = ⊕_n Hom_gr(𝔪^{⊗n} ⊗ V, V)` on a window space `V`, optionally
/// restricted to flag-preserving cochains and optionally twisted by an MC point.
///
/// Conventions, fixed so that MC points are exactly the associative actions:
/// * `(dφ)(a_1…a_{n+1}, v) = Σ_{i=1}^{n} (−1)^i φ(…, a_i a_{i+1}, …, v)`;
/// * `(φ⌣ψ)(a_1…a_{m+n}, v) = φ(a_1…a_m, ψ(a_{m+1}…a_{m+n}, v))`;
/// * `[φ, ψ] = φ⌣ψ − (−1)^{|φ||ψ|} ψ⌣φ`.
///
/// Then `dμ + ½[μ, μ] = dμ + μ⌣μ` evaluates to `μ(a, μ(b, v)) − μ(ab, v)`.
/// The filtered variant works in a flag-adapted basis, where flag-preserving
/// cochains are the coordinates whose source level is at least the target level.
#[derive(Clone, Debug)]
pub struct HochschildDgla {
    algebra: Arc<TruncatedGradedAlgebra>,
    dims: Vec<usize>,
    levels: Option<Vec<Vec<u32>>>,
    layouts: Vec<Layout>,
    twist: Option<Cochain>,
}

impl HochschildDgla {
    pub fn build(algebra: Arc<TruncatedGradedAlgebra>, dims: Vec<usize>, levels: Option<Vec<Vec<u32>>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Schema("window must contain at least one degree".into()));
        }
        let len = dims.len() - 1;
        precondition!(len <= MAX_WINDOW_LENGTH, "window length {len} exceeds the limit {MAX_WINDOW_LENGTH}");
        if let Some(lv) = &levels {
            ensure_dims!(lv.len() == dims.len(), "levels for {} degrees", lv.len());
            for (l, &d) in lv.iter().zip(&dims) {
                ensure_dims!(l.len() == d, "levels list of length {} for a degree of dimension {d}", l.len());
            }
        }
        let layouts = (0..=len).map(|n| Layout::new(&algebra, &dims, &dims, n)).collect();
        Ok(HochschildDgla { algebra, dims, levels, layouts, twist: None })
    }

    /// The unfiltered dgla of a module's underlying space and the module's structure point.
    pub fn for_module(m: &LambdaModule) -> Result<(Self, Cochain)> {
        let l = Self::build(m.algebra().clone(), m.dims().to_vec(), None)?;
        let mu = l.module_cochain(m)?;
        Ok((l, mu))
    }

    /// The flag-preserving sub-dgla in the module's adapted basis, with the
    /// structure point written in that basis.
    pub fn for_filtered(m: &FilteredLambdaModule) -> Result<(Self, Cochain)> {
        let (am, levels) = m.adapted_module()?;
        let l = Self::build(am.algebra().clone(), am.dims().to_vec(), Some(levels))?;
        let mu = l.module_cochain(&am)?;
        Ok((l, mu))
    }

    pub fn algebra(&self) -> &Arc<TruncatedGradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn levels(&self) -> Option<&[Vec<u32>]> {
        self.levels.as_deref()
    }

    pub fn is_filtered(&self) -> bool {
        self.levels.is_some()
    }

    pub fn twisting(&self) -> Option<&Cochain> {
        self.twist.as_ref()
    }

    /// Highest degree with `Lⁿ ≠ 0` possible, `q − p`.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn layout(&self, n: usize) -> Option<&Layout> {
        self.layouts.get(n)
    }

    /// Indices (in the full layout) of the basis of `Lⁿ`, or of `Lⁿ_−` when filtered.
    pub fn basis(&self, n: usize) -> Vec<usize> {
        let Some(l) = self.layouts.get(n) else { return Vec::new() };
        match &self.levels {
            None => (0..l.dim()).collect(),
            Some(lv) => (0..l.dim()).filter(|&j| l.gap(j, lv, lv) >= 0).collect(),
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    pub fn total_dim(&self) -> usize {
        (0..=self.top()).map(|n| self.dim(n)).sum()
    }

    pub fn basis_cochain(&self, n: usize, idx: usize) -> Cochain {
        Cochain { degree: n, entries: vec![(idx, self.field().one())] }
    }

    /// Whether every coordinate of `c` lies in the (filtered) subspace.
    pub fn contains(&self, c: &Cochain) -> bool {
        let Some(l) = self.layouts.get(c.degree) else { return c.is_zero() };
        match &self.levels {
            None => c.entries.iter().all(|(j, _)| *j < l.dim()),
            Some(lv) => c.entries.iter().all(|(j, _)| *j < l.dim() && l.gap(*j, lv, lv) >= 0),
        }
    }

    /// Dense coordinates in the basis of [`Self::basis`].
    pub fn coordinates(&self, c: &Cochain) -> Result<Vec<Scalar>> {
        let basis = self.basis(c.degree);
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut out = vec![self.field().zero(); basis.len()];
        for (j, x) in &c.entries {
            let k = pos.get(j).ok_or_else(|| Error::Precondition("cochain outside the dgla".into()))?;
            out[*k] = x.clone();
        }
        Ok(out)
    }

    pub fn from_coordinates(&self, degree: usize, coords: &[Scalar]) -> Result<Cochain> {
        let basis = self.basis(degree);
        ensure_dims!(coords.len() == basis.len(), "{} coordinates for a space of dimension {}", coords.len(), basis.len());
        let entries = basis.iter().zip(coords).filter(|(_, x)| !x.is_zero()).map(|(&j, x)| (j, x.clone())).collect();
        Ok(Cochain { degree, entries })
    }

    fn decode(&self, n: usize, idx: usize) -> (Coord, &crate::cochain::Block) {
        let l = &self.layouts[n];
        let c = l.coord(idx);
        (c, &l.blocks[c.block as usize])
    }

    /// The structure point `μ ∈ L¹` of a module on this space.
    pub fn module_cochain(&self, m: &LambdaModule) -> Result<Cochain> {
        ensure_dims!(m.dims() == self.dims.as_slice(), "module dims {:?} differ from {:?}", m.dims(), self.dims);
        let mut entries = Vec::new();
        if let Some(l) = self.layouts.get(1) {
            for b in &l.blocks {
                let e = b.degs[0];
                for a in 0..b.n_a {
                    let t = m.act(e, b.src, a);
                    for v in 0..b.dm {
                        for w in 0..b.dn {
                            let x = t.get(w, v);
                            if !x.is_zero() {
                                entries.push((b.local(a, v, w), x.clone()));
                            }
                        }
                    }
                }
            }
        }
        Ok(Cochain { degree: 1, entries })
    }

    /// The λ-module whose action is `μ`, placed on the window starting at `p`.
    pub fn cochain_to_module(&self, mu: &Cochain, p: i64) -> Result<LambdaModule> {
        precondition!(mu.degree == 1, "structure points have degree 1");
        let mut m = LambdaModule::zero_action(self.algebra.clone(), p, self.dims.clone());
        for (j, x) in &mu.entries {
            let (c, b) = self.decode(1, *j);
            m.act_mut(b.degs[0], b.src, c.a as usize).set(c.w as usize, c.v as usize, x.clone());
        }
        Ok(m)
    }

    /// The reduced differential, ignoring any twist.
    pub fn d_plain(&self, phi: &Cochain) -> Cochain {
        let n = phi.degree;
        let Some(tgt) = self.layouts.get(n + 1) else { return Cochain::zero(n + 1) };
        let mut acc = SparseAcc::new();
        for (j, x) in &phi.entries {
            let (c, b) = self.decode(n, *j);
            let alpha = b.split_a(c.a as usize);
            for k in 0..n {
                let sign = if k % 2 == 0 { -x.clone() } else { x.clone() };
                let e = b.degs[k];
                for g in 1..e {
                    let h = e - g;
                    let mut degs = b.degs[..k].to_vec();
                    degs.push(g);
                    degs.push(h);
                    degs.extend(&b.degs[k + 1..]);
                    let Some(bi) = tgt.block_index(&degs, b.src) else { continue };
                    let ob = &tgt.blocks[bi];
                    for y in 0..self.algebra.dim(g) {
                        let lm = self.algebra.left_mult(g, y, h).expect("product within top degree");
                        for z in 0..self.algebra.dim(h) {
                            let coef = lm.get(alpha[k], z);
                            if coef.is_zero() {
                                continue;
                            }
                            let mut a = alpha[..k].to_vec();
                            a.push(y);
                            a.push(z);
                            a.extend(&alpha[k + 1..]);
                            acc.add(ob.local(ob.join_a(&a), c.v as usize, c.w as usize), &sign * coef);
                        }
                    }
                }
            }
        }
        Cochain::from_acc(n + 1, acc)
    }

    /// The differential of this dgla: `d`, or `d + [μ, ·]` when twisted.
    pub fn d(&self, phi: &Cochain) -> Cochain {
        let out = self.d_plain(phi);
        match &self.twist {
            None => out,
            Some(mu) => add(&out, &self.bracket(mu, phi), &self.field().one()),
        }
    }

    pub fn cup(&self, phi: &Cochain, psi: &Cochain) -> Cochain {
        let deg = phi.degree + psi.degree;
        let Some(out) = self.layouts.get(deg) else { return Cochain::zero(deg) };
        // ψ entries indexed by (target degree, target basis vector).
        let mut by_tgt: HashMap<(usize, u32), Vec<(Coord, &Scalar)>> = HashMap::new();
        for (j, x) in &psi.entries {
            let (c, b) = self.decode(psi.degree, *j);
            by_tgt.entry((b.tgt, c.w)).or_default().push((c, x));
        }
        let mut acc = SparseAcc::new();
        for (i, x) in &phi.entries {
            let (c1, b1) = self.decode(phi.degree, *i);
            let Some(list) = by_tgt.get(&(b1.src, c1.v)) else { continue };
            let alpha = b1.split_a(c1.a as usize);
            for (c2, y) in list {
                let b2 = &self.layouts[psi.degree].blocks[c2.block as usize];
                let mut degs = b1.degs.clone();
                degs.extend(&b2.degs);
                let bi = out.block_index(&degs, b2.src).expect("composable cochains land in a block");
                let ob = &out.blocks[bi];
                let mut a = alpha.clone();
                a.extend(b2.split_a(c2.a as usize));
                acc.add(ob.local(ob.join_a(&a), c2.v as usize, c1.w as usize), x * *y);
            }
        }
        Cochain::from_acc(deg, acc)
    }

    pub fn bracket(&self, phi: &Cochain, psi: &Cochain) -> Cochain {
        let sign = if (phi.degree * psi.degree) % 2 == 0 { -self.field().one() } else { self.field().one() };
        add(&self.cup(phi, psi), &self.cup(psi, phi), &sign)
    }

    /// `dμ + ½[μ, μ]`, computed as `dμ + μ⌣μ` so that it is defined in every characteristic.
    pub fn mc_residual(&self, mu: &Cochain) -> Result<Cochain> {
        precondition!(mu.degree == 1, "MC residual needs a degree-1 cochain, got degree {}", mu.degree);
        Ok(add(&self.d_plain(mu), &self.cup(mu, mu), &self.field().one()))
    }

    /// The same dgla with differential `d^μ = d + [μ, ·]`.
    pub fn twist(&self, mu: &Cochain) -> Result<Self> {
        precondition!(self.twist.is_none(), "dgla is already twisted");
        precondition!(self.contains(mu), "twisting element lies outside the dgla");
        precondition!(self.mc_residual(mu)?.is_zero(), "twisting element is not a Maurer–Cartan point");
        let mut out = self.clone();
        out.twist = Some(mu.clone());
        Ok(out)
    }

    /// The differential `Lⁿ → L^{n+1}` as a matrix in the (filtered) bases.
    pub fn differential_matrix(&self, n: usize) -> SparseMatrix {
        let src = self.basis(n);
        let tgt = self.basis(n + 1);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let cols: Vec<SparseVec> = src
            .iter()
            .map(|&j| {
                let mut col: SparseVec = self
                    .d(&self.basis_cochain(n, j))
                    .entries
                    .into_iter()
                    .map(|(r, x)| (*pos.get(&r).expect("differential preserves the dgla"), x))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        SparseMatrix::from_sparse_cols(self.field(), tgt.len(), &cols)
    }

    /// `dim Hⁿ` for `0 ≤ n ≤ max_degree`.
    pub fn cohomology_dims(&self, max_degree: usize) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=max_degree).map(|n| self.differential_matrix(n).rank()).collect();
        (0..=max_degree).map(|n| self.dim(n) - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
    }

    /// `(g·φ)(a…, v) = g φ(a…, g⁻¹ v)`.
    pub fn gauge_act(&self, g: &GaugeElement, phi: &Cochain) -> Result<Cochain> {
        ensure_dims!(g.dims() == self.dims, "gauge element on the wrong space");
        if let Some(lv) = &self.levels {
            precondition!(g.preserves_levels(lv), "gauge element does not preserve the flag");
        }
        let n = phi.degree;
        let Some(l) = self.layouts.get(n) else { return Ok(Cochain::zero(n)) };
        let f = self.field();
        let mut slots: BTreeMap<(u32, u32), Matrix> = BTreeMap::new();
        for (j, x) in &phi.entries {
            let (c, b) = self.decode(n, *j);
            slots
                .entry((c.block, c.a))
                .or_insert_with(|| Matrix::zeros(f, b.dn, b.dm))
                .set(c.w as usize, c.v as usize, x.clone());
        }
        let mut acc = SparseAcc::new();
        for ((bi, a), m) in slots {
            let b = &l.blocks[bi as usize];
            let t = g.map(b.tgt).mul(&m)?.mul(g.inverse(b.src))?;
            for w in 0..b.dn {
                for v in 0..b.dm {
                    acc.add(b.local(a as usize, v, w), t.get(w, v).clone());
                }
            }
        }
        Ok(Cochain::from_acc(n, acc))
    }
}

/// `x + c·y`.
pub(crate) fn add(x: &Cochain, y: &Cochain, c: &Scalar) -> Cochain {
    debug_assert_eq!(x.degree, y.degree);
    Cochain { degree: x.degree, entries: crate::linalg::axpy(&x.entries, c, &y.entries) }
}
