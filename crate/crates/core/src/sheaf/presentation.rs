use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{ensure_dims, precondition, Error, Result};
use crate::graded::{monomials, FilteredLambdaModule, LambdaModule, TruncatedGradedAlgebra};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::FieldSpec;

use super::poly::Poly;

/// A homogeneous element of the free module `⊕ A(−a_i)`: one coefficient
/// polynomial per generator, each of degree `degree − a_i` (or zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    pub degree: i64,
    pub coeffs: Vec<Poly>,
}

/// `M = coker(⊕ A(−b_j) → ⊕ A(−a_i))` over `A = k[x_0, …, x_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    field: FieldSpec,
    nvars: usize,
    gens: Vec<i64>,
    rels: Vec<FreeElement>,
}

/// A presentation with a flag of graded submodules, each given by generating
/// elements of the ambient free module. `steps` lists `M¹ ⊆ … ⊆ M^{s−1}`;
/// the ambient module is the last step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPresentation {
    pub ambient: GradedPresentation,
    pub steps: Vec<Vec<FreeElement>>,
}

/// The degree-`d` slice of a presentation: the free part with its
/// (generator, monomial) labels, the relation subspace in it, and the
/// labels of the complement basis used for the quotient.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: i64,
    pub labels: Vec<(usize, Vec<u32>)>,
    pub relations: Subspace,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.relations.codim()
    }

    /// Labels of the monomials forming the quotient basis.
    pub fn basis_labels(&self) -> Vec<(usize, Vec<u32>)> {
        self.relations.non_pivots().into_iter().map(|c| self.labels[c].clone()).collect()
    }
}

impl GradedPresentation {
    pub fn new(field: FieldSpec, nvars: usize, gens: Vec<i64>, rels: Vec<FreeElement>) -> Result<Self> {
        precondition!(nvars >= 1, "a presentation needs at least one variable");
        let p = GradedPresentation { field, nvars, gens, rels: Vec::new() };
        for r in &rels {
            p.check_element(r)?;
        }
        Ok(GradedPresentation { rels, ..p })
    }

    /// The free module `⊕ A(−a_i)`.
    pub fn free(field: FieldSpec, nvars: usize, gens: Vec<i64>) -> Result<Self> {
        Self::new(field, nvars, gens, Vec::new())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    pub fn rels(&self) -> &[FreeElement] {
        &self.rels
    }

    pub fn check_element(&self, el: &FreeElement) -> Result<()> {
        ensure_dims!(el.coeffs.len() == self.gens.len(), "{} coefficients for {} generators", el.coeffs.len(), self.gens.len());
        for (c, &a) in el.coeffs.iter().zip(&self.gens) {
            if c.field() != self.field {
                return Err(Error::FieldMismatch("coefficient over another field".into()));
            }
            ensure_dims!(c.nvars() == self.nvars, "coefficient in {} variables, expected {}", c.nvars(), self.nvars);
            if c.is_zero() {
                continue;
            }
            let want = el.degree - a;
            if c.homogeneous_degree().map(i64::from) != Some(want) {
                return Err(Error::Schema(format!(
                    "coefficient {c} of an element of degree {} on a generator of degree {a} must be homogeneous of degree {want}",
                    el.degree
                )));
            }
        }
        Ok(())
    }

    /// The `i`-th generator as an element.
    pub fn generator(&self, i: usize) -> FreeElement {
        let coeffs = (0..self.gens.len())
            .map(|j| if i == j { Poly::constant(self.field, self.nvars, self.field.one()) } else { Poly::zero(self.field, self.nvars) })
            .collect();
        FreeElement { degree: self.gens[i], coeffs }
    }

    /// `(generator, monomial)` labels of the free part in degree `d`.
    pub fn free_labels(&self, d: i64) -> Vec<(usize, Vec<u32>)> {
        let mut out = Vec::new();
        for (i, &a) in self.gens.iter().enumerate() {
            if d >= a {
                out.extend(monomials(self.nvars, (d - a) as u32).into_iter().map(|m| (i, m)));
            }
        }
        out
    }

    /// Coordinates of `x^shift · el` in the free part of degree `el.degree + |shift|`.
    fn element_vector(&self, el: &FreeElement, shift: &[u32], index: &BTreeMap<(usize, Vec<u32>), usize>) -> Vector {
        let mut v = vec![self.field.zero(); index.len()];
        for (i, c) in el.coeffs.iter().enumerate() {
            for (m, x) in c.shift(shift).terms() {
                v[index[&(i, m.clone())]] += x;
            }
        }
        v
    }

    /// The degree-`d` part of the submodule generated by `elements`, inside the free part.
    pub fn span_in_degree(&self, elements: &[FreeElement], d: i64) -> Result<Subspace> {
        let labels = self.free_labels(d);
        let index: BTreeMap<_, _> = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        let mut vecs = Vec::new();
        for el in elements {
            if el.degree > d {
                continue;
            }
            for shift in monomials(self.nvars, (d - el.degree) as u32) {
                vecs.push(self.element_vector(el, &shift, &index));
            }
        }
        Subspace::span(self.field, labels.len(), vecs)
    }

    pub fn graded_piece(&self, d: i64) -> Result<GradedPiece> {
        let labels = self.free_labels(d);
        let relations = self.span_in_degree(&self.rels, d)?;
        Ok(GradedPiece { degree: d, labels, relations })
    }

    /// `dim M_d` for `d` in `from..=to`.
    pub fn hilbert_function(&self, from: i64, to: i64) -> Result<Vec<usize>> {
        (from..=to).map(|d| Ok(self.graded_piece(d)?.dim())).collect()
    }

    /// Quotient coordinates of the image of a submodule in degree `d`.
    fn image_in_piece(&self, piece: &GradedPiece, elements: &[FreeElement]) -> Result<Subspace> {
        let span = self.span_in_degree(elements, piece.degree)?;
        let vecs = span.basis().iter().map(|v| piece.relations.quotient_coordinates(v)).collect();
        Subspace::span(self.field, piece.dim(), vecs)
    }

    /// Direct sum of presentations over the same ring.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        precondition!(self.field == other.field && self.nvars == other.nvars, "direct sum over different rings");
        let zero = Poly::zero(self.field, self.nvars);
        let pad = |el: &FreeElement, before: usize, after: usize| FreeElement {
            degree: el.degree,
            coeffs: std::iter::repeat(zero.clone())
                .take(before)
                .chain(el.coeffs.iter().cloned())
                .chain(std::iter::repeat(zero.clone()).take(after))
                .collect(),
        };
        let (g1, g2) = (self.gens.len(), other.gens.len());
        let rels = self.rels.iter().map(|r| pad(r, 0, g2)).chain(other.rels.iter().map(|r| pad(r, g1, 0))).collect();
        let gens = self.gens.iter().chain(&other.gens).copied().collect();
        Self::new(self.field, self.nvars, gens, rels)
    }
}

impl FilteredPresentation {
    pub fn new(ambient: GradedPresentation, steps: Vec<Vec<FreeElement>>) -> Result<Self> {
        for s in &steps {
            for el in s {
                ambient.check_element(el)?;
            }
        }
        Ok(FilteredPresentation { ambient, steps })
    }

    pub fn trivial(ambient: GradedPresentation) -> Self {
        FilteredPresentation { ambient, steps: Vec::new() }
    }

    /// Number of flag steps, the ambient module included.
    pub fn length(&self) -> usize {
        self.steps.len() + 1
    }

    /// `dim M^k_d` for `d` in `from..=to`, with `k = length()` giving the ambient module.
    pub fn step_hilbert_function(&self, k: usize, from: i64, to: i64) -> Result<Vec<usize>> {
        precondition!(k >= 1 && k <= self.length(), "step {k} outside 1..={}", self.length());
        if k == self.length() {
            return self.ambient.hilbert_function(from, to);
        }
        (from..=to)
            .map(|d| {
                let piece = self.ambient.graded_piece(d)?;
                Ok(self.ambient.image_in_piece(&piece, &self.steps[k - 1])?.dim())
            })
            .collect()
    }
}

/// `A_{[0, len]}` for a presentation ring.
fn window_algebra(field: FieldSpec, nvars: usize, len: usize) -> Arc<TruncatedGradedAlgebra> {
    Arc::new(TruncatedGradedAlgebra::polynomial(field, nvars, len))
}

/// `Γ_{[p,q]}`: the graded pieces `M_p, …, M_q` with `A` acting by multiplication.
pub fn gamma_window(pres: &GradedPresentation, p: i64, q: i64) -> Result<LambdaModule> {
    precondition!(p <= q, "empty window [{p}, {q}]");
    let len = (q - p) as usize;
    let f = pres.field;
    let alg = window_algebra(f, pres.nvars, len);
    let pieces = (p..=q).map(|d| pres.graded_piece(d)).collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = pieces.iter().map(GradedPiece::dim).collect();
    let mut action = BTreeMap::new();
    for e in 1..=len {
        let gens = monomials(pres.nvars, e as u32);
        for i in 0..=len - e {
            let (src, tgt) = (&pieces[i], &pieces[i + e]);
            let index: BTreeMap<_, _> = tgt.labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
            let basis = src.basis_labels();
            let mats = gens
                .iter()
                .map(|g| {
                    let cols = basis
                        .iter()
                        .map(|(s, m)| {
                            let mut v = vec![f.zero(); tgt.labels.len()];
                            let prod: Vec<u32> = m.iter().zip(g).map(|(a, b)| a + b).collect();
                            v[index[&(*s, prod)]] = f.one();
                            tgt.relations.quotient_coordinates(&v)
                        })
                        .collect();
                    Matrix::from_cols(f, dims[i + e], cols)
                })
                .collect::<Result<Vec<_>>>()?;
            action.insert((e, i), mats);
        }
    }
    LambdaModule::new(alg, p, dims, action)
}

/// `Γ^fil_{[p,q]}`: the window module of the ambient presentation with the
/// images of the flag steps.
pub fn gamma_window_filtered(fp: &FilteredPresentation, p: i64, q: i64) -> Result<FilteredLambdaModule> {
    let m = gamma_window(&fp.ambient, p, q)?;
    let pieces = (p..=q).map(|d| fp.ambient.graded_piece(d)).collect::<Result<Vec<_>>>()?;
    let mut steps = Vec::new();
    for s in &fp.steps {
        steps.push(pieces.iter().map(|pc| fp.ambient.image_in_piece(pc, s)).collect::<Result<Vec<_>>>()?);
    }
    steps.push(m.full_subs());
    FilteredLambdaModule::new(m, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::examples;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn quotient_by_x() -> GradedPresentation {
        let x = Poly::parse(Q, 2, "x").unwrap();
        GradedPresentation::new(Q, 2, vec![0], vec![FreeElement { degree: 1, coeffs: vec![x] }]).unwrap()
    }

    #[test]
    fn graded_piece_dimensions() {
        let free = GradedPresentation::free(Q, 2, vec![0]).unwrap();
        assert_eq!(free.hilbert_function(-2, 4).unwrap(), vec![0, 0, 1, 2, 3, 4, 5]);
        assert_eq!(quotient_by_x().hilbert_function(-1, 4).unwrap(), vec![0, 1, 1, 1, 1, 1]);
        let twisted = GradedPresentation::free(Q, 2, vec![3, 5]).unwrap();
        assert_eq!(twisted.hilbert_function(0, 2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn rejects_inhomogeneous_relations() {
        let bad = Poly::parse(Q, 2, "x + 1").unwrap();
        assert!(GradedPresentation::new(Q, 2, vec![0], vec![FreeElement { degree: 1, coeffs: vec![bad] }]).is_err());
    }

    #[test]
    fn gamma_matches_direct_construction() {
        for (blocks, p, q) in [(vec![(0i64, 1usize)], 0, 2), (vec![(1, 1), (-1, 1)], 0, 2), (vec![(-3, 1)], 0, 2)] {
            let gens = blocks.iter().flat_map(|&(a, r)| std::iter::repeat(-a).take(r)).collect();
            let pres = GradedPresentation::free(Q, 2, gens).unwrap();
            assert_eq!(gamma_window(&pres, p, q).unwrap(), examples::split_window(Q, &blocks, p, q));
        }
    }

    #[test]
    fn gamma_of_quotient_is_associative() {
        let m = gamma_window(&quotient_by_x(), 0, 3).unwrap();
        assert_eq!(m.dims(), &[1, 1, 1, 1]);
        assert!(m.is_associative());
    }

    #[test]
    fn gamma_of_direct_sum() {
        let a = quotient_by_x();
        let b = GradedPresentation::free(Q, 2, vec![-1]).unwrap();
        let s = gamma_window(&a.direct_sum(&b).unwrap(), 0, 2).unwrap();
        let t = gamma_window(&a, 0, 2).unwrap().direct_sum(&gamma_window(&b, 0, 2).unwrap()).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn filtered_gamma_flag_dims() {
        let pres = GradedPresentation::free(Q, 2, vec![0, 2]).unwrap();
        let fp = FilteredPresentation::new(pres.clone(), vec![vec![pres.generator(0)]]).unwrap();
        let f = gamma_window_filtered(&fp, 0, 2).unwrap();
        assert_eq!(f.step_dims(0), vec![1, 2, 3]);
        assert_eq!(f.step_dims(1), vec![1, 2, 4]);
        assert_eq!(fp.step_hilbert_function(1, 0, 2).unwrap(), vec![1, 2, 3]);
    }
}
