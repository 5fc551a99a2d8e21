use crate::cochain::Layout;
use crate::error::{precondition, Error, Result};
use crate::graded::{FilteredLambdaModule, LambdaModule};
use crate::linalg::{SparseAcc, SparseMatrix, SparseVec};
use crate::scalar::FieldSpec;

/// A bounded cochain complex `C⁰ → C¹ → …` with a descending filtration by
/// coordinate subcomplexes: basis vector `j` of `Cⁿ` lies in `F_p` iff
/// `degrees[n][j] ≥ p`.
///
/// Differentials are stored for `n ≤ valid_through`, so cohomology is exact
/// in those degrees; `C^{valid_through+1}` is kept only as a target.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    field: FieldSpec,
    dims: Vec<usize>,
    diffs: Vec<SparseMatrix>,
    degrees: Vec<Vec<u32>>,
}

impl FilteredComplex {
    pub fn new(field: FieldSpec, diffs: Vec<SparseMatrix>, degrees: Vec<Vec<u32>>) -> Result<Self> {
        precondition!(degrees.len() == diffs.len() + 1, "need one filtration list per cochain degree");
        let dims: Vec<usize> = degrees.iter().map(Vec::len).collect();
        for (n, d) in diffs.iter().enumerate() {
            precondition!(d.cols() == dims[n] && d.rows() == dims[n + 1], "differential {n} has wrong shape");
            for r in 0..d.rows() {
                for (c, _) in d.row(r) {
                    precondition!(
                        degrees[n + 1][r] >= degrees[n][*c],
                        "differential {n} does not preserve the filtration"
                    );
                }
            }
        }
        for n in 1..diffs.len() {
            precondition!(diffs[n].mul(&diffs[n - 1])?.is_zero(), "d∘d ≠ 0 at degree {n}");
        }
        Ok(FilteredComplex { field, dims, diffs, degrees })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diff(&self, n: usize) -> &SparseMatrix {
        &self.diffs[n]
    }

    pub fn degrees(&self, n: usize) -> &[u32] {
        &self.degrees[n]
    }

    /// Highest degree whose cohomology is determined.
    pub fn valid_through(&self) -> usize {
        self.diffs.len() - 1
    }

    /// Filtration length `T`: `F_T = 0` in every degree.
    pub fn filtration_length(&self) -> u32 {
        self.degrees.iter().flatten().max().map_or(1, |m| m + 1)
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(SparseMatrix::rank).collect();
        (0..=self.valid_through())
            .map(|n| self.dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
            .collect()
    }
}

/// Which bar complex to build between two flagged modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomFlavor {
    /// All graded cochains, trivial filtration.
    Graded,
    /// Flag-preserving cochains, filtered by how far they lower the flag level.
    Filtered,
}

/// The bar complex `Hom_gr(𝔪^{⊗n} ⊗ M, N)` with differential
/// `(δφ)(a_1…a_{n+1}, m) = a_1·φ(a_2…, m) + Σ_{i=1}^{n} (−1)^i φ(…a_i a_{i+1}…, m)
///  + (−1)^{n+1} φ(a_1…a_n, a_{n+1}·m)`,
/// built up to cochain degree `n_max + 1`.
///
/// In the filtered flavor both modules are first rewritten in flag-adapted
/// bases; a cochain coordinate from source level `l` to target level `l'`
/// lies in the complex iff `l' ≤ l`, and sits in `F_{l − l'}`.
pub fn filtered_hom_complex(
    m: &FilteredLambdaModule,
    n: &FilteredLambdaModule,
    flavor: HomFlavor,
    n_max: usize,
) -> Result<FilteredComplex> {
    let (mm, nn) = (m.module(), n.module());
    precondition!(mm.p() == nn.p() && mm.len() == nn.len(), "modules on different windows");
    precondition!(mm.algebra().same_structure(nn.algebra()), "modules over different algebras");
    let (am, lm, an, ln) = match flavor {
        HomFlavor::Filtered => {
            let (am, lm) = m.adapted_module()?;
            let (an, ln) = n.adapted_module()?;
            (am, lm, an, ln)
        }
        HomFlavor::Graded => {
            let ones = |x: &LambdaModule| x.dims().iter().map(|&d| vec![1u32; d]).collect::<Vec<_>>();
            (mm.clone(), ones(mm), nn.clone(), ones(nn))
        }
    };
    hom_complex_levels(&am, &lm, &an, &ln, n_max)
}

/// Bar complex between modules whose flags are coordinate flags with the given levels.
pub fn hom_complex_levels(
    m: &LambdaModule,
    lm: &[Vec<u32>],
    n: &LambdaModule,
    ln: &[Vec<u32>],
    n_max: usize,
) -> Result<FilteredComplex> {
    let alg = m.algebra();
    let field = m.field();
    let layouts: Vec<Layout> = (0..=n_max + 1).map(|k| Layout::new(alg, m.dims(), n.dims(), k)).collect();
    // Keep coordinates with gap ≥ 0, renumbered.
    let mut keep: Vec<Vec<Option<usize>>> = Vec::new();
    let mut degrees: Vec<Vec<u32>> = Vec::new();
    for l in &layouts {
        let mut map = vec![None; l.dim()];
        let mut deg = Vec::new();
        for (j, slot) in map.iter_mut().enumerate() {
            let g = l.gap(j, lm, ln);
            if g >= 0 {
                *slot = Some(deg.len());
                deg.push(g as u32);
            }
        }
        keep.push(map);
        degrees.push(deg);
    }
    let mut diffs = Vec::new();
    for k in 0..=n_max {
        let cols: Vec<SparseVec> = (0..layouts[k].dim())
            .filter(|&j| keep[k][j].is_some())
            .map(|j| {
                let full = bar_image(m, n, &layouts[k], &layouts[k + 1], j);
                let mut out = Vec::with_capacity(full.len());
                for (r, x) in full {
                    match keep[k + 1][r] {
                        Some(rr) => out.push((rr, x)),
                        None => {
                            return Err(Error::Precondition(
                                "bar differential leaves the flag-preserving subcomplex".into(),
                            ))
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        diffs.push(SparseMatrix::from_sparse_cols(field, degrees[k + 1].len(), &cols));
    }
    FilteredComplex::new(field, diffs, degrees)
}

/// `δ` applied to the elementary cochain at coordinate `j` of `src`.
fn bar_image(m: &LambdaModule, n: &LambdaModule, src: &Layout, tgt: &Layout, j: usize) -> SparseVec {
    let alg = m.algebra();
    let field = m.field();
    let len = m.len();
    let c = src.coord(j);
    let b = &src.blocks[c.block as usize];
    let alpha = b.split_a(c.a as usize);
    let (v, w) = (c.v as usize, c.w as usize);
    let arity = src.n;
    let mut acc = SparseAcc::new();

    // a_1 · φ(a_2 … , m)
    for f in 1..=len - b.tgt {
        let mut degs = vec![f];
        degs.extend(&b.degs);
        let Some(bi) = tgt.block_index(&degs, b.src) else { continue };
        let ob = &tgt.blocks[bi];
        for x in 0..alg.dim(f) {
            let act = n.act(f, b.tgt, x);
            let mut a = vec![x];
            a.extend(&alpha);
            let af = ob.join_a(&a);
            for w2 in 0..act.rows() {
                let coef = act.get(w2, w);
                if !coef.is_zero() {
                    acc.add(ob.local(af, v, w2), coef.clone());
                }
            }
        }
    }

    // Σ (−1)^i φ(… a_i a_{i+1} …)
    for k in 0..arity {
        let sign = if (k + 1) % 2 == 0 { field.one() } else { field.from_i64(-1) };
        let e = b.degs[k];
        for g in 1..e {
            let h = e - g;
            let mut degs = b.degs[..k].to_vec();
            degs.push(g);
            degs.push(h);
            degs.extend(&b.degs[k + 1..]);
            let Some(bi) = tgt.block_index(&degs, b.src) else { continue };
            let ob = &tgt.blocks[bi];
            for x in 0..alg.dim(g) {
                let lm = alg.left_mult(g, x, h).expect("product within top degree");
                for y in 0..alg.dim(h) {
                    let coef = lm.get(alpha[k], y);
                    if coef.is_zero() {
                        continue;
                    }
                    let mut a = alpha[..k].to_vec();
                    a.push(x);
                    a.push(y);
                    a.extend(&alpha[k + 1..]);
                    acc.add(ob.local(ob.join_a(&a), v, w), &sign * coef);
                }
            }
        }
    }

    // (−1)^{n+1} φ(a_1 … a_n, a_{n+1} · m)
    let sign = if (arity + 1) % 2 == 0 { field.one() } else { field.from_i64(-1) };
    for f in 1..=b.src {
        let s2 = b.src - f;
        let mut degs = b.degs.clone();
        degs.push(f);
        let Some(bi) = tgt.block_index(&degs, s2) else { continue };
        let ob = &tgt.blocks[bi];
        for x in 0..alg.dim(f) {
            let act = m.act(f, s2, x);
            let mut a = alpha.clone();
            a.push(x);
            let af = ob.join_a(&a);
            for v2 in 0..act.cols() {
                let coef = act.get(v, v2);
                if !coef.is_zero() {
                    acc.add(ob.local(af, v2, w), &sign * coef);
                }
            }
        }
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{examples, hom_space};

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn degree_zero_cohomology_is_hom() {
        let f = examples::split_filtered(Q, &[(0, 1), (-2, 1)], 0, 2);
        let c = filtered_hom_complex(&f, &f, HomFlavor::Filtered, 1).unwrap();
        let h = c.cohomology_dims();
        assert_eq!(h[0], hom_space(&f, &f, true).unwrap().len());
        assert_eq!(h, vec![5, 0]);
        let g = filtered_hom_complex(&f, &f, HomFlavor::Graded, 1).unwrap();
        assert_eq!(g.cohomology_dims()[0], hom_space(&f, &f, false).unwrap().len());
    }

    #[test]
    fn zero_target_gives_zero_complex() {
        let m = FilteredLambdaModule::trivial(examples::line_bundle_window(Q, 0, 0, 2));
        let z = FilteredLambdaModule::trivial(examples::line_bundle_window(Q, -4, 0, 2));
        let c = filtered_hom_complex(&m, &z, HomFlavor::Graded, 2).unwrap();
        assert!(c.dims().iter().all(|&d| d == 0));
    }
}
