//! Direct constructions of standard window modules.
//!
//! These build the section modules of split bundles on P¹ straight from
//! monomial multiplication, without going through presentations, so they can
//! serve as independent references for the presentation-based pipeline.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::linalg::{Matrix, Subspace};
use crate::scalar::FieldSpec;

use super::algebra::monomials;
use super::{FilteredLambdaModule, LambdaModule, TruncatedGradedAlgebra};

/// Sections of `O(a)` on P¹ in degrees `p..=q`: the degree-`d` piece has the
/// binary forms of degree `a + d` as basis, and `A = k[x, y]` acts by
/// multiplication.
pub fn line_bundle_window(field: FieldSpec, a: i64, p: i64, q: i64) -> LambdaModule {
    split_window(field, &[(a, 1)], p, q)
}

/// Sections of `⊕ O(a_i)^{r_i}` on P¹ in degrees `p..=q`, summands in the given order.
pub fn split_window(field: FieldSpec, blocks: &[(i64, usize)], p: i64, q: i64) -> LambdaModule {
    let len = (q - p) as usize;
    let alg = Arc::new(TruncatedGradedAlgebra::polynomial(field, 2, len));
    split_window_over(alg, blocks, p, q)
}

pub fn split_window_over(alg: Arc<TruncatedGradedAlgebra>, blocks: &[(i64, usize)], p: i64, q: i64) -> LambdaModule {
    let field = alg.field();
    let len = (q - p) as usize;
    let twists: Vec<i64> = blocks.iter().flat_map(|&(a, r)| std::iter::repeat(a).take(r)).collect();
    // Basis of degree d: for each summand, monomials of degree a + d.
    let basis: Vec<Vec<(usize, Vec<u32>)>> = (0..=len)
        .map(|i| {
            let d = p + i as i64;
            twists
                .iter()
                .enumerate()
                .flat_map(|(s, &a)| {
                    let deg = a + d;
                    let ms = if deg >= 0 { monomials(2, deg as u32) } else { Vec::new() };
                    ms.into_iter().map(move |m| (s, m))
                })
                .collect()
        })
        .collect();
    let index: Vec<BTreeMap<(usize, Vec<u32>), usize>> = basis
        .iter()
        .map(|b| b.iter().enumerate().map(|(k, x)| (x.clone(), k)).collect())
        .collect();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut action = BTreeMap::new();
    for e in 1..=len {
        let gens = monomials(2, e as u32);
        for i in 0..=len - e {
            let mats = gens
                .iter()
                .map(|g| {
                    let mut m = Matrix::zeros(field, dims[i + e], dims[i]);
                    for (col, (s, u)) in basis[i].iter().enumerate() {
                        let prod: Vec<u32> = u.iter().zip(g).map(|(x, y)| x + y).collect();
                        m.set(index[i + e][&(*s, prod)], col, field.one());
                    }
                    m
                })
                .collect();
            action.insert((e, i), mats);
        }
    }
    LambdaModule::new(alg, p, dims, action).expect("consistent construction")
}

/// The split bundle window filtered by the partial sums of its blocks:
/// step `k` is the span of the first `k` blocks.
pub fn split_filtered(field: FieldSpec, blocks: &[(i64, usize)], p: i64, q: i64) -> FilteredLambdaModule {
    let m = split_window(field, blocks, p, q);
    let steps = block_steps(&m, blocks, p);
    FilteredLambdaModule::new(m, steps).expect("block flags are closed")
}

/// Coordinate flags spanned by leading blocks of a split window module.
pub fn block_steps(m: &LambdaModule, blocks: &[(i64, usize)], p: i64) -> Vec<Vec<Subspace>> {
    let field = m.field();
    let len = m.len();
    (1..=blocks.len())
        .map(|k| {
            (0..=len)
                .map(|i| {
                    let d = p + i as i64;
                    let count: usize = blocks[..k]
                        .iter()
                        .map(|&(a, r)| r * if a + d >= 0 { (a + d + 1) as usize } else { 0 })
                        .sum();
                    let idx: Vec<usize> = (0..count).collect();
                    Subspace::coordinate(field, m.dims()[i], &idx)
                })
                .collect()
        })
        .collect()
}

/// A window module plus a one-dimensional summand in the top degree that no
/// action reaches; never generated in the bottom degree.
pub fn with_isolated_top(m: &LambdaModule) -> LambdaModule {
    let mut dims = vec![0; m.dims().len()];
    *dims.last_mut().expect("nonempty window") = 1;
    let extra = LambdaModule::zero_action(m.algebra().clone(), m.p(), dims);
    m.direct_sum(&extra).expect("same window")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_dimensions() {
        let q = FieldSpec::Rationals;
        assert_eq!(line_bundle_window(q, 0, 0, 2).dims(), &[1, 2, 3]);
        assert_eq!(line_bundle_window(q, -3, 0, 2).dims(), &[0, 0, 0]);
        let f = split_filtered(q, &[(0, 1), (-2, 1)], 0, 2);
        assert_eq!(f.step_dims(0), vec![1, 2, 3]);
        assert_eq!(f.step_dims(1), vec![1, 2, 4]);
    }
}
