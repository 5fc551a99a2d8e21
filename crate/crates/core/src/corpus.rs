//! Seeded generators for test corpora. Every generator is a pure function of
//! its arguments, using ChaCha8 seeded from the given `u64`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graded::{monomials, FilteredLambdaModule, LambdaModule, TruncatedGradedAlgebra};
use crate::hochschild::GaugeElement;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::{FieldSpec, Scalar};
use crate::sheaf::{gamma_window, FreeElement, GradedPresentation, Poly, SplitBundleSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small random scalar: `−2..=2` over ℚ, uniform over `𝔽_p`.
pub fn random_scalar(field: FieldSpec, rng: &mut impl Rng) -> Scalar {
    match field {
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-2..=2)),
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

fn random_nonzero(field: FieldSpec, rng: &mut impl Rng) -> Scalar {
    loop {
        let x = random_scalar(field, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn random_vector(field: FieldSpec, n: usize, rng: &mut impl Rng) -> Vector {
    (0..n).map(|_| random_scalar(field, rng)).collect()
}

/// A split-bundle corpus entry with window parameters `p ≤ p′ ≤ q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCase {
    pub spec: SplitBundleSpec,
    pub p: i64,
    pub p_prime: i64,
    pub q: i64,
}

/// The fixed split-bundle corpus on P¹ with its window parameters. `p` is the
/// regularity bound and `q = p + 3`; `p′ = p + 1` except where the
/// larger bottom degree would push the exact semistability certificate
/// past [`GRASSMANNIAN_CAP`](crate::stability::GRASSMANNIAN_CAP).
pub fn split_corpus() -> Vec<SplitCase> {
    let entries: [(&[(i64, usize)], i64); 9] = [
        (&[(0, 1)], 1),
        (&[(1, 1), (-1, 1)], 1),
        (&[(0, 1), (-2, 1)], 1),
        (&[(0, 2), (-2, 1)], 0),
        (&[(2, 1), (0, 1)], 1),
        (&[(1, 2)], 1),
        (&[(1, 1), (0, 1)], 1),
        (&[(2, 1), (1, 1), (0, 1)], 1),
        (&[(1, 1), (0, 1), (-1, 1), (-2, 1)], 0),
    ];
    entries
        .iter()
        .map(|&(b, shift)| {
            let spec = SplitBundleSpec::new(b.to_vec()).expect("valid corpus entry");
            let p = spec.regularity();
            SplitCase { spec, p, p_prime: p + shift, q: p + 3 }
        })
        .collect()
}

/// Random split bundles with twists in `−bound..=bound`, one to three blocks
/// and multiplicities 1 or 2.
pub fn split_bundle_specs(seed: u64, bound: i64, count: usize) -> Vec<SplitBundleSpec> {
    let mut r = rng(seed);
    let twists: Vec<i64> = (-bound..=bound).collect();
    (0..count)
        .map(|_| {
            let k = r.gen_range(1..=3.min(twists.len()));
            let mut chosen: Vec<i64> = twists.choose_multiple(&mut r, k).copied().collect();
            chosen.sort_unstable_by(|a, b| b.cmp(a));
            let blocks = chosen.into_iter().map(|a| (a, r.gen_range(1..=2))).collect();
            SplitBundleSpec::new(blocks).expect("distinct sorted twists")
        })
        .collect()
}

/// A random presentation over `k[x, y]`: one or two generators in degrees 0
/// or 1 and up to two random homogeneous relations of degree 1 or 2 above them.
pub fn random_presentation(field: FieldSpec, rng: &mut impl Rng) -> Result<GradedPresentation> {
    let ngens = rng.gen_range(1..=2);
    let gens: Vec<i64> = (0..ngens).map(|_| rng.gen_range(0..=1)).collect();
    let nrels = rng.gen_range(0..=2);
    let mut rels = Vec::new();
    for _ in 0..nrels {
        let degree = gens.iter().min().copied().unwrap_or(0) + rng.gen_range(1..=2);
        let coeffs = gens
            .iter()
            .map(|&a| {
                let mut p = Poly::zero(field, 2);
                if degree >= a {
                    for m in monomials(2, (degree - a) as u32) {
                        p.add_term(m, random_scalar(field, rng));
                    }
                }
                p
            })
            .collect();
        rels.push(FreeElement { degree, coeffs });
    }
    GradedPresentation::new(field, 2, gens, rels)
}

/// Associative modules: windows `[0, 2]` of random presentations, moved by a
/// random graded automorphism so the action is not in monomial form.
pub fn genuine_modules(field: FieldSpec, seed: u64, count: usize) -> Result<Vec<LambdaModule>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = gamma_window(&random_presentation(field, &mut r)?, 0, 2)?;
        if m.total_dim() == 0 {
            continue;
        }
        let g = GaugeElement::random(field, m.dims(), None, &mut r);
        out.push(m.gauge(g.maps())?);
    }
    Ok(out)
}

/// Changes one random action entry of `m`, retrying until associativity
/// breaks; `None` if no single-entry change breaks it within the budget.
pub fn perturb(m: &LambdaModule, rng: &mut impl Rng) -> Option<LambdaModule> {
    let f = m.field();
    let slots: Vec<(usize, usize, usize, usize, usize)> = m
        .actions()
        .iter()
        .flat_map(|(&(e, i), ms)| {
            ms.iter().enumerate().flat_map(move |(a, mat)| {
                (0..mat.rows()).flat_map(move |r| (0..mat.cols()).map(move |c| (e, i, a, r, c)))
            })
        })
        .collect();
    if slots.is_empty() {
        return None;
    }
    for _ in 0..64 {
        let &(e, i, a, row, col) = slots.choose(rng).expect("nonempty");
        let mut out = m.clone();
        out.act_mut(e, i, a).add_to(row, col, &random_nonzero(f, rng));
        if !out.is_associative() {
            return Some(out);
        }
    }
    None
}

/// Non-associative λ-structures obtained by perturbing genuine modules.
pub fn perturbed_modules(field: FieldSpec, seed: u64, count: usize) -> Result<Vec<LambdaModule>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let base = genuine_modules(field, seed.wrapping_add(k).wrapping_mul(0x9E37_79B9), 1)?.remove(0);
        k += 1;
        if let Some(m) = perturb(&base, &mut r) {
            out.push(m);
        }
    }
    Ok(out)
}

/// A random flag of `steps` proper steps plus the whole module, each step
/// the closure of the previous one and a random vector in a random degree.
pub fn random_flag(m: &LambdaModule, steps: usize, rng: &mut impl Rng) -> Result<FilteredLambdaModule> {
    let f = m.field();
    let mut flag = Vec::new();
    let mut cur = m.zero_subs();
    for _ in 0..steps {
        let nonzero: Vec<usize> = (0..m.dims().len()).filter(|&d| m.dims()[d] > 0).collect();
        let Some(&d) = nonzero.choose(rng) else { break };
        let mut seeds = cur.clone();
        seeds[d] = seeds[d].add_vectors(vec![random_vector(f, m.dims()[d], rng)])?;
        let next = m.closure(&seeds)?;
        if next != cur && !next.iter().all(Subspace::is_full) {
            flag.push(next.clone());
            cur = next;
        }
    }
    flag.push(m.full_subs());
    FilteredLambdaModule::new(m.clone(), flag)
}

/// Genuine modules with random flags of one or two proper steps.
pub fn filtered_modules(field: FieldSpec, seed: u64, count: usize) -> Result<Vec<FilteredLambdaModule>> {
    let mut r = rng(seed ^ 0xF1A6);
    genuine_modules(field, seed, count)?
        .iter()
        .map(|m| {
            let s = r.gen_range(1..=2);
            random_flag(m, s, &mut r)
        })
        .collect()
}

/// `(M, g, g·M)` with `M` genuine and `g` a random graded automorphism.
pub fn gauge_orbit_pairs(field: FieldSpec, seed: u64, count: usize) -> Result<Vec<(LambdaModule, GaugeElement, LambdaModule)>> {
    let mut r = rng(seed ^ 0x6A06E);
    genuine_modules(field, seed, count)?
        .into_iter()
        .map(|m| {
            let g = GaugeElement::random(field, m.dims(), None, &mut r);
            let gm = m.gauge(g.maps())?;
            Ok((m, g, gm))
        })
        .collect()
}

/// Random λ-structures (not necessarily associative) over `k[x, y]`, cycling
/// through every window length `0..=2` and dimension vector with entries `≤ 2`.
pub fn small_lambda_modules(field: FieldSpec, seed: u64, count: usize) -> Vec<LambdaModule> {
    let mut shapes: Vec<Vec<usize>> = Vec::new();
    for len in 0..=2usize {
        let mut dims = vec![0usize; len + 1];
        loop {
            shapes.push(dims.clone());
            let mut k = 0;
            while k <= len && dims[k] == 2 {
                dims[k] = 0;
                k += 1;
            }
            if k > len {
                break;
            }
            dims[k] += 1;
        }
    }
    let algebras: Vec<Arc<TruncatedGradedAlgebra>> =
        (0..=2).map(|len| Arc::new(TruncatedGradedAlgebra::polynomial(field, 2, len))).collect();
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let dims = &shapes[k % shapes.len()];
            let len = dims.len() - 1;
            let alg = &algebras[len];
            let mut action = BTreeMap::new();
            for e in 1..=len {
                for i in 0..=len - e {
                    let mats = (0..alg.dim(e))
                        .map(|_| {
                            let mut m = Matrix::zeros(field, dims[i + e], dims[i]);
                            for row in 0..dims[i + e] {
                                for col in 0..dims[i] {
                                    m.set(row, col, random_scalar(field, &mut r));
                                }
                            }
                            m
                        })
                        .collect();
                    action.insert((e, i), mats);
                }
            }
            LambdaModule::new(alg.clone(), 0, dims.clone(), action).expect("shapes match")
        })
        .collect()
}
