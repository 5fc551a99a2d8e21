use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Result};
use crate::linalg::{Matrix, SparseAcc, SparseMatrix, SparseVec};
use crate::scalar::{FieldSpec, Scalar};

use super::{FilteredLambdaModule, LambdaModule};

/// A degree-preserving linear map between window modules, one matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub maps: Vec<Matrix>,
}

impl ModuleMorphism {
    pub fn commutes(&self, source: &LambdaModule, target: &LambdaModule) -> bool {
        source.actions().iter().all(|((e, i), ms)| {
            ms.iter().enumerate().all(|(a, m)| {
                let lhs = self.maps[i + e].mul(m).expect("shapes");
                let rhs = target.act(*e, *i, a).mul(&self.maps[*i]).expect("shapes");
                lhs == rhs
            })
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.iter().all(Matrix::is_invertible)
    }
}

struct Unknowns {
    offsets: Vec<usize>,
    src: Vec<usize>,
    total: usize,
}

impl Unknowns {
    fn new(m: &LambdaModule, n: &LambdaModule) -> Self {
        let mut offsets = Vec::new();
        let mut total = 0;
        for (a, b) in m.dims().iter().zip(n.dims()) {
            offsets.push(total);
            total += a * b;
        }
        Unknowns { offsets, src: m.dims().to_vec(), total }
    }

    /// Index of entry `(r, c)` of the degree-`d` matrix.
    fn at(&self, d: usize, r: usize, c: usize) -> usize {
        self.offsets[d] + r * self.src[d] + c
    }
}

fn check_windows(m: &LambdaModule, n: &LambdaModule) -> Result<()> {
    precondition!(
        m.p() == n.p() && m.len() == n.len(),
        "modules live on different windows [{}, {}] and [{}, {}]",
        m.p(),
        m.q(),
        n.p(),
        n.q()
    );
    precondition!(m.algebra().same_structure(n.algebra()), "modules over different algebras");
    Ok(())
}

/// A basis of `Hom(M, N)` of graded λ-module maps; with `filtered`, only maps
/// sending each flag step of `M` into the corresponding step of `N`.
pub fn hom_space(m: &FilteredLambdaModule, n: &FilteredLambdaModule, filtered: bool) -> Result<Vec<ModuleMorphism>> {
    let (mm, nn) = (m.module(), n.module());
    check_windows(mm, nn)?;
    let f = mm.field();
    let u = Unknowns::new(mm, nn);
    let mut rows: Vec<SparseVec> = Vec::new();
    for ((e, i), ms) in mm.actions() {
        let (e, i) = (*e, *i);
        for (a, tm) in ms.iter().enumerate() {
            let tn = nn.act(e, i, a);
            // (f_{i+e} T^M - T^N f_i)[r, c] = 0
            for r in 0..nn.dims()[i + e] {
                for c in 0..mm.dims()[i] {
                    let mut acc = SparseAcc::new();
                    for k in 0..mm.dims()[i + e] {
                        acc.add(u.at(i + e, r, k), tm.get(k, c).clone());
                    }
                    for k in 0..nn.dims()[i] {
                        acc.add(u.at(i, k, c), -tn.get(r, k));
                    }
                    let row = acc.finish();
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    if filtered {
        precondition!(m.length() == n.length(), "filtered Hom needs flags of equal length");
        for (sm, sn) in m.steps().iter().zip(n.steps()) {
            for d in 0..mm.dims().len() {
                let ann = sn[d].annihilator();
                for v in sm[d].basis() {
                    for w in ann.basis() {
                        let mut acc = SparseAcc::new();
                        for (r, wr) in w.iter().enumerate() {
                            for (c, vc) in v.iter().enumerate() {
                                acc.add(u.at(d, r, c), wr * vc);
                            }
                        }
                        let row = acc.finish();
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let mut system = SparseMatrix::zeros(f, 0, u.total).to_dense();
    if !rows.is_empty() {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![f.zero(); u.total];
                for (j, x) in r {
                    v[*j] = x.clone();
                }
                v
            })
            .collect();
        system = Matrix::from_rows(f, u.total, dense)?;
    }
    let kernel = system.kernel();
    Ok(kernel.basis().iter().map(|v| unpack(f, &u, mm, nn, v)).collect())
}

fn unpack(f: FieldSpec, u: &Unknowns, m: &LambdaModule, n: &LambdaModule, v: &[Scalar]) -> ModuleMorphism {
    let maps = (0..m.dims().len())
        .map(|d| {
            let mut mat = Matrix::zeros(f, n.dims()[d], m.dims()[d]);
            for r in 0..n.dims()[d] {
                for c in 0..m.dims()[d] {
                    mat.set(r, c, v[u.at(d, r, c)].clone());
                }
            }
            mat
        })
        .collect();
    ModuleMorphism { maps }
}

/// `Hom(M, N)` for unfiltered modules.
pub fn hom_space_plain(m: &LambdaModule, n: &LambdaModule) -> Result<Vec<ModuleMorphism>> {
    hom_space(&FilteredLambdaModule::trivial(m.clone()), &FilteredLambdaModule::trivial(n.clone()), false)
}

/// Searches for an invertible (filtered) morphism by seeded random
/// combinations of a Hom basis. `None` means none was found.
pub fn find_isomorphism(
    m: &FilteredLambdaModule,
    n: &FilteredLambdaModule,
    filtered: bool,
    seed: u64,
) -> Result<Option<ModuleMorphism>> {
    if m.module().dims() != n.module().dims() {
        return Ok(None);
    }
    if filtered && (0..m.length().min(n.length())).any(|k| m.step_dims(k) != n.step_dims(k)) {
        return Ok(None);
    }
    let basis = hom_space(m, n, filtered)?;
    if m.module().total_dim() == 0 {
        return Ok(Some(ModuleMorphism { maps: n.module().dims().iter().map(|_| Matrix::zeros(m.module().field(), 0, 0)).collect() }));
    }
    let f = m.module().field();
    for b in &basis {
        if b.is_invertible() {
            return Ok(Some(b.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let coeffs: Vec<Scalar> = basis
            .iter()
            .map(|_| match f {
                FieldSpec::Rationals => f.from_i64(rng.gen_range(-9..=9)),
                FieldSpec::Prime(p) => f.from_i64(rng.gen_range(0..p as i64)),
            })
            .collect();
        let maps = (0..m.module().dims().len())
            .map(|d| {
                let mut acc = Matrix::zeros(f, n.module().dims()[d], m.module().dims()[d]);
                for (c, b) in coeffs.iter().zip(&basis) {
                    acc = acc.add(&b.maps[d].scale(c)).expect("shapes");
                }
                acc
            })
            .collect();
        let cand = ModuleMorphism { maps };
        if cand.is_invertible() {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::examples;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn endomorphisms_of_cyclic_window() {
        let m = examples::line_bundle_window(Q, 0, 0, 1);
        let h = hom_space_plain(&m, &m).unwrap();
        assert_eq!(h.len(), 1);
        assert!(h[0].commutes(&m, &m));
    }

    #[test]
    fn hom_into_zero() {
        let m = examples::line_bundle_window(Q, 1, 0, 2);
        let z = examples::line_bundle_window(Q, -5, 0, 2);
        assert_eq!(hom_space_plain(&m, &z).unwrap().len(), 0);
    }

    #[test]
    fn filtered_endomorphisms_of_split_flag() {
        // 1 + dim Hom(O(-2), O) + 1 with dim Hom(O(a), O(b)) = max(b - a + 1, 0).
        let oracle = 1 + std::cmp::max(0 - (-2) + 1, 0) + 1;
        let f = examples::split_filtered(Q, &[(0, 1), (-2, 1)], 0, 2);
        let filt = hom_space(&f, &f, true).unwrap();
        let plain = hom_space(&f, &f, false).unwrap();
        assert_eq!(filt.len() as i64, oracle);
        assert!(plain.len() >= filt.len());
    }

    #[test]
    fn isomorphism_found_for_gauge_transform() {
        let m = examples::split_window(Q, &[(1, 1), (0, 1)], 0, 1);
        let g: Vec<Matrix> = m
            .dims()
            .iter()
            .map(|&n| {
                let mut g = Matrix::identity(Q, n);
                if n > 1 {
                    g.set(0, 1, Q.from_i64(3));
                }
                g
            })
            .collect();
        let gm = m.gauge(&g).unwrap();
        let iso = find_isomorphism(&FilteredLambdaModule::trivial(m.clone()), &FilteredLambdaModule::trivial(gm.clone()), false, 0)
            .unwrap()
            .unwrap();
        assert!(iso.commutes(&m, &gm));
    }
}
