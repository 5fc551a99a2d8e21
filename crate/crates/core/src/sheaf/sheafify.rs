use std::collections::BTreeMap;

use crate::error::{precondition, Error, Result};
use crate::graded::{find_isomorphism, FilteredLambdaModule, LambdaModule};
use crate::linalg::{Matrix, Subspace, Vector};

use super::poly::Poly;
use super::presentation::{gamma_window, gamma_window_filtered, FilteredPresentation, FreeElement, GradedPresentation};

const ISO_SEED: u64 = 0;

fn generated_in_bottom(m: &LambdaModule) -> Result<bool> {
    let mut seeds = m.zero_subs();
    seeds[0] = Subspace::full(m.field(), m.dim_p());
    Ok(m.closure(&seeds)?.iter().all(Subspace::is_full))
}

fn ring_vars(m: &LambdaModule) -> Result<usize> {
    m.algebra()
        .monomial_labels()
        .map(|(n, _)| n)
        .ok_or_else(|| Error::Precondition("the module's algebra is not a polynomial ring with monomial labels".into()))
}

/// The left adjoint `𝒮` on a module generated in its bottom degree `p`:
/// generators are a basis of `M_p` placed in degree `p`, relations a minimal
/// generating set of the kernel `K` of `A_{[0,q−p]} ⊗ M_p → M`, collected
/// degree by degree.
pub fn sheafify(m: &LambdaModule) -> Result<GradedPresentation> {
    let nvars = ring_vars(m)?;
    precondition!(generated_in_bottom(m)?, "module is not generated in its bottom degree {}", m.p());
    let f = m.field();
    let p = m.p();
    let pres = GradedPresentation::free(f, nvars, vec![p; m.dim_p()])?;
    let (_, labels) = m.algebra().monomial_labels().expect("checked");
    let mut rels: Vec<FreeElement> = Vec::new();
    for i in 1..m.dims().len() {
        let d = p + i as i64;
        let free = pres.free_labels(d);
        let mono_index: BTreeMap<&Vec<u32>, usize> = labels[i].iter().enumerate().map(|(k, l)| (l, k)).collect();
        let cols: Vec<Vector> = free
            .iter()
            .map(|(g, mono)| m.act(i, 0, mono_index[mono]).col(*g))
            .collect();
        let eval = Matrix::from_cols(f, m.dims()[i], cols)?;
        let kernel = eval.kernel();
        let mut known = pres.span_in_degree(&rels, d)?;
        for v in kernel.basis() {
            if known.contains_vector(v) {
                continue;
            }
            known = known.add_vectors(vec![v.clone()])?;
            let mut coeffs = vec![Poly::zero(f, nvars); m.dim_p()];
            for ((g, mono), x) in free.iter().zip(v) {
                if !x.is_zero() {
                    coeffs[*g].add_term(mono.clone(), x.clone());
                }
            }
            rels.push(FreeElement { degree: d, coeffs });
        }
    }
    GradedPresentation::new(f, nvars, vec![p; m.dim_p()], rels)
}

/// `𝒮` applied stepwise: the ambient presentation of the whole module, with
/// each flag step generated by its bottom-degree part.
pub fn sheafify_filtered(fm: &FilteredLambdaModule) -> Result<FilteredPresentation> {
    precondition!(fm.is_strongly_finitely_generated(), "flag is not strongly finitely generated");
    let ambient = sheafify(fm.module())?;
    let f = fm.module().field();
    let nvars = ambient.nvars();
    let p = fm.module().p();
    let steps = fm.steps()[..fm.length() - 1]
        .iter()
        .map(|s| {
            s[0].basis()
                .iter()
                .map(|v| FreeElement { degree: p, coeffs: v.iter().map(|x| Poly::constant(f, nvars, x.clone())).collect() })
                .collect()
        })
        .collect();
    FilteredPresentation::new(ambient, steps)
}

/// Whether `Γ_{[p,q]}(𝒮(M))` restricted to degrees `≥ p′` is isomorphic to
/// `M_{≥p′}`. A module not generated in degree `p` fails.
pub fn roundtrip_check(m: &LambdaModule, p_prime: i64) -> Result<bool> {
    precondition!(p_prime >= m.p() && p_prime <= m.q(), "p′ = {p_prime} outside [{}, {}]", m.p(), m.q());
    if ring_vars(m).is_err() || !generated_in_bottom(m)? {
        return Ok(false);
    }
    let back = gamma_window(&sheafify(m)?, m.p(), m.q())?;
    let a = FilteredLambdaModule::trivial(back.truncate_below(p_prime)?);
    let b = FilteredLambdaModule::trivial(m.truncate_below(p_prime)?);
    Ok(find_isomorphism(&a, &b, false, ISO_SEED)?.is_some())
}

/// The filtered round trip, comparing flags as well.
pub fn roundtrip_check_filtered(fm: &FilteredLambdaModule, p_prime: i64) -> Result<bool> {
    let m = fm.module();
    precondition!(p_prime >= m.p() && p_prime <= m.q(), "p′ = {p_prime} outside [{}, {}]", m.p(), m.q());
    if ring_vars(m).is_err() || !fm.is_strongly_finitely_generated() {
        return Ok(false);
    }
    let back = gamma_window_filtered(&sheafify_filtered(fm)?, m.p(), m.q())?;
    Ok(find_isomorphism(&back.truncate_below(p_prime)?, &fm.truncate_below(p_prime)?, true, ISO_SEED)?.is_some())
}
