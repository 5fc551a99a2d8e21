use std::collections::{BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::graded::{subs_dims, LambdaModule, SubTuple};
use crate::linalg::{all_subspaces, combinations, Matrix, Subspace, Vector};
use crate::scalar::FieldSpec;

use super::slope::{module_slope, tuple_slope, SlopeWeights};

/// Submodule count above which exhaustive enumeration gives way to the
/// structural search.
pub const ENUMERATION_CAP: usize = 20_000;
/// Largest number of bottom-degree subspaces the structural search visits.
pub const GRASSMANNIAN_CAP: usize = 200_000;
/// Primes tried, in order, for reduction certificates over ℚ.
pub const CERTIFICATE_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
/// Coordinate subsets of `M_p` are added to the ℚ catalog up to this dimension.
const CATALOG_COORDINATE_DIM: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Heuristic,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "heuristic" => Ok(SearchMode::Heuristic),
            _ => Err(Error::Schema(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub method: String,
    pub candidates: usize,
}

impl SearchStats {
    fn new(method: &str, candidates: usize) -> Self {
        SearchStats { method: method.into(), candidates }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StabilityVerdict {
    Semistable,
    Stable,
    Destabilized { witness: SubTuple, slope: BigRational },
    Inconclusive { searched: String },
}

impl StabilityVerdict {
    /// `Some(true)` for (semi)stable, `Some(false)` for destabilized, `None` if inconclusive.
    pub fn is_semistable(&self) -> Option<bool> {
        match self {
            StabilityVerdict::Semistable | StabilityVerdict::Stable => Some(true),
            StabilityVerdict::Destabilized { .. } => Some(false),
            StabilityVerdict::Inconclusive { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StabilityVerdict::Semistable => "semistable",
            StabilityVerdict::Stable => "stable",
            StabilityVerdict::Destabilized { .. } => "destabilized",
            StabilityVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Nonzero vectors of `F_p^n` up to scaling: first nonzero coordinate is 1.
fn projective_points(field: FieldSpec, n: usize) -> Vec<Vector> {
    let p = field.characteristic() as i64;
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = (p as u128).pow(free as u32);
        for code in 0..count {
            let mut v = vec![field.zero(); n];
            v[lead] = field.one();
            let mut c = code;
            for x in v.iter_mut().skip(lead + 1) {
                *x = field.from_i64((c % p as u128) as i64);
                c /= p as u128;
            }
            out.push(v);
        }
    }
    out
}

/// Every λ-submodule over a prime field, by breadth-first search from zero:
/// each submodule is reached by adding the closure of one vector at a time.
/// `None` if more than `cap` submodules exist.
pub fn enumerate_submodules(m: &LambdaModule, cap: usize) -> Result<Option<Vec<SubTuple>>> {
    let f = m.field();
    precondition!(f.is_finite(), "submodule enumeration needs a finite field");
    let points: Vec<Vec<Vector>> = m.dims().iter().map(|&n| projective_points(f, n)).collect();
    let zero = m.zero_subs();
    let mut seen: BTreeSet<SubTuple> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(n) = queue.pop_front() {
        for (d, pts) in points.iter().enumerate() {
            for v in pts {
                if n[d].contains_vector(v) {
                    continue;
                }
                let mut seeds = n.clone();
                seeds[d] = seeds[d].add_vectors(vec![v.clone()])?;
                let c = m.closure(&seeds)?;
                if seen.insert(c.clone()) {
                    if seen.len() > cap {
                        return Ok(None);
                    }
                    queue.push_back(c);
                }
            }
        }
    }
    Ok(Some(seen.into_iter().collect()))
}

fn total_dim(s: &SubTuple) -> usize {
    subs_dims(s).iter().sum()
}

/// The candidate with maximal slope, then maximal total dimension, then least
/// canonical order. Candidates with undefined slope are ignored.
pub fn best_candidate<I: IntoIterator<Item = SubTuple>>(cands: I, w: SlopeWeights) -> Option<(SubTuple, BigRational)> {
    let mut best: Option<(SubTuple, BigRational, usize)> = None;
    for c in cands {
        let Some(s) = tuple_slope(&c, w) else { continue };
        let d = total_dim(&c);
        let better = match &best {
            None => true,
            Some((bc, bs, bd)) => (&s, d) > (bs, *bd) || ((&s, d) == (bs, *bd) && c < *bc),
        };
        if better {
            best = Some((c, s, d));
        }
    }
    best.map(|(c, s, _)| (c, s))
}

fn bottom_seed(m: &LambdaModule, v: &Subspace) -> SubTuple {
    let mut seeds = m.zero_subs();
    seeds[0] = v.clone();
    seeds
}

/// The two submodules that can carry the best slope among those with bottom `V`:
/// the largest with top `c(V)` (the top of the closure of `V`) and the largest
/// with top `M_q`. Slope is monotone in the top dimension once `V` is fixed.
fn candidates_for(m: &LambdaModule, v: &Subspace) -> Result<[SubTuple; 2]> {
    let len = m.len();
    let c = m.closure(&bottom_seed(m, v))?;
    let full_top = Subspace::full(m.field(), m.dims()[len]);
    Ok([m.largest_with_top(v, &c[len])?, m.largest_with_top(v, &full_top)?])
}

fn catalog_bottoms(m: &LambdaModule) -> Result<Vec<Subspace>> {
    let f = m.field();
    let n = m.dim_p();
    let mut set: BTreeSet<Subspace> = BTreeSet::new();
    set.insert(Subspace::zero(f, n));
    set.insert(Subspace::full(f, n));
    if n <= CATALOG_COORDINATE_DIM {
        for r in 1..n {
            for idx in combinations(n, r) {
                set.insert(Subspace::coordinate(f, n, &idx));
            }
        }
    }
    let mut all_rows: Vec<Vector> = Vec::new();
    for (_, _, a) in m.actions_from(0) {
        set.insert(a.kernel());
        all_rows.extend(a.row_vecs());
    }
    for j in 1..=m.len() {
        let rows: Vec<Vector> = m.actions()[&(j, 0)].iter().flat_map(Matrix::row_vecs).collect();
        if !rows.is_empty() {
            set.insert(Matrix::from_rows(f, n, rows)?.kernel());
        }
    }
    if !all_rows.is_empty() {
        set.insert(Matrix::from_rows(f, n, all_rows)?.kernel());
    }
    Ok(set.into_iter().collect())
}

/// Bottom-degree subspaces to visit and whether the list is complete.
fn bottoms(m: &LambdaModule) -> Result<(Vec<Subspace>, bool)> {
    if m.field().is_finite() {
        if let Some(all) = all_subspaces(m.field(), m.dim_p(), GRASSMANNIAN_CAP) {
            return Ok((all, true));
        }
    }
    Ok((catalog_bottoms(m)?, false))
}

/// A maximal destabilizing submodule: maximal slope among submodules with
/// defined slope, then maximal total dimension, then least canonical order.
/// The flag reports whether the search was provably complete.
pub fn max_destabilizing(m: &LambdaModule, w: SlopeWeights, mode: SearchMode) -> Result<(SubTuple, bool, SearchStats)> {
    if mode == SearchMode::Exhaustive {
        precondition!(m.field().is_finite(), "exhaustive search needs a finite field");
        if let Some(all) = enumerate_submodules(m, ENUMERATION_CAP)? {
            let n = all.len();
            let (best, _) = best_candidate(all, w).ok_or_else(|| Error::Precondition("module has no slope".into()))?;
            return Ok((best, true, SearchStats::new("enumeration", n)));
        }
    }
    let (vs, complete) = bottoms(m)?;
    let mut cands = Vec::with_capacity(2 * vs.len());
    for v in &vs {
        cands.extend(candidates_for(m, v)?);
    }
    let n = cands.len();
    let method = if complete { "grassmannian" } else { "catalog" };
    let (best, _) = best_candidate(cands, w).ok_or_else(|| Error::Precondition("module has no slope".into()))?;
    Ok((best, complete, SearchStats::new(method, n)))
}

/// Semistability with respect to `w`, exact over prime fields.
fn exact_verdict(m: &LambdaModule, w: SlopeWeights, mode: SearchMode) -> Result<(StabilityVerdict, SearchStats)> {
    let Some(mu) = module_slope(m, w) else {
        return Ok((StabilityVerdict::Semistable, SearchStats::new("degenerate", 0)));
    };
    if mode == SearchMode::Exhaustive {
        if let Some(all) = enumerate_submodules(m, ENUMERATION_CAP)? {
            let full = m.full_subs();
            let n = all.len();
            let stats = SearchStats::new("enumeration", n);
            let mut stable = true;
            for s in &all {
                if let Some(sl) = tuple_slope(s, w) {
                    if *s != full && sl == mu {
                        stable = false;
                    }
                }
            }
            let (best, bs) = best_candidate(all, w).expect("M itself has a slope");
            if bs > mu {
                return Ok((StabilityVerdict::Destabilized { witness: best, slope: bs }, stats));
            }
            let v = if stable { StabilityVerdict::Stable } else { StabilityVerdict::Semistable };
            return Ok((v, stats));
        }
    }
    let Some(vs) = all_subspaces(m.field(), m.dim_p(), GRASSMANNIAN_CAP) else {
        return Ok((
            StabilityVerdict::Inconclusive { searched: format!("more than {GRASSMANNIAN_CAP} subspaces of M_p") },
            SearchStats::new("grassmannian", 0),
        ));
    };
    let len = m.len();
    let dq_full = m.dim_q();
    let mut cands = Vec::new();
    // With one degree every slope equals μ(M); any proper nonzero subspace breaks stability.
    let mut stable = len > 0 || m.dim_p() == 1;
    for v in &vs {
        let [a, b] = candidates_for(m, v)?;
        cands.push(a);
        cands.push(b);
        if !stable || len == 0 {
            continue;
        }
        // Look for a proper submodule with bottom V and slope exactly μ(M).
        let c = m.closure(&bottom_seed(m, v))?;
        let lo = c[len].dim();
        let below_full = c[..len].iter().all(Subspace::is_full);
        for nq in lo..=dq_full {
            if v.dim() + nq == 0 {
                continue;
            }
            if super::slope::slope(v.dim(), nq, w).as_ref() != Some(&mu) {
                continue;
            }
            if !(nq == dq_full && below_full) {
                stable = false;
                break;
            }
        }
    }
    let stats = SearchStats::new("grassmannian", cands.len());
    let (best, bs) = best_candidate(cands, w).expect("M itself has a slope");
    if bs > mu {
        return Ok((StabilityVerdict::Destabilized { witness: best, slope: bs }, stats));
    }
    Ok((if stable { StabilityVerdict::Stable } else { StabilityVerdict::Semistable }, stats))
}

/// Semistability of `m` with respect to `w`.
///
/// Over a prime field both modes are exact: exhaustive enumerates every
/// submodule (falling back to the structural search above
/// [`ENUMERATION_CAP`]), heuristic runs the structural search over all
/// subspaces of `M_p`. Over ℚ only the heuristic mode is available: a catalog
/// search looks for a witness, and a semistable verdict needs a reduction
/// modulo a prime not dividing any denominator to be semistable, since every
/// ℚ-submodule reduces to one with the same dimensions.
pub fn is_semistable(m: &LambdaModule, w: SlopeWeights, mode: SearchMode) -> Result<(StabilityVerdict, SearchStats)> {
    if m.field().is_finite() {
        return exact_verdict(m, w, mode);
    }
    precondition!(mode == SearchMode::Heuristic, "exhaustive search needs a finite field");
    let Some(mu) = module_slope(m, w) else {
        return Ok((StabilityVerdict::Semistable, SearchStats::new("degenerate", 0)));
    };
    let (best, _, stats) = max_destabilizing(m, w, mode)?;
    let bs = tuple_slope(&best, w).expect("best candidate has a slope");
    if bs > mu {
        return Ok((StabilityVerdict::Destabilized { witness: best, slope: bs }, stats));
    }
    let dens = m.denominators();
    for p in CERTIFICATE_PRIMES {
        if dens.iter().any(|d| (d % p).is_zero()) {
            continue;
        }
        let Ok(red) = m.coerce(FieldSpec::Prime(p)) else { continue };
        let (v, _) = exact_verdict(&red, w, SearchMode::Heuristic)?;
        if v.is_semistable() == Some(true) {
            return Ok((v, SearchStats::new(&format!("catalog+reduction mod {p}"), stats.candidates)));
        }
    }
    Ok((
        StabilityVerdict::Inconclusive {
            searched: format!("{} catalog candidates; no reduction certificate", stats.candidates),
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graded::{examples, TruncatedGradedAlgebra};

    #[test]
    fn counts_submodules_of_zero_action() {
        let f = FieldSpec::Prime(2);
        let alg = Arc::new(TruncatedGradedAlgebra::polynomial(f, 2, 1));
        let m = LambdaModule::zero_action(alg, 0, vec![1, 1]);
        assert_eq!(enumerate_submodules(&m, 100).unwrap().unwrap().len(), 4);
    }

    #[test]
    fn zero_action_line_destabilizes() {
        let f = FieldSpec::Prime(2);
        let alg = Arc::new(TruncatedGradedAlgebra::polynomial(f, 2, 1));
        let m = LambdaModule::zero_action(alg, 0, vec![1, 1]);
        for mode in [SearchMode::Exhaustive, SearchMode::Heuristic] {
            let (v, _) = is_semistable(&m, SlopeWeights::new(1, -1), mode).unwrap();
            match v {
                StabilityVerdict::Destabilized { witness, slope } => {
                    assert_eq!(subs_dims(&witness), vec![1, 0]);
                    assert_eq!(slope, BigRational::from_integer(1.into()));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn cyclic_window_is_semistable() {
        for p in [2, 3] {
            let m = examples::line_bundle_window(FieldSpec::Prime(p), 0, 0, 1);
            for mode in [SearchMode::Exhaustive, SearchMode::Heuristic] {
                let (v, _) = is_semistable(&m, SlopeWeights::new(2, -1), mode).unwrap();
                assert_eq!(v.is_semistable(), Some(true), "{v:?}");
            }
        }
        let q = examples::line_bundle_window(FieldSpec::Rationals, 0, 0, 1);
        let (v, _) = is_semistable(&q, SlopeWeights::new(2, -1), SearchMode::Heuristic).unwrap();
        assert_eq!(v.is_semistable(), Some(true));
        assert!(is_semistable(&q, SlopeWeights::new(2, -1), SearchMode::Exhaustive).is_err());
    }

    #[test]
    fn one_dimensional_bottom_module() {
        let f = FieldSpec::Prime(3);
        let alg = Arc::new(TruncatedGradedAlgebra::polynomial(f, 2, 2));
        let m = LambdaModule::zero_action(alg, 0, vec![1, 0, 0]);
        let (v, _) = is_semistable(&m, SlopeWeights::hn(&m), SearchMode::Exhaustive).unwrap();
        assert_eq!(v, StabilityVerdict::Stable);
    }
}
