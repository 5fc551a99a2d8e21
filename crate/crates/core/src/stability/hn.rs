use num_rational::BigRational;

use crate::error::{precondition, Error, Result};
use crate::graded::{subs_dims, FilteredLambdaModule, LambdaModule, SubTuple};

use super::search::{is_semistable, max_destabilizing, SearchMode, SearchStats, StabilityVerdict};
use super::slope::{module_slope, SlopeWeights};

#[derive(Clone, Debug)]
pub struct HNReport {
    pub flag: FilteredLambdaModule,
    pub weights: SlopeWeights,
    /// Slopes of the pieces; `None` for a degenerate final piece.
    pub slopes: Vec<Option<BigRational>>,
    /// Degreewise dimensions of the pieces.
    pub hn_type: Vec<Vec<usize>>,
    pub mode: SearchMode,
    pub piece_verdicts: Vec<StabilityVerdict>,
    pub search: Vec<SearchStats>,
}

/// `G1 ≻ G2`: `G2` is degenerate, or both have slopes and `μ(G1) > μ(G2)`.
fn succeeds(a: Option<&BigRational>, b: Option<&BigRational>) -> bool {
    match (a, b) {
        (_, None) => true,
        (Some(x), Some(y)) => x > y,
        (None, Some(_)) => false,
    }
}

/// Greedy HN flag: repeatedly split off a maximal destabilizing submodule of
/// the current quotient, with weights `(dim M_q, −dim M_p)` of the ambient
/// module throughout. The result is re-checked with [`is_hn_filtration`].
pub fn hn_filtration(m: &LambdaModule, mode: SearchMode) -> Result<HNReport> {
    precondition!(
        mode == SearchMode::Heuristic || m.field().is_finite(),
        "exhaustive search needs a finite field"
    );
    let w = SlopeWeights::hn(m);
    let mut steps: Vec<SubTuple> = Vec::new();
    let mut search = Vec::new();
    loop {
        let prev = steps.last().cloned().unwrap_or_else(|| m.zero_subs());
        let q = m.quotient(&prev)?;
        let cur = &q.module;
        if cur.total_dim() == 0 {
            break;
        }
        if cur.dim_p() + cur.dim_q() == 0 {
            steps.push(m.full_subs());
            break;
        }
        let (best, _, stats) = max_destabilizing(cur, w, mode)?;
        search.push(stats);
        if best == cur.full_subs() {
            steps.push(m.full_subs());
            break;
        }
        steps.push(q.pull_back(&best)?);
    }
    if steps.is_empty() {
        steps.push(m.full_subs());
    }
    let flag = FilteredLambdaModule::new(m.clone(), steps)?;
    let check = check_hn_filtration(&flag, mode)?;
    match check.holds {
        Some(true) => {}
        Some(false) => {
            return Err(Error::Inconclusive("greedy flag failed the HN check; the destabilizer search was incomplete".into()))
        }
        None => return Err(Error::Inconclusive("semistability of an HN piece could not be certified".into())),
    }
    Ok(HNReport {
        weights: w,
        slopes: check.slopes,
        hn_type: check.pieces.iter().map(|g| g.dims().to_vec()).collect(),
        mode,
        piece_verdicts: check.verdicts,
        search,
        flag,
    })
}

#[derive(Clone, Debug)]
pub struct HNCheck {
    /// `None` when some piece's semistability could not be decided.
    pub holds: Option<bool>,
    pub order_ok: bool,
    pub pieces: Vec<LambdaModule>,
    pub slopes: Vec<Option<BigRational>>,
    pub verdicts: Vec<StabilityVerdict>,
}

/// Both clauses of the HN definition for a given flag, with weights taken from
/// the flag's ambient module.
pub fn check_hn_filtration(f: &FilteredLambdaModule, mode: SearchMode) -> Result<HNCheck> {
    let w = SlopeWeights::hn(f.module());
    let pieces = f.gr()?;
    let slopes: Vec<Option<BigRational>> = pieces.iter().map(|g| module_slope(g, w)).collect();
    let order_ok = slopes.windows(2).all(|s| succeeds(s[0].as_ref(), s[1].as_ref()));
    let mut verdicts = Vec::with_capacity(pieces.len());
    let mut all = Some(true);
    for g in &pieces {
        let (v, _) = is_semistable(g, w, mode)?;
        match v.is_semistable() {
            Some(false) => all = Some(false),
            None if all == Some(true) => all = None,
            _ => {}
        }
        verdicts.push(v);
    }
    let holds = if !order_ok { Some(false) } else { all };
    Ok(HNCheck { holds, order_ok, pieces, slopes, verdicts })
}

/// Whether `f` is an HN filtration; an undecidable piece is reported as `Inconclusive`.
pub fn is_hn_filtration(f: &FilteredLambdaModule, mode: SearchMode) -> Result<bool> {
    check_hn_filtration(f, mode)?
        .holds
        .ok_or_else(|| Error::Inconclusive("semistability of a piece could not be certified".into()))
}

/// Membership in the image of the window functor on the HN locus: the flag is
/// strongly finitely generated and is an HN filtration both on `[p, q]` and
/// after truncation to `[p′, q]`.
pub fn hn_window_membership(f: &FilteredLambdaModule, p_prime: i64, mode: SearchMode) -> Result<bool> {
    let m = f.module();
    precondition!(m.p() <= p_prime && p_prime <= m.q(), "p′ = {p_prime} outside [{}, {}]", m.p(), m.q());
    if !f.is_strongly_finitely_generated() {
        return Ok(false);
    }
    if !is_hn_filtration(f, mode)? {
        return Ok(false);
    }
    if p_prime == m.p() {
        return Ok(true);
    }
    is_hn_filtration(&f.truncate_below(p_prime)?, mode)
}

/// Dimension vectors of the flag steps' successive quotients.
pub fn flag_type(f: &FilteredLambdaModule) -> Vec<Vec<usize>> {
    let mut prev = vec![0; f.module().dims().len()];
    f.steps()
        .iter()
        .map(|s| {
            let d = subs_dims(s);
            let out = d.iter().zip(&prev).map(|(a, b)| a - b).collect();
            prev = d;
            out
        })
        .collect()
}
