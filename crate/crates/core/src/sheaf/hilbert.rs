use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::scalar::FieldSpec;
use crate::stability::{module_slope, RationalPoly, SlopeWeights};

use super::presentation::{gamma_window, FilteredPresentation, GradedPresentation};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The polynomial through `(t0 + k, values[k])`, by Newton forward differences.
pub fn interpolate(t0: i64, values: &[i64]) -> RationalPoly {
    let mut diffs: Vec<BigRational> = values.iter().map(|&v| rat(v)).collect();
    let mut coeffs = vec![BigRational::zero()];
    // binom holds C(t − t0, k) as a polynomial in t.
    let mut binom = vec![BigRational::one()];
    for k in 0..values.len() {
        let c = diffs[0].clone();
        if coeffs.len() < binom.len() {
            coeffs.resize(binom.len(), BigRational::zero());
        }
        for (i, b) in binom.iter().enumerate() {
            coeffs[i] += &c * b;
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        let factor = [rat(-t0 - k as i64) / rat(k as i64 + 1), BigRational::one() / rat(k as i64 + 1)];
        binom = poly_mul(&binom, &factor);
    }
    RationalPoly::new(coeffs)
}

/// Hilbert polynomial from the graded-piece dimensions on `from..=to`: the
/// interpolant through all but the last two samples, which must also fit it.
pub fn hilbert_polynomial(pres: &GradedPresentation, from: i64, to: i64) -> Result<RationalPoly> {
    let values: Vec<i64> = pres.hilbert_function(from, to)?.into_iter().map(|d| d as i64).collect();
    fit_with_check(from, &values)
}

/// Hilbert polynomials of the graded pieces `M^k/M^{k−1}` of a filtered presentation.
pub fn gr_hilbert_polynomials(fp: &FilteredPresentation, from: i64, to: i64) -> Result<Vec<RationalPoly>> {
    let mut prev = vec![0i64; (to - from + 1).max(0) as usize];
    let mut out = Vec::new();
    for k in 1..=fp.length() {
        let cur: Vec<i64> = fp.step_hilbert_function(k, from, to)?.into_iter().map(|d| d as i64).collect();
        let diff: Vec<i64> = cur.iter().zip(&prev).map(|(a, b)| a - b).collect();
        out.push(fit_with_check(from, &diff)?);
        prev = cur;
    }
    Ok(out)
}

fn fit_with_check(from: i64, values: &[i64]) -> Result<RationalPoly> {
    precondition!(values.len() >= 3, "need at least three samples to interpolate and check");
    let n = values.len() - 2;
    let poly = interpolate(from, &values[..n]);
    for (k, &v) in values.iter().enumerate().skip(n) {
        if poly.eval(&rat(from + k as i64)) != rat(v) {
            return Err(Error::Precondition(format!(
                "interpolant {poly} misses the check value {v} at {}; sample window too small",
                from + k as i64
            )));
        }
    }
    Ok(poly)
}

/// `⊕ O(a_i)^{r_i}` on P¹ with strictly decreasing twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitBundleSpec {
    blocks: Vec<(i64, usize)>,
}

impl SplitBundleSpec {
    pub fn new(blocks: Vec<(i64, usize)>) -> Result<Self> {
        precondition!(!blocks.is_empty(), "a split bundle needs at least one block");
        precondition!(blocks.iter().all(|&(_, r)| r > 0), "multiplicities must be positive");
        precondition!(blocks.windows(2).all(|w| w[0].0 > w[1].0), "twists must be strictly decreasing");
        Ok(SplitBundleSpec { blocks })
    }

    pub fn blocks(&self) -> &[(i64, usize)] {
        &self.blocks
    }

    /// `Σ r_i (t + a_i + 1)`.
    pub fn hilbert_polynomial(&self) -> RationalPoly {
        self.block_polynomials().iter().fold(RationalPoly::new(Vec::new()), |acc, p| acc.sub(&p.scale(&rat(-1))))
    }

    /// `α_i(t) = r_i (t + a_i + 1)`, one per block.
    pub fn block_polynomials(&self) -> Vec<RationalPoly> {
        self.blocks.iter().map(|&(a, r)| RationalPoly::from_i64(&[r as i64 * (a + 1), r as i64])).collect()
    }

    /// From this degree on every summand is globally generated with vanishing
    /// `H¹`, so graded pieces are the sheaf sections.
    pub fn regularity(&self) -> i64 {
        0.max(-self.blocks.iter().map(|b| b.0).min().expect("nonempty"))
    }

    /// Generator degrees of `⊕ A(a_i)^{r_i}`.
    pub fn generator_degrees(&self) -> Vec<i64> {
        self.blocks.iter().flat_map(|&(a, r)| std::iter::repeat(-a).take(r)).collect()
    }

    pub fn presentation(&self, field: FieldSpec) -> Result<GradedPresentation> {
        GradedPresentation::free(field, 2, self.generator_degrees())
    }

    /// `h⁰(O(a)(d)) = max(a + d + 1, 0)` summed over blocks.
    pub fn h0(&self, d: i64) -> usize {
        self.blocks.iter().map(|&(a, r)| r * (a + d + 1).max(0) as usize).sum()
    }
}

/// The canonical HN flag `O(a_1)^{r_1} ⊂ O(a_1)^{r_1} ⊕ O(a_2)^{r_2} ⊂ …`.
pub fn p1_split_hn(spec: &SplitBundleSpec, field: FieldSpec) -> Result<FilteredPresentation> {
    let pres = spec.presentation(field)?;
    let mut steps = Vec::new();
    let mut count = 0;
    for &(_, r) in &spec.blocks[..spec.blocks.len() - 1] {
        count += r;
        steps.push((0..count).map(|i| pres.generator(i)).collect());
    }
    FilteredPresentation::new(pres, steps)
}

/// Exact quantities compared in the slope/h⁰-ratio identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step2Report {
    pub h0_first: (usize, usize),
    pub h0_second: (usize, usize),
    pub alpha: (i64, i64),
    #[serde(serialize_with = "ser_rat")]
    pub slope_difference: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub ratio_difference: BigRational,
    pub factorization_holds: bool,
    pub signs_agree: bool,
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl Step2Report {
    pub fn holds(&self) -> bool {
        self.factorization_holds && self.signs_agree
    }
}

/// Compares `μ(Γ_{[p,q]} G_1) − μ(Γ_{[p,q]} G_2)` under the weights
/// `(α(q), −α(p))` with `h⁰(G_1(p))/h⁰(G_1(q)) − h⁰(G_2(p))/h⁰(G_2(q))`,
/// where `α` is the Hilbert function of `G_1 ⊕ G_2`. Checks that the signs agree
/// and that the slope difference equals
/// `(α(p)+α(q)) h_1(q) h_2(q) / ((h_1(p)+h_1(q))(h_2(p)+h_2(q)))` times the ratio difference.
pub fn step2_identity_check(g1: &GradedPresentation, g2: &GradedPresentation, p: i64, q: i64) -> Result<Step2Report> {
    let hp = |g: &GradedPresentation, d: i64| -> Result<usize> { Ok(g.graded_piece(d)?.dim()) };
    let (a1, b1) = (hp(g1, p)?, hp(g1, q)?);
    let (a2, b2) = (hp(g2, p)?, hp(g2, q)?);
    step2_with_alpha(g1, g2, p, q, ((a1 + a2) as i64, (b1 + b2) as i64))
}

/// As [`step2_identity_check`] with an explicit `(α(p), α(q))`.
pub fn step2_with_alpha(
    g1: &GradedPresentation,
    g2: &GradedPresentation,
    p: i64,
    q: i64,
    alpha: (i64, i64),
) -> Result<Step2Report> {
    let w = SlopeWeights::new(alpha.1, -alpha.0);
    let m1 = gamma_window(g1, p, q)?;
    let m2 = gamma_window(g2, p, q)?;
    let (h1, h2) = ((m1.dim_p(), m1.dim_q()), (m2.dim_p(), m2.dim_q()));
    if h1.1 == 0 || h2.1 == 0 {
        return Err(Error::Precondition(format!("h⁰ vanishes at q = {q}: the ratio has a zero denominator")));
    }
    let s1 = module_slope(&m1, w).expect("nonzero");
    let s2 = module_slope(&m2, w).expect("nonzero");
    let slope_difference = &s1 - &s2;
    let r = |h: (usize, usize)| BigRational::new(BigInt::from(h.0), BigInt::from(h.1));
    let ratio_difference = r(h1) - r(h2);
    let n = |x: usize| rat(x as i64);
    let factor = rat(alpha.0 + alpha.1) * n(h1.1) * n(h2.1) / (n(h1.0 + h1.1) * n(h2.0 + h2.1));
    let factorization_holds = slope_difference == &factor * &ratio_difference;
    let signs_agree = slope_difference.signum() == ratio_difference.signum();
    Ok(Step2Report {
        h0_first: h1,
        h0_second: h2,
        alpha,
        slope_difference,
        ratio_difference,
        factorization_holds,
        signs_agree,
    })
}
