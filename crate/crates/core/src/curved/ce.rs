use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::scalar::{FieldSpec, Scalar};

use super::poly::{factors, DgPolynomial, Symbols};
use super::FiniteDgla;

/// Default weight cutoff: `q²` on a generator only involves weights up to 3.
pub const DEFAULT_WEIGHT: u32 = 4;

/// The Chevalley–Eilenberg algebra `Sym(L[1]^∨)` of a dgla in degrees `≥ 1`,
/// read as a curved dgla over the base `L¹`, with its square-zero derivation.
///
/// The dual coordinate `x^α` of a basis vector `e_α ∈ L^n` has cohomological
/// degree `1 − n`: the base coordinates (`n = 1`) have degree 0, the fiber
/// generators negative degrees. With `X = Σ x^α e_α`,
/// `q(x^γ) = Σ_α (−1)^{|x^α|} D_{γα} x^α + ½ Σ_{α,β} (−1)^{|e_α||x^β|} C^γ_{αβ} x^α x^β`.
/// Splitting by the number of fiber generators gives the curving (`da + ½[a,a]`
/// on `(L²)^∨`), the twisted differential `b ↦ db + [a, b]` and the fiberwise
/// bracket.
#[derive(Clone, Debug)]
pub struct CurvedModel {
    dgla: FiniteDgla,
    symbols: Arc<Symbols>,
    cutoff: u32,
    q_gen: Vec<DgPolynomial>,
}

impl CurvedModel {
    pub fn dgla(&self) -> &FiniteDgla {
        &self.dgla
    }

    pub fn symbols(&self) -> &Arc<Symbols> {
        &self.symbols
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn generator(&self, i: usize) -> DgPolynomial {
        DgPolynomial::generator(self.dgla.field(), self.symbols.clone(), self.cutoff, i)
    }

    /// `q` on the `i`-th generator.
    pub fn q_generator(&self, i: usize) -> &DgPolynomial {
        &self.q_gen[i]
    }

    /// `q` extended as a derivation of degree +1:
    /// `q(f_1 ⋯ f_k) = Σ_i (−1)^{|f_1|+…+|f_{i−1}|} f_1 ⋯ q(f_i) ⋯ f_k`.
    pub fn q(&self, p: &DgPolynomial) -> DgPolynomial {
        let f = self.dgla.field();
        let n = self.symbols.len();
        let mut out = DgPolynomial::zero(f, self.symbols.clone(), self.cutoff);
        for (m, c) in p.terms() {
            let fs = factors(&self.symbols, m);
            let mut prefix_deg = 0i64;
            for (k, &g) in fs.iter().enumerate() {
                let mut pre = vec![0u32; n];
                for &h in &fs[..k] {
                    pre[h] += 1;
                }
                let mut post = vec![0u32; n];
                for &h in &fs[k + 1..] {
                    post[h] += 1;
                }
                let one = f.one();
                let mut pre_p = DgPolynomial::zero(f, self.symbols.clone(), self.cutoff);
                pre_p.add_term(pre, if prefix_deg % 2 == 0 { c.clone() } else { -c.clone() });
                let mut post_p = DgPolynomial::zero(f, self.symbols.clone(), self.cutoff);
                post_p.add_term(post, one);
                out = out.add(&pre_p.mul(&self.q_gen[g]).mul(&post_p));
                prefix_deg += self.symbols.degrees[g];
            }
        }
        out
    }

    /// Whether `q(q(g)) = 0` for every generator, up to the weight cutoff.
    pub fn verify_q_squared(&self) -> bool {
        (0..self.symbols.len()).all(|i| self.q(&self.q_gen[i]).is_zero())
    }

    /// Generators whose `q²` does not vanish.
    pub fn q_squared_failures(&self) -> Vec<usize> {
        (0..self.symbols.len()).filter(|&i| !self.q(&self.q_gen[i]).is_zero()).collect()
    }

    /// The images `q(x^γ)` of the degree −1 generators (`γ ∈ L²`): polynomials
    /// in the base coordinates cutting out the Maurer–Cartan locus.
    pub fn mc_ideal(&self) -> Vec<DgPolynomial> {
        self.dgla.indices_of_degree(2).into_iter().map(|g| self.q_gen[g].clone()).collect()
    }

    /// Evaluates the ideal generators at a point of `L¹` given in its basis.
    pub fn evaluate_ideal(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        let l1 = self.dgla.indices_of_degree(1);
        precondition!(coords.len() == l1.len(), "{} coordinates for L¹ of dimension {}", coords.len(), l1.len());
        let mut values = vec![None; self.symbols.len()];
        for (&a, x) in l1.iter().zip(coords) {
            values[a] = Some(x.clone());
        }
        self.mc_ideal().iter().map(|p| p.evaluate(&values)).collect()
    }
}

/// Builds the CE model of `l` truncated at weight `w` (at least 2).
pub fn build_ce(l: &FiniteDgla, w: u32) -> Result<CurvedModel> {
    precondition!(w >= 2, "weight cutoff {w} is below 2, too small to express q");
    let f = l.field();
    precondition!(f.characteristic() != 2, "the CE derivation needs ½; use characteristic ≠ 2 and reduce afterwards");
    let n = l.dim();
    let names = (0..n)
        .map(|a| {
            let deg = l.degree(a);
            let k = l.indices_of_degree(deg).iter().position(|&b| b == a).expect("own degree");
            format!("x{deg}_{k}")
        })
        .collect();
    let degrees: Vec<i64> = (0..n).map(|a| 1 - l.degree(a) as i64).collect();
    let symbols = Arc::new(Symbols { names, degrees });
    let half = f.from_ratio(1, 2)?;
    let sign = |odd: bool| if odd { -f.one() } else { f.one() };
    let mut q_gen: Vec<DgPolynomial> = (0..n).map(|_| DgPolynomial::zero(f, symbols.clone(), w)).collect();
    for a in 0..n {
        for (g, x) in l.d_basis(a) {
            let s = sign(symbols.is_odd(a));
            q_gen[*g] = q_gen[*g].add(&DgPolynomial::generator(f, symbols.clone(), w, a).scale(&(&s * x)));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let br = l.bracket_basis(a, b);
            if br.is_empty() {
                continue;
            }
            let ea_odd = l.degree(a) % 2 == 1;
            let s = sign(ea_odd && symbols.is_odd(b));
            let xa = DgPolynomial::generator(f, symbols.clone(), w, a);
            let xb = DgPolynomial::generator(f, symbols.clone(), w, b);
            let prod = xa.mul(&xb).scale(&(&s * &half));
            for (g, c) in br {
                q_gen[g] = q_gen[g].add(&prod.scale(&c));
            }
        }
    }
    Ok(CurvedModel { dgla: l.clone(), symbols, cutoff: w, q_gen })
}

/// The ideal generators over ℚ reduced into `target`; over ℚ the coefficients
/// of a Hochschild dgla's ideal are integral, so this also covers `𝔽_2`.
pub fn mc_ideal_reduced(model: &CurvedModel, target: FieldSpec) -> Result<Vec<DgPolynomial>> {
    model.mc_ideal().iter().map(|p| p.coerce(target)).collect()
}
