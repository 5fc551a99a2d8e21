use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::LambdaModule;
use crate::linalg::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeWeights {
    pub theta_p: i64,
    pub theta_q: i64,
}

impl SlopeWeights {
    pub fn new(theta_p: i64, theta_q: i64) -> Self {
        SlopeWeights { theta_p, theta_q }
    }

    /// The HN weights `(dim M_q, −dim M_p)`, which give `M` slope 0.
    pub fn hn(m: &LambdaModule) -> Self {
        SlopeWeights { theta_p: m.dim_q() as i64, theta_q: -(m.dim_p() as i64) }
    }
}

/// `(θ_p·dp + θ_q·dq)/(dp + dq)`, undefined when `dp + dq = 0`.
pub fn slope(dp: usize, dq: usize, w: SlopeWeights) -> Option<BigRational> {
    if dp + dq == 0 {
        return None;
    }
    let num = BigInt::from(w.theta_p) * BigInt::from(dp) + BigInt::from(w.theta_q) * BigInt::from(dq);
    Some(BigRational::new(num, BigInt::from(dp + dq)))
}

pub fn module_slope(m: &LambdaModule, w: SlopeWeights) -> Option<BigRational> {
    slope(m.dim_p(), m.dim_q(), w)
}

/// Slope of a subspace tuple, read from its bottom and top degrees.
pub fn tuple_slope(subs: &[Subspace], w: SlopeWeights) -> Option<BigRational> {
    slope(subs[0].dim(), subs[subs.len() - 1].dim(), w)
}

/// A polynomial in one variable with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn is_eventually_positive(&self) -> bool {
        self.leading().is_positive()
    }
}

impl std::fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let a = c.abs();
            let var = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{a}*{var}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PolyOrder {
    Greater,
    Equal,
    Less,
    Incomparable,
}

/// Compares `P(m)/P(n)` with `Q(m)/Q(n)` for `0 ≪ m ≪ n`, the second point dominating.
///
/// `R(m, n) = P(m)Q(n) − P(n)Q(m)` is expanded in powers of `n`; the coefficient
/// of `n^k` is `P(m)·Q_k − P_k·Q(m)`. The sign of the leading coefficient (in
/// `m`) of the highest nonvanishing one decides.
pub fn poly_order(p: &RationalPoly, q: &RationalPoly) -> Result<PolyOrder> {
    if !p.is_eventually_positive() || !q.is_eventually_positive() {
        return Err(Error::Precondition("polynomial order needs eventually positive inputs".into()));
    }
    let n = p.coeffs.len().max(q.coeffs.len());
    let z = BigRational::zero();
    for k in (0..n).rev() {
        let pk = p.coeffs.get(k).unwrap_or(&z);
        let qk = q.coeffs.get(k).unwrap_or(&z);
        let c = p.scale(qk).sub(&q.scale(pk));
        if !c.is_zero() {
            return Ok(match c.leading().cmp(&z) {
                Ordering::Greater => PolyOrder::Greater,
                Ordering::Less => PolyOrder::Less,
                Ordering::Equal => unreachable!("trimmed polynomial"),
            });
        }
    }
    Ok(PolyOrder::Equal)
}
