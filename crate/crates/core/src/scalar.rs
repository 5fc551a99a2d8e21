//! Exact scalars over ℚ and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Builds `𝔽_p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Schema(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::Schema(format!("prime {p} too large (must be < 2^31)")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { value: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Fp { value: n.rem_euclid(p as i64) as u64, p },
        }
    }

    /// `num/den` in this field; over `𝔽_p` the denominator is inverted.
    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Schema("zero denominator".into()));
        }
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::Precondition(format!("denominator {den} vanishes in {self}")));
        }
        Ok(&self.from_i64(num) / &d)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    /// All field elements, in increasing representative order. `None` over ℚ.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some((0..p).map(|value| Scalar::Fp { value, p }).collect()),
        }
    }

    /// Parses a scalar literal: `"3"`, `"-1/2"`. Over `𝔽_p` any rational
    /// literal whose denominator is invertible is accepted and reduced.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Schema(format!("bad scalar literal {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Q(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u64().expect("residue fits in u64")
                };
                let (n, d) = (reduce(&num), reduce(&den));
                if d == 0 {
                    return Err(Error::Precondition(format!(
                        "denominator of {s} vanishes modulo {p}"
                    )));
                }
                let n = Scalar::Fp { value: n, p };
                let d = Scalar::Fp { value: d, p };
                Ok(&n / &d)
            }
        }
    }

    /// Reduces a scalar from any field into this one. Rationals map to `𝔽_p`
    /// when their denominator is prime to `p`; prime-field elements are
    /// lifted to their least nonnegative representative.
    pub fn coerce(self, x: &Scalar) -> Result<Scalar> {
        match (self, x) {
            (FieldSpec::Rationals, Scalar::Q(_)) => Ok(x.clone()),
            (FieldSpec::Rationals, Scalar::Fp { value, .. }) => Ok(self.from_i64(*value as i64)),
            (FieldSpec::Prime(p), Scalar::Fp { value, p: q }) if p == *q => {
                Ok(Scalar::Fp { value: *value, p })
            }
            (FieldSpec::Prime(_), Scalar::Fp { value, .. }) => Ok(self.from_i64(*value as i64)),
            (FieldSpec::Prime(_), Scalar::Q(r)) => self.parse(&format!("{}/{}", r.numer(), r.denom())),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q` or `Fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:").or_else(|| s.strip_prefix("F")) {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Schema(format!("bad field spec {s:?}")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::Schema(format!("bad field spec {s:?} (expected Q or Fp:<p>)")))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of ℚ (always in lowest terms) or of `𝔽_p`.
///
/// Prime-field elements carry their modulus so arithmetic never needs an
/// external context. Mixing fields in one operation is a programming error
/// and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                Scalar::Q(r.recip())
            }
            Scalar::Fp { value, p } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Fp { value: pow_mod(*value, p - 2, *p), p: *p }
            }
        }
    }

    /// Sign over ℚ (−1, 0, 1). Over `𝔽_p` returns 0 for zero and 1 otherwise.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Q(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Fp { value, .. } => i32::from(*value != 0),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    /// The denominator over ℚ; 1 for prime-field elements.
    pub fn denominator(&self) -> BigInt {
        match self {
            Scalar::Q(r) => r.denom().clone(),
            Scalar::Fp { .. } => BigInt::one(),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    /// ℚ as `num/den` (or `num` when integral); `𝔽_p` as the representative in `[0, p)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn field_check(a: &Scalar, b: &Scalar) -> u64 {
    match (a, b) {
        (Scalar::Fp { p, .. }, Scalar::Fp { p: q, .. }) => {
            assert_eq!(p, q, "mixed prime fields");
            *p
        }
        (Scalar::Q(_), Scalar::Q(_)) => 0,
        _ => panic!("mixed scalar fields: {a:?} and {b:?}"),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => {
                let p = field_check(self, rhs);
                let (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Fp { value: (a + b) % p, p }
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => {
                let p = field_check(self, rhs);
                let (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Fp { value: (a + p - b) % p, p }
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => {
                let p = field_check(self, rhs);
                let (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Fp { value: a * b % p, p }
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals_normalize() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("2/4").unwrap().to_string(), "1/2");
        assert_eq!(q.parse("-6/3").unwrap().to_string(), "-2");
        assert_eq!(q.parse("3/-6").unwrap().to_string(), "-1/2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!((&a + &b).to_string(), "1");
        assert_eq!((&a - &b).to_string(), "5");
        assert_eq!((&a * &b).to_string(), "1");
        assert_eq!((&a * &a.inv()), f.one());
        assert_eq!(f.parse("1/2").unwrap().to_string(), "4");
        assert!(f.parse("1/7").is_err());
        assert_eq!(f.from_i64(-1).to_string(), "6");
    }

    #[test]
    fn field_specs_parse() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:3".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(3));
        assert!("Fp:4".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(5).to_string(), "Fp:5");
    }

    #[test]
    fn coerce_rational_into_prime_field() {
        let q = FieldSpec::Rationals;
        let f = FieldSpec::Prime(5);
        assert_eq!(f.coerce(&q.parse("3/2").unwrap()).unwrap().to_string(), "4");
        assert!(f.coerce(&q.parse("1/5").unwrap()).is_err());
    }
}
