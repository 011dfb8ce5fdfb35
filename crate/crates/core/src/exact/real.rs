//! Exact elements of Q(√2), the field every probability in this crate lives in.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// The exact real number `(u + v·√2) / d` with `d > 0`.
///
/// Values are kept canonical (`gcd(u, v, d) = 1`, zero is `(0, 0, 1)`), so
/// structural equality is numeric equality. Probabilities produced by the
/// simulators always have `d = 2^e`; rational inputs (ε, server
/// distributions) may carry an odd factor as well.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    u: BigInt,
    v: BigInt,
    d: BigInt,
}

/// Probabilities are exact reals constrained to `[0, 1]` by their producers.
pub type ExactProbability = ExactReal;

impl ExactReal {
    pub fn new(u: BigInt, v: BigInt, d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        let (u, v, d) = if d.is_negative() { (-u, -v, -d) } else { (u, v, d) };
        let mut r = ExactReal { u, v, d };
        r.normalize();
        r
    }

    /// `(u + v√2) / 2^e`.
    pub fn dyadic(u: impl Into<BigInt>, v: impl Into<BigInt>, e: u32) -> Self {
        ExactReal::new(u.into(), v.into(), BigInt::one() << e)
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactReal::new(num.into(), BigInt::zero(), den.into())
    }

    pub fn from_rational(r: &BigRational) -> Self {
        ExactReal::new(r.numer().clone(), BigInt::zero(), r.denom().clone())
    }

    pub fn zero() -> Self {
        ExactReal { u: BigInt::zero(), v: BigInt::zero(), d: BigInt::one() }
    }

    pub fn one() -> Self {
        ExactReal { u: BigInt::one(), v: BigInt::zero(), d: BigInt::one() }
    }

    pub fn integer(n: i64) -> Self {
        ExactReal::ratio(n, 1)
    }

    fn normalize(&mut self) {
        if self.u.is_zero() && self.v.is_zero() {
            self.d = BigInt::one();
            return;
        }
        let g = self.u.gcd(&self.v).gcd(&self.d);
        if !g.is_one() {
            self.u /= &g;
            self.v /= &g;
            self.d /= &g;
        }
    }

    pub fn rational_part(&self) -> &BigInt {
        &self.u
    }

    pub fn sqrt2_part(&self) -> &BigInt {
        &self.v
    }

    pub fn denominator(&self) -> &BigInt {
        &self.d
    }

    /// Splits the denominator as `m · 2^e` with `m` odd.
    pub fn denominator_parts(&self) -> (u64, BigInt) {
        let e = self.d.trailing_zeros().unwrap_or(0);
        (e, &self.d >> e)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// Exact sign, decided without floating point.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.u, &self.v)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_probability(&self) -> bool {
        !self.is_negative() && *self <= ExactReal::one()
    }

    /// `self / 2^k`.
    pub fn div_pow2(&self, k: u32) -> Self {
        ExactReal::new(self.u.clone(), self.v.clone(), &self.d << k)
    }

    /// `self · 2^k`.
    pub fn mul_pow2(&self, k: u32) -> Self {
        ExactReal::new(&self.u << k, &self.v << k, self.d.clone())
    }

    pub fn complement(&self) -> Self {
        &ExactReal::one() - self
    }

    /// `⌊self · 2^bits⌋`, exactly.
    pub fn floor_scaled(&self, bits: u32) -> BigInt {
        let scaled_u = &self.u << bits;
        // ⌊v·√2·2^bits⌋; 2·(v·2^bits)² is never a perfect square for v ≠ 0.
        let vs = &self.v << bits;
        let root = (BigInt::from(2) * &vs * &vs).sqrt();
        let irrational_floor = match vs.sign() {
            Sign::NoSign => BigInt::zero(),
            Sign::Plus => root,
            Sign::Minus => -(root + BigInt::one()),
        };
        (scaled_u + irrational_floor).div_floor(&self.d)
    }

    pub fn to_f64(&self) -> f64 {
        let rat = |n: &BigInt| BigRational::new(n.clone(), self.d.clone()).to_f64().unwrap_or(f64::NAN);
        rat(&self.u) + std::f64::consts::SQRT_2 * rat(&self.v)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(ExactReal::one(), |acc, _| &acc * self)
    }
}

fn sign_of(u: &BigInt, v: &BigInt) -> Ordering {
    use Sign::*;
    match (u.sign(), v.sign()) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
        (Minus | NoSign, Minus | NoSign) => Ordering::Less,
        (Plus, Minus) => (u * u).cmp(&(BigInt::from(2) * v * v)),
        (Minus, Plus) => (BigInt::from(2) * v * v).cmp(&(u * u)),
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        if self.d == rhs.d {
            return ExactReal::new(&self.u + &rhs.u, &self.v + &rhs.v, self.d.clone());
        }
        ExactReal::new(&self.u * &rhs.d + &rhs.u * &self.d, &self.v * &rhs.d + &rhs.v * &self.d, &self.d * &rhs.d)
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        self + &(-rhs)
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        ExactReal::new(
            &self.u * &rhs.u + BigInt::from(2) * &self.v * &rhs.v,
            &self.u * &rhs.v + &self.v * &rhs.u,
            &self.d * &rhs.d,
        )
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal { u: -&self.u, v: -&self.v, d: self.d.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactReal {
            type Output = ExactReal;
            fn $m(self, rhs: ExactReal) -> ExactReal { (&self).$m(&rhs) }
        }
        impl $tr<&ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $m(self, rhs: &ExactReal) -> ExactReal { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl std::iter::Sum for ExactReal {
    fn sum<I: Iterator<Item = ExactReal>>(iter: I) -> Self {
        iter.fold(ExactReal::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a ExactReal> for ExactReal {
    fn sum<I: Iterator<Item = &'a ExactReal>>(iter: I) -> Self {
        iter.fold(ExactReal::zero(), |acc, x| &acc + x)
    }
}

/// Renders `(u, v, e)` for `(u + v√2)/2^e`, and `(u, v, e)/m` when the
/// denominator has an odd factor `m > 1`.
impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, m) = self.denominator_parts();
        write!(f, "({}, {}, {})", self.u, self.v, e)?;
        if !m.is_one() {
            write!(f, "/{m}")?;
        }
        Ok(())
    }
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad =
            || Error::InvalidInput(format!("malformed exact value {s:?}; expected \"(u, v, e)\" or \"(u, v, e)/m\""));
        let s = s.trim();
        let rest = s.strip_prefix('(').ok_or_else(bad)?;
        let close = rest.find(')').ok_or_else(bad)?;
        let parts: Vec<&str> = rest[..close].split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let u: BigInt = parts[0].parse().map_err(|_| bad())?;
        let v: BigInt = parts[1].parse().map_err(|_| bad())?;
        let e: u32 = parts[2].parse().map_err(|_| bad())?;
        let tail = rest[close + 1..].trim();
        let m: BigInt = if tail.is_empty() {
            BigInt::one()
        } else {
            tail.strip_prefix('/').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?
        };
        if !m.is_positive() {
            return Err(bad());
        }
        Ok(ExactReal::new(u, v, m << e))
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a rational written as `p/q`, an integer, or a finite decimal such
/// as `0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = int.abs() * &scale + frac;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(u: i64, v: i64, e: u32) -> ExactReal {
        ExactReal::dyadic(u, v, e)
    }

    #[test]
    fn canonical_form_makes_equality_structural() {
        assert_eq!(r(2, 0, 2), r(1, 0, 1));
        assert_eq!(r(0, 0, 9), ExactReal::zero());
        assert_eq!(ExactReal::ratio(6, -4), ExactReal::ratio(-3, 2));
        assert_eq!(r(4, 2, 3).to_string(), "(2, 1, 2)");
    }

    #[test]
    fn signs_are_exact() {
        // 3 - 2√2 ≈ 0.17
        assert!(r(3, -2, 0).is_positive());
        // 1 - √2 < 0
        assert!(r(1, -1, 0).is_negative());
        assert!(r(-3, 2, 0).is_negative());
        assert!(r(-1, 1, 0).is_positive());
        assert_eq!(r(0, 0, 0).signum(), Ordering::Equal);
    }

    #[test]
    fn field_arithmetic() {
        let half = ExactReal::ratio(1, 2);
        let sqrt2 = r(0, 1, 0);
        assert_eq!(&sqrt2 * &sqrt2, ExactReal::integer(2));
        assert_eq!(&half + &half, ExactReal::one());
        assert_eq!((&ExactReal::ratio(2, 5) - &half).abs(), ExactReal::ratio(1, 10));
        assert_eq!(half.complement(), half);
        assert!(ExactReal::ratio(2, 5) < half);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for v in [r(3, -2, 4), ExactReal::ratio(2, 5), ExactReal::zero(), ExactReal::ratio(-7, 12)] {
            let text = v.to_string();
            assert_eq!(text.parse::<ExactReal>().unwrap(), v, "{text}");
        }
        assert_eq!(ExactReal::ratio(3, 40).to_string(), "(3, 0, 3)/5");
    }

    #[test]
    fn floor_scaled_matches_float_on_irrationals() {
        // (2 - √2)/4 = sin²(π/8)
        let p = r(2, -1, 2);
        let t = p.floor_scaled(20);
        let expected = (p.to_f64() * (1u64 << 20) as f64).floor();
        assert_eq!(t.to_f64().unwrap(), expected);
        assert_eq!(ExactReal::one().floor_scaled(8), BigInt::from(256));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/5").unwrap(), BigRational::new(1.into(), 5.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("0").unwrap(), BigRational::zero());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
