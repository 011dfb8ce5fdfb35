//! Amplitudes in the ring Z[ω, 1/√2], ω = e^{iπ/4}.
//!
//! Every gate in the fixed gate set maps this ring to itself, so the exact
//! simulators never round.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::real::ExactReal;

/// Multiplies the Z[ω] element `c0 + c1ω + c2ω² + c3ω³` by `ω^k`.
pub(crate) fn rotate<T: Clone + Neg<Output = T>>(c: &[T; 4], k: u8) -> [T; 4] {
    let mut out = c.clone();
    for _ in 0..(k % 8) {
        let [a0, a1, a2, a3] = out;
        out = [-a3, a0, a1, a2];
    }
    out
}

/// Multiplies a Z[ω] element by `√2 = ω - ω³`.
pub(crate) fn times_sqrt2(c: &[BigInt; 4]) -> [BigInt; 4] {
    [&c[1] - &c[3], &c[0] + &c[2], &c[1] + &c[3], &c[2] - &c[0]]
}

/// True iff the Z[ω] element is a multiple of √2.
pub(crate) fn divisible_by_sqrt2(c: &[BigInt; 4]) -> bool {
    (&c[0] - &c[2]).is_even() && (&c[1] - &c[3]).is_even()
}

/// `|c|²` of a Z[ω] element as the pair `(u, v)` meaning `u + v√2`.
pub(crate) fn norm_sqr_parts(c: &[BigInt; 4]) -> (BigInt, BigInt) {
    let [c0, c1, c2, c3] = c;
    let u = c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3;
    let v = c0 * c1 - c0 * c3 + c1 * c2 + c2 * c3;
    (u, v)
}

/// `(c0 + c1ω + c2ω² + c3ω³) / √2^half_exp`, kept reduced.
///
/// Canonical form: zero is all-zero coefficients with `half_exp = 0`;
/// otherwise the numerator is not divisible by √2 whenever `half_exp > 0`.
/// This is stronger than "not all coefficients even" and makes equality
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactAmplitude {
    coeffs: [BigInt; 4],
    half_exp: u32,
}

impl ExactAmplitude {
    pub fn new(coeffs: [BigInt; 4], half_exp: u32) -> Self {
        let mut a = ExactAmplitude { coeffs, half_exp };
        a.reduce();
        a
    }

    pub fn from_i64(coeffs: [i64; 4], half_exp: u32) -> Self {
        ExactAmplitude::new(coeffs.map(BigInt::from), half_exp)
    }

    pub fn zero() -> Self {
        ExactAmplitude::from_i64([0; 4], 0)
    }

    pub fn one() -> Self {
        ExactAmplitude::from_i64([1, 0, 0, 0], 0)
    }

    /// `ω^k`.
    pub fn omega_pow(k: u8) -> Self {
        ExactAmplitude::new(rotate(&ExactAmplitude::one().coeffs, k), 0)
    }

    fn reduce(&mut self) {
        if self.coeffs.iter().all(Zero::is_zero) {
            self.half_exp = 0;
            return;
        }
        // Divide by 2 first; cheaper than two √2 steps.
        while self.half_exp >= 2 && self.coeffs.iter().all(|c| c.is_even()) {
            for c in &mut self.coeffs {
                *c >>= 1;
            }
            self.half_exp -= 2;
        }
        if self.half_exp >= 1 && divisible_by_sqrt2(&self.coeffs) {
            self.coeffs = times_sqrt2(&self.coeffs).map(|c| c >> 1);
            self.half_exp -= 1;
        }
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.coeffs
    }

    pub fn half_exp(&self) -> u32 {
        self.half_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul_omega(&self, k: u8) -> Self {
        ExactAmplitude { coeffs: rotate(&self.coeffs, k), half_exp: self.half_exp }
    }

    /// Multiplies by `√2^k`.
    pub fn mul_sqrt2_pow(&self, k: u32) -> Self {
        if k <= self.half_exp {
            return ExactAmplitude::new(self.coeffs.clone(), self.half_exp - k);
        }
        let mut coeffs = self.coeffs.clone();
        for _ in 0..(k - self.half_exp) {
            coeffs = times_sqrt2(&coeffs);
        }
        ExactAmplitude::new(coeffs, 0)
    }

    /// Divides by `√2^k`.
    pub fn div_sqrt2_pow(&self, k: u32) -> Self {
        ExactAmplitude::new(self.coeffs.clone(), self.half_exp + k)
    }

    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = &self.coeffs;
        ExactAmplitude { coeffs: [c0.clone(), -c3, -c2, -c1], half_exp: self.half_exp }
    }

    pub fn norm_sqr(&self) -> ExactReal {
        let (u, v) = norm_sqr_parts(&self.coeffs);
        ExactReal::new(u, v, BigInt::from(1) << self.half_exp)
    }

    fn at_exponent(&self, half_exp: u32) -> [BigInt; 4] {
        let mut coeffs = self.coeffs.clone();
        for _ in self.half_exp..half_exp {
            coeffs = times_sqrt2(&coeffs);
        }
        coeffs
    }

    pub fn to_complex(&self) -> Complex64 {
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let scale = std::f64::consts::SQRT_2.powi(-(self.half_exp as i32));
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc += p * c.to_f64().unwrap_or(f64::NAN);
            p *= w;
        }
        acc * scale
    }
}

impl Add for &ExactAmplitude {
    type Output = ExactAmplitude;
    fn add(self, rhs: &ExactAmplitude) -> ExactAmplitude {
        let e = self.half_exp.max(rhs.half_exp);
        let a = self.at_exponent(e);
        let b = rhs.at_exponent(e);
        ExactAmplitude::new([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2], &a[3] + &b[3]], e)
    }
}

impl Mul for &ExactAmplitude {
    type Output = ExactAmplitude;
    fn mul(self, rhs: &ExactAmplitude) -> ExactAmplitude {
        let mut out: [BigInt; 4] = Default::default();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a * b;
                let k = i + j;
                // ω^4 = -1
                if k < 4 {
                    out[k] += prod;
                } else {
                    out[k - 4] -= prod;
                }
            }
        }
        ExactAmplitude::new(out, self.half_exp + rhs.half_exp)
    }
}

impl Neg for &ExactAmplitude {
    type Output = ExactAmplitude;
    fn neg(self) -> ExactAmplitude {
        ExactAmplitude { coeffs: self.coeffs.clone().map(|c| -c), half_exp: self.half_exp }
    }
}

impl fmt::Display for ExactAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.coeffs;
        write!(f, "({c0}, {c1}, {c2}, {c3}; {})", self.half_exp)
    }
}

/// Finds `k` such that `lhs[i] = ω^k · rhs[i]` for every `i`.
///
/// Returns `None` when the vectors differ by anything other than a single
/// global eighth root of unity (or have different lengths).
pub fn omega_phase_between(lhs: &[ExactAmplitude], rhs: &[ExactAmplitude]) -> Option<u8> {
    if lhs.len() != rhs.len() {
        return None;
    }
    let pivot = rhs.iter().position(|a| !a.is_zero());
    let k = match pivot {
        None => return lhs.iter().all(ExactAmplitude::is_zero).then_some(0),
        Some(i) => (0..8u8).find(|&k| rhs[i].mul_omega(k) == lhs[i])?,
    };
    lhs.iter().zip(rhs).all(|(l, r)| r.mul_omega(k) == *l).then_some(k)
}
