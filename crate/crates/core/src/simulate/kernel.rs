//! Dense exact statevector kernel.
//!
//! The state is `(1/√2^half_exp) · Σ_i c_i |i⟩` with every `c_i` in Z[ω]
//! and one shared exponent, so Hadamards are integer additions and every
//! other gate is a permutation, a sign, or a coefficient rotation. The
//! kernel runs on `i64` coefficients with overflow checks and is rerun on
//! `BigInt` if any operation overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::exact::ExactReal;

#[derive(Debug)]
pub(crate) struct Overflow;

pub(crate) trait Coeff: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn is_even(&self) -> bool;
    fn halve(&mut self);
    fn to_big(&self) -> BigInt;
    fn as_i64(&self) -> Option<i64>;
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn is_even(&self) -> bool {
        self & 1 == 0
    }
    fn halve(&mut self) {
        *self >>= 1;
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn as_i64(&self) -> Option<i64> {
        Some(*self)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_even(&self) -> bool {
        Integer::is_even(self)
    }
    fn halve(&mut self) {
        *self >>= 1;
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn as_i64(&self) -> Option<i64> {
        num_traits::ToPrimitive::to_i64(self)
    }
}

/// `c · ω^k` with overflow checks.
fn rotate<C: Coeff>(c: &[C; 4], k: u8) -> Option<[C; 4]> {
    let k = (k % 8) as usize;
    let negate_all = k >= 4;
    let k = k % 4;
    let mut out: [C; 4] = [C::zero(), C::zero(), C::zero(), C::zero()];
    for (j, slot) in out.iter_mut().enumerate() {
        // ω^k · ω^i = ω^(i+k); wrap-around picks up a sign (ω^4 = -1).
        let (src, wrapped) = if j >= k { (j - k, false) } else { (j + 4 - k, true) };
        *slot = if wrapped != negate_all { c[src].neg()? } else { c[src].clone() };
    }
    Some(out)
}

fn add4<C: Coeff>(a: &[C; 4], b: &[C; 4]) -> Option<[C; 4]> {
    Some([a[0].add(&b[0])?, a[1].add(&b[1])?, a[2].add(&b[2])?, a[3].add(&b[3])?])
}

fn sub4<C: Coeff>(a: &[C; 4], b: &[C; 4]) -> Option<[C; 4]> {
    Some([a[0].sub(&b[0])?, a[1].sub(&b[1])?, a[2].sub(&b[2])?, a[3].sub(&b[3])?])
}

pub(crate) struct Kernel<C> {
    n: usize,
    half_exp: u32,
    amps: Vec<[C; 4]>,
}

impl<C: Coeff> Kernel<C> {
    pub(crate) fn basis(n: usize, index: usize) -> Self {
        let zero = [C::zero(), C::zero(), C::zero(), C::zero()];
        let mut amps = vec![zero; 1 << n];
        amps[index][0] = C::one();
        Kernel { n, half_exp: 0, amps }
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn swap_where(&mut self, flip: usize, cond: impl Fn(usize) -> bool) {
        for i in 0..self.amps.len() {
            if i & flip == 0 && cond(i) {
                self.amps.swap(i, i | flip);
            }
        }
    }

    fn rotate_where(&mut self, k: u8, cond: impl Fn(usize) -> bool) -> Result<(), Overflow> {
        if k & 7 == 0 {
            return Ok(());
        }
        for i in 0..self.amps.len() {
            if cond(i) {
                self.amps[i] = rotate(&self.amps[i], k).ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn hadamard(&mut self, q: usize) -> Result<(), Overflow> {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let j = i | m;
                let s = add4(&self.amps[i], &self.amps[j]).ok_or(Overflow)?;
                let d = sub4(&self.amps[i], &self.amps[j]).ok_or(Overflow)?;
                self.amps[i] = s;
                self.amps[j] = d;
            }
        }
        self.half_exp += 1;
        if self.half_exp >= 2 && self.amps.iter().all(|a| a.iter().all(C::is_even)) {
            for a in &mut self.amps {
                a.iter_mut().for_each(C::halve);
            }
            self.half_exp -= 2;
        }
        Ok(())
    }

    pub(crate) fn apply(&mut self, g: &Gate) -> Result<(), Overflow> {
        let t: Vec<usize> = g.targets().iter().map(|&q| self.mask(q)).collect();
        match g.kind() {
            GateKind::H => self.hadamard(g.targets()[0])?,
            GateKind::X => self.swap_where(t[0], |_| true),
            GateKind::Cnot => self.swap_where(t[1], |i| i & t[0] != 0),
            GateKind::Toffoli => self.swap_where(t[2], |i| i & t[0] != 0 && i & t[1] != 0),
            GateKind::Z => self.rotate_where(4, |i| i & t[0] != 0)?,
            GateKind::S => self.rotate_where(2, |i| i & t[0] != 0)?,
            GateKind::T => self.rotate_where(1, |i| i & t[0] != 0)?,
            GateKind::Cz => {
                let m = t[0] | t[1];
                self.rotate_where(4, |i| i & m == m)?
            }
            GateKind::Ccz => {
                let m = t[0] | t[1] | t[2];
                self.rotate_where(4, |i| i & m == m)?
            }
            GateKind::PhaseZ(k) => {
                self.rotate_where(k, |i| i & t[0] == 0)?;
                self.rotate_where((8 - k) % 8, |i| i & t[0] != 0)?;
            }
        }
        Ok(())
    }

    pub(crate) fn run(c: &Circuit, index: usize) -> Result<Self, Overflow> {
        let mut k = Kernel::basis(c.n_qubits(), index);
        for g in c.gates() {
            k.apply(g)?;
        }
        Ok(k)
    }

    /// `Σ |amp_i|²` over the indices selected by `pred`.
    pub(crate) fn weight_where(&self, pred: impl Fn(usize) -> bool) -> ExactReal {
        let selected = || self.amps.iter().enumerate().filter(|(i, _)| pred(*i)).map(|(_, a)| a);
        if let Some((u, v)) = small_norm_sum(selected()) {
            return ExactReal::new(BigInt::from(u), BigInt::from(v), <BigInt as One>::one() << self.half_exp);
        }
        let (mut u, mut v) = (<BigInt as Zero>::zero(), <BigInt as Zero>::zero());
        for a in selected() {
            let (du, dv) = crate::exact::norm_sqr_parts(&a.clone().map(|c| c.to_big()));
            u += du;
            v += dv;
        }
        ExactReal::new(u, v, <BigInt as One>::one() << self.half_exp)
    }

    pub(crate) fn into_parts(self) -> (usize, u32, Vec<[BigInt; 4]>) {
        let amps = self.amps.into_iter().map(|a| a.map(|c| c.to_big())).collect();
        (self.n, self.half_exp, amps)
    }
}

fn small_norm_sum<'a, C: Coeff + 'a>(entries: impl Iterator<Item = &'a [C; 4]>) -> Option<(i128, i128)> {
    let (mut u, mut v) = (0i128, 0i128);
    for a in entries {
        let c: [i128; 4] = [a[0].as_i64()?.into(), a[1].as_i64()?.into(), a[2].as_i64()?.into(), a[3].as_i64()?.into()];
        for x in c {
            u = u.checked_add(x.checked_mul(x)?)?;
        }
        let cross = [(c[0], c[1], 1), (c[0], c[3], -1), (c[1], c[2], 1), (c[2], c[3], 1)];
        for (a, b, s) in cross {
            v = v.checked_add(a.checked_mul(b)?.checked_mul(s)?)?;
        }
    }
    Some((u, v))
}

/// Either kernel width; callers only see exact results.
pub(crate) enum AnyKernel {
    Small(Kernel<i64>),
    Big(Kernel<BigInt>),
}

impl AnyKernel {
    pub(crate) fn run(c: &Circuit, index: usize) -> Self {
        match Kernel::<i64>::run(c, index) {
            Ok(k) => AnyKernel::Small(k),
            Err(Overflow) => AnyKernel::Big(Kernel::<BigInt>::run(c, index).expect("BigInt kernel cannot overflow")),
        }
    }

    pub(crate) fn weight_where(&self, pred: impl Fn(usize) -> bool) -> ExactReal {
        match self {
            AnyKernel::Small(k) => k.weight_where(pred),
            AnyKernel::Big(k) => k.weight_where(pred),
        }
    }

    pub(crate) fn into_parts(self) -> (usize, u32, Vec<[BigInt; 4]>) {
        match self {
            AnyKernel::Small(k) => k.into_parts(),
            AnyKernel::Big(k) => k.into_parts(),
        }
    }
}
