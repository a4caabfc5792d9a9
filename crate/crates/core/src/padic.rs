//! Residues modulo `p^N` with explicit prime and precision.
//!
//! Every value carries the ring it lives in. Arithmetic between values from
//! different rings is refused instead of being coerced to the coarser
//! precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ring `Z / p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zp {
    prime: u64,
    precision: u32,
    modulus: BigUint,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Zp {
    pub fn new(prime: u64, precision: u32) -> Result<Arc<Zp>> {
        if !is_prime(prime) {
            return Err(Error::invalid(format!("{prime} is not a prime")));
        }
        if precision == 0 {
            return Err(Error::invalid("p-adic precision must be at least 1"));
        }
        Ok(Arc::new(Zp {
            prime,
            precision,
            modulus: BigUint::from(prime).pow(precision),
        }))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn element(self: &Arc<Self>, value: impl Into<BigInt>) -> PadicInt {
        PadicInt {
            value: self.reduce_signed(&value.into()),
            ring: Arc::clone(self),
        }
    }

    pub fn zero(self: &Arc<Self>) -> PadicInt {
        PadicInt {
            value: BigUint::zero(),
            ring: Arc::clone(self),
        }
    }

    pub fn one(self: &Arc<Self>) -> PadicInt {
        self.element(1)
    }

    /// Same prime, different precision.
    pub fn at_precision(&self, precision: u32) -> Arc<Zp> {
        Arc::new(Zp {
            prime: self.prime,
            precision,
            modulus: BigUint::from(self.prime).pow(precision),
        })
    }

    pub(crate) fn check_same(&self, other: &Zp) -> Result<()> {
        if self.prime != other.prime || self.precision != other.precision {
            return Err(Error::mismatch(format!(
                "Z/{}^{} vs Z/{}^{}",
                self.prime, self.precision, other.prime, other.precision
            )));
        }
        Ok(())
    }

    pub(crate) fn reduce(&self, x: BigUint) -> BigUint {
        if x < self.modulus {
            x
        } else {
            x % &self.modulus
        }
    }

    pub(crate) fn reduce_signed(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        let r = x.mod_floor(&m);
        r.to_biguint().expect("mod_floor is non-negative")
    }

    pub(crate) fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.reduce(a + b)
    }

    pub(crate) fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.modulus - (b - a)
        }
    }

    pub(crate) fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }

    pub(crate) fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.reduce(a * b)
    }

    /// `p^e` reduced into the ring (zero once `e >= N`).
    pub(crate) fn p_pow(&self, e: u32) -> BigUint {
        if e >= self.precision {
            BigUint::zero()
        } else {
            BigUint::from(self.prime).pow(e)
        }
    }

    /// `v_p(a)`, or `None` when `a = 0` in the ring.
    pub(crate) fn val(&self, a: &BigUint) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a.clone();
        let mut v = 0;
        loop {
            let (q, r) = x.div_rem(&BigUint::from(self.prime));
            if !r.is_zero() {
                return Some(v);
            }
            x = q;
            v += 1;
        }
    }

    pub(crate) fn is_unit(&self, a: &BigUint) -> bool {
        !(a % self.prime).is_zero()
    }

    pub(crate) fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if !self.is_unit(a) {
            return None;
        }
        a.modinv(&self.modulus)
    }

    /// Exact division by `p^e` of a value known to have valuation at least `e`.
    pub(crate) fn div_p_pow(&self, a: &BigUint, e: u32) -> BigUint {
        a / BigUint::from(self.prime).pow(e)
    }
}

/// Result of [`PadicInt::valuation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// The value is `0 mod p^N`; its true valuation is at least `N`.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// An element of `Z/p^N`, stored as its representative in `[0, p^N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    ring: Arc<Zp>,
    value: BigUint,
}

impl PadicInt {
    pub fn new(prime: u64, precision: u32, value: impl Into<BigInt>) -> Result<PadicInt> {
        Ok(Zp::new(prime, precision)?.element(value))
    }

    pub(crate) fn from_raw(ring: Arc<Zp>, value: BigUint) -> PadicInt {
        debug_assert!(value < ring.modulus);
        PadicInt { ring, value }
    }

    pub fn ring(&self) -> &Arc<Zp> {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.value)
    }

    pub fn valuation(&self) -> Valuation {
        match self.ring.val(&self.value) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(self.ring.precision),
        }
    }

    pub fn unit_inverse(&self) -> Result<PadicInt> {
        self.ring
            .inv(&self.value)
            .map(|v| PadicInt::from_raw(Arc::clone(&self.ring), v))
            .ok_or_else(|| Error::NotAUnit(format!("{} has valuation {}", self, self.valuation())))
    }

    pub fn pow(&self, e: &BigUint) -> PadicInt {
        PadicInt::from_raw(Arc::clone(&self.ring), self.value.modpow(e, &self.ring.modulus))
    }

    /// `u^(p^c)`: the image of `gamma^(p^c)` under a character with `chi(gamma) = u`.
    pub fn power_tower(&self, c: u32) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self} is not a unit")));
        }
        let mut x = self.clone();
        let p = BigUint::from(self.ring.prime);
        for _ in 0..c {
            x = x.pow(&p);
        }
        Ok(x)
    }

    /// Reduce to a coarser precision.
    pub fn reduce_to(&self, precision: u32) -> Result<PadicInt> {
        if precision > self.ring.precision || precision == 0 {
            return Err(Error::mismatch(format!(
                "cannot move from precision {} to {precision}",
                self.ring.precision
            )));
        }
        let ring = self.ring.at_precision(precision);
        Ok(PadicInt {
            value: ring.reduce(self.value.clone()),
            ring,
        })
    }

    /// The representative in `(-p^N/2, p^N/2]`.
    pub fn to_signed(&self) -> BigInt {
        let half = &self.ring.modulus >> 1;
        if self.value > half {
            BigInt::from_biguint(Sign::Minus, &self.ring.modulus - &self.value)
        } else {
            BigInt::from(self.value.clone())
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    pub fn checked_add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.ring.check_same(&other.ring)?;
        Ok(PadicInt::from_raw(
            Arc::clone(&self.ring),
            self.ring.add(&self.value, &other.value),
        ))
    }

    pub fn checked_sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.ring.check_same(&other.ring)?;
        Ok(PadicInt::from_raw(
            Arc::clone(&self.ring),
            self.ring.sub(&self.value, &other.value),
        ))
    }

    pub fn checked_mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.ring.check_same(&other.ring)?;
        Ok(PadicInt::from_raw(
            Arc::clone(&self.ring),
            self.ring.mul(&self.value, &other.value),
        ))
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.ring.prime, self.ring.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on a ring mismatch; use the `checked_*` methods when
// the operands come from untrusted input.
impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        self.checked_add(rhs).expect("PadicInt ring mismatch")
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        self.checked_sub(rhs).expect("PadicInt ring mismatch")
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        self.checked_mul(rhs).expect("PadicInt ring mismatch")
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::from_raw(Arc::clone(&self.ring), self.ring.neg(&self.value))
    }
}
