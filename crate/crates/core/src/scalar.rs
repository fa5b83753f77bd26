//! Scalar backends: exact rationals, imaginary quadratic numbers, and
//! double-precision complex floats behind one trait.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = BigRational;
pub type C64 = num_complex::Complex64;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Field operations shared by every scalar backend.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Scalar for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        rat_int(n)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(rat_int(1) / self.clone())
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn conj(&self) -> Self {
        *self
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / *self)
        }
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_rat(r: &Rat) -> Self {
        C64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        C64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(C64::inv(self))
        }
    }
}

/// Splits `n > 0` as `k^2 * d` with `d` square-free, returning `(k, d)`.
///
/// Trial division up to 10^6; any cofactor beyond that is checked for being a
/// perfect square and otherwise taken square-free, which is correct for every
/// discriminant arising in this crate.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "squarefree_split needs n > 0");
    let mut rest = n.clone();
    let mut k = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= rest && p <= limit {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            for _ in 0..e / 2 {
                k *= &p;
            }
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let s = rest.sqrt();
        if &s * &s == rest {
            k *= s;
        } else {
            d *= rest;
        }
    }
    (k, d)
}

/// Exact element `a + b * sqrt(-d)` of an imaginary quadratic field.
///
/// Canonical form: `d` is square-free and >= 1, and `d == 1` whenever `b == 0`
/// (so purely rational values compare equal across contexts). `d == 1` means
/// the Gaussian field, i.e. `sqrt(-1) = i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    a: Rat,
    b: Rat,
    d: u64,
}

impl fmt::Debug for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt(-{})", self.a, self.b, self.d)
        }
    }
}

impl QuadNumber {
    pub fn new(a: Rat, b: Rat, d: u64) -> Self {
        let mut q = QuadNumber { a, b, d: d.max(1) };
        q.normalize();
        q
    }

    pub fn from_rat(a: Rat) -> Self {
        QuadNumber {
            a,
            b: rat_int(0),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// `i`, the Gaussian unit.
    pub fn i() -> Self {
        QuadNumber {
            a: rat_int(0),
            b: rat_int(1),
            d: 1,
        }
    }

    /// Exact `sqrt(-r)` of a positive rational `r`, with square-free kernel.
    pub fn sqrt_minus(r: &Rat) -> Self {
        assert!(r.is_positive(), "sqrt_minus needs r > 0");
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = r.numer() * r.denom();
        let (k, d) = squarefree_split(&pq);
        let b = Rat::new(k, r.denom().clone());
        let d = d.to_u64().expect("square-free kernel exceeds u64");
        QuadNumber::new(rat_int(0), b, d)
    }

    fn normalize(&mut self) {
        if Zero::is_zero(&self.b) {
            self.d = 1;
        }
    }

    /// Real part; exact because `sqrt(-d)` is purely imaginary.
    pub fn re(&self) -> &Rat {
        &self.a
    }

    /// Coefficient of `sqrt(-d)`, i.e. `Im(self) / sqrt(d)`.
    pub fn im_coeff(&self) -> &Rat {
        &self.b
    }

    pub fn field_d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn to_c64(&self) -> C64 {
        let im = self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt();
        C64::new(self.a.to_f64().unwrap_or(f64::NAN), im)
    }

    fn unify(&self, other: &Self) -> u64 {
        if self.is_rational() {
            other.d
        } else if other.is_rational() {
            self.d
        } else if self.d == other.d {
            self.d
        } else {
            panic!(
                "mixed quadratic fields: sqrt(-{}) vs sqrt(-{})",
                self.d, other.d
            );
        }
    }

    /// Field norm `a^2 + d * b^2` (= `self * conj(self)`).
    pub fn norm(&self) -> Rat {
        &self.a * &self.a + &self.b * &self.b * rat_int(self.d as i64)
    }
}

impl Add for QuadNumber {
    type Output = QuadNumber;
    fn add(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        QuadNumber::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadNumber {
    type Output = QuadNumber;
    fn sub(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        QuadNumber::new(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl Mul for QuadNumber {
    type Output = QuadNumber;
    fn mul(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        let dd = rat_int(d as i64);
        let a = &self.a * &rhs.a - &self.b * &rhs.b * dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadNumber::new(a, b, d)
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> Self {
        QuadNumber::new(-self.a, -self.b, self.d)
    }
}

impl Div for QuadNumber {
    type Output = QuadNumber;
    fn div(self, rhs: Self) -> Self {
        let inv = Scalar::inv(&rhs).expect("division by zero QuadNumber");
        self * inv
    }
}

impl Scalar for QuadNumber {
    fn zero() -> Self {
        Self::from_rat(rat_int(0))
    }
    fn one() -> Self {
        Self::from_rat(rat_int(1))
    }
    fn from_int(n: i64) -> Self {
        QuadNumber::from_int(n)
    }
    fn from_rat(r: &Rat) -> Self {
        QuadNumber::from_rat(r.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn conj(&self) -> Self {
        QuadNumber::new(self.a.clone(), -self.b.clone(), self.d)
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm();
        Some(QuadNumber::new(&self.a / &n, -&self.b / &n, self.d))
    }
}
