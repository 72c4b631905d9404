//! Exact arithmetic in the real quadratic field Q(√e).
//!
//! A [`Surd`] is a value a + b·√e with rational a, b and a fixed non-square
//! e > 0. Since 1 and √e are linearly independent over Q, equality is
//! componentwise and every sign query can be decided exactly by comparing
//! a² against b²·e. No floating point is used anywhere.

use crate::error::{Error, Result};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::Signed;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Floor of √n for a nonnegative big integer.
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

/// Floor of √n for u128 values (Newton, f64-seeded).
pub(crate) fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128 + 1;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

/// Is `n` a perfect square?
pub(crate) fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Element a + b·√e of Q(√e), with e a fixed positive non-square integer.
#[derive(Clone, PartialEq, Eq)]
pub struct Surd {
    a: Rat,
    b: Rat,
    e: u64,
}

/// The four field operations, for the checked entry point [`Surd::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurdOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Surd {
    pub fn new(a: Rat, b: Rat, e: u64) -> Surd {
        debug_assert!(e >= 2 && !is_square(&BigInt::from(e)), "e must be non-square, got {e}");
        Surd { a, b, e }
    }

    pub fn from_rat(a: Rat, e: u64) -> Surd {
        Surd::new(a, Rat::zero(), e)
    }

    /// b·√e with a = 0.
    pub fn sqrt_multiple(b: Rat, e: u64) -> Surd {
        Surd::new(Rat::zero(), b, e)
    }

    pub fn zero(e: u64) -> Surd {
        Surd::from_rat(Rat::zero(), e)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn sqrt_coefficient(&self) -> &Rat {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn assert_same_e(&self, other: &Surd) {
        assert_eq!(
            self.e, other.e,
            "mixed surd contexts: √{} vs √{}",
            self.e, other.e
        );
    }

    /// Exact sign of the real number a + b·√e, in {−1, 0, +1}.
    ///
    /// When a and b have opposite signs the comparison reduces to a² vs b²·e;
    /// those can never be equal because e is not a square.
    pub fn sign(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // a and b nonzero with opposite signs
        let a2 = self.a.square();
        let b2e = self.b.square() * Rat::from_int(self.e as i64);
        match a2.cmp(&b2e) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("a² = b²e would make e a rational square"),
        }
    }

    /// Exact total order on Q(√e) for a shared e.
    pub fn cmp_surd(&self, other: &Surd) -> Ordering {
        self.assert_same_e(other);
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn lt(&self, other: &Surd) -> bool {
        self.cmp_surd(other) == Ordering::Less
    }

    pub fn le(&self, other: &Surd) -> bool {
        self.cmp_surd(other) != Ordering::Greater
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.cmp_surd(&Surd::from_rat(r.clone(), self.e))
    }

    pub fn min_surd(self, other: Surd) -> Surd {
        if self.le(&other) {
            self
        } else {
            other
        }
    }

    pub fn conj(&self) -> Surd {
        Surd::new(self.a.clone(), -&self.b, self.e)
    }

    /// Field norm a² − b²·e (a rational).
    pub fn norm(&self) -> Rat {
        self.a.square() - self.b.square() * Rat::from_int(self.e as i64)
    }

    pub fn square(&self) -> Surd {
        self * self
    }

    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(a+b√e) = (a−b√e)/(a²−b²e); the norm is nonzero for nonzero surds.
        let n = self.norm();
        Ok(Surd::new(&self.a / &n, -&self.b / &n, self.e))
    }

    pub fn scale(&self, r: &Rat) -> Surd {
        Surd::new(&self.a * r, &self.b * r, self.e)
    }

    /// Checked field arithmetic; reports `MixedContext` and `DivisionByZero`.
    pub fn arith(op: SurdOp, x: &Surd, y: &Surd) -> Result<Surd> {
        if x.e != y.e {
            return Err(Error::MixedContext { left: x.e, right: y.e });
        }
        match op {
            SurdOp::Add => Ok(x + y),
            SurdOp::Sub => Ok(x - y),
            SurdOp::Mul => Ok(x * y),
            SurdOp::Div => Ok(x * &y.recip()?),
        }
    }

    /// Largest integer ≤ a + b·√e, computed exactly.
    pub fn floor_int(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor_int();
        }
        // First estimate from ⌊√(b²e)⌋ scaled back, then correct by exact
        // comparisons (the estimate is off by at most one or two).
        let b2e = self.b.square() * Rat::from_int(self.e as i64);
        // √(p/q) ≈ isqrt(p·q)/q
        let approx_sqrt = Rat::new(isqrt(&(b2e.numer() * b2e.denom())), b2e.denom().clone());
        let approx = if self.b.is_positive() {
            &self.a + &approx_sqrt
        } else {
            &self.a - &approx_sqrt
        };
        let mut n = approx.floor_int();
        while self.cmp_rat(&Rat::from_bigint(&n + 1)) != Ordering::Less {
            n += 1;
        }
        while self.cmp_rat(&Rat::from_bigint(n.clone())) == Ordering::Less {
            n -= 1;
        }
        n
    }

    /// Rational lower/upper bounds with |hi − lo| ≤ 2^−bits · (1 + |b|).
    pub fn bracket(&self, bits: u32) -> (Rat, Rat) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        // 2^bits-scaled floor sqrt of e gives dyadic bounds for √e.
        let scale = BigInt::from(1) << (2 * bits);
        let lo_num = isqrt(&(BigInt::from(self.e) * &scale));
        let sqrt_lo = Rat::new(lo_num.clone(), BigInt::from(1) << bits);
        let sqrt_hi = Rat::new(lo_num + 1, BigInt::from(1) << bits);
        let (blo, bhi) = if self.b.is_positive() {
            (&self.b * &sqrt_lo, &self.b * &sqrt_hi)
        } else {
            (&self.b * &sqrt_hi, &self.b * &sqrt_lo)
        };
        (&self.a + &blo, &self.a + &bhi)
    }

    /// Best-effort f64 value, for human-readable output only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bracket(64);
        (lo.to_f64() + hi.to_f64()) / 2.0
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}·√{}", self.b, self.e);
        }
        if self.b.is_negative() {
            write!(f, "{} − {}·√{}", self.a, self.b.abs(), self.e)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.e)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Surd", 3)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("e", &self.e)?;
        s.end()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.a, -&self.b, self.e)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        self.assert_same_e(rhs);
        Surd::new(&self.a + &rhs.a, &self.b + &rhs.b, self.e)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self.assert_same_e(rhs);
        Surd::new(&self.a - &rhs.a, &self.b - &rhs.b, self.e)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        self.assert_same_e(rhs);
        let e = Rat::from_int(self.e as i64);
        Surd::new(
            &self.a * &rhs.a + &(&self.b * &rhs.b) * &e,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.e,
        )
    }
}

/// The square root of a nonnegative rational, kept unevaluated.
#[derive(Clone, PartialEq, Eq)]
pub struct SqrtRat {
    radicand: Rat,
}

impl SqrtRat {
    pub fn new(radicand: Rat) -> SqrtRat {
        assert!(!radicand.is_negative(), "negative radicand");
        SqrtRat { radicand }
    }

    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    /// Is the value itself rational, i.e. the radicand a square of a rational?
    pub fn is_rational(&self) -> bool {
        is_square(self.radicand.numer()) && is_square(self.radicand.denom())
    }

    /// The exact rational value, when there is one.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(Rat::new(
                isqrt(self.radicand.numer()),
                isqrt(self.radicand.denom()),
            ))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.radicand.to_f64().sqrt()
    }
}

impl fmt::Display for SqrtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "√({})", self.radicand)
    }
}

impl fmt::Debug for SqrtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SqrtRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SqrtRat", 1)?;
        s.serialize_field("sqrt", &self.radicand)?;
        s.end()
    }
}

/// Exact ordering of a rational r against √(radicand).
///
/// The sign of r is handled before squaring, so negative r compares less
/// than any positive square root without touching the radicand.
pub fn cmp_rat_sqrt(r: &Rat, s: &SqrtRat) -> Ordering {
    let rad = s.radicand();
    if rad.is_zero() {
        return r.signum().cmp(&0);
    }
    if !r.is_positive() {
        return Ordering::Less;
    }
    r.square().cmp(rad)
}
