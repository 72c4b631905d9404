//! The Néron–Severi lattice of the surface in the basis (L₀, L∞).
//!
//! Everything is driven by one piece of data: which order the endomorphism
//! ring is. `Z[√e]` gives the intersection matrix [[2, 0], [0, −2e]], while
//! `Z[½ + ½√e]` (e ≡ 1 mod 4) gives [[2, 1], [1, (1−e)/2]]. Classes are
//! rational throughout; a class a·L₀ + b·L∞ with a > 0 is identified with
//! the point t = b/a on the cross-section line L_t = L₀ + t·L∞.

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::surd::Surd;
use crate::surd::is_square;
use num_bigint::BigInt;
use num_integer::Integer;

use serde::Serialize;
use std::fmt;

/// Which real-multiplication order the endomorphism ring is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingCase {
    /// Z[√e]
    Sqrt,
    /// Z[½ + ½√e], requires e ≡ 1 (mod 4)
    Half,
}

/// A validated (order, e) pair; fixes the intersection form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderSpec {
    case: RingCase,
    e: u64,
}

impl OrderSpec {
    pub fn new(case: RingCase, e: u64) -> Result<OrderSpec> {
        if e < 2 || is_square(&BigInt::from(e)) {
            return Err(Error::BadInput(format!("e must be a non-square integer ≥ 2, got {e}")));
        }
        if case == RingCase::Half && (e % 4 != 1 || e < 5) {
            return Err(Error::BadInput(format!(
                "the half-integer order needs e ≡ 1 (mod 4) and e ≥ 5, got {e}"
            )));
        }
        Ok(OrderSpec { case, e })
    }

    pub fn sqrt_order(e: u64) -> Result<OrderSpec> {
        OrderSpec::new(RingCase::Sqrt, e)
    }

    pub fn half_order(e: u64) -> Result<OrderSpec> {
        OrderSpec::new(RingCase::Half, e)
    }

    pub fn case(&self) -> RingCase {
        self.case
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn e_rat(&self) -> Rat {
        Rat::from_int(self.e as i64)
    }

    /// Exact intersection number L·M under the case's bilinear form.
    pub fn intersection(&self, l: &BundleClass, m: &BundleClass) -> Rat {
        let two = Rat::from_int(2);
        match self.case {
            RingCase::Sqrt => {
                // [[2, 0], [0, −2e]]
                &two * &l.a * &m.a - &two * &self.e_rat() * &l.b * &m.b
            }
            RingCase::Half => {
                // [[2, 1], [1, (1−e)/2]]
                let half_one_minus_e = Rat::new(BigInt::from(1i64 - self.e as i64), BigInt::from(2));
                &two * &l.a * &m.a + &l.a * &m.b + &l.b * &m.a + &half_one_minus_e * &l.b * &m.b
            }
        }
    }

    pub fn self_intersection(&self, l: &BundleClass) -> Rat {
        self.intersection(l, l)
    }

    /// Self-intersection of L_t = L₀ + t·L∞.
    pub fn ray_self_intersection(&self, t: &Rat) -> Rat {
        self.self_intersection(&BundleClass::ray(t))
    }

    /// Ampleness: a > 0 together with the case's positivity inequality
    /// (a² − e·b² > 0, resp. a² + ab + ((1−e)/4)·b² > 0), both strict.
    pub fn is_ample(&self, l: &BundleClass) -> bool {
        if !l.a.is_positive() {
            return false;
        }
        let form = match self.case {
            RingCase::Sqrt => l.a.square() - &self.e_rat() * &l.b.square(),
            RingCase::Half => {
                let quarter = Rat::new(BigInt::from(1i64 - self.e as i64), BigInt::from(4));
                &l.a.square() + &(&l.a * &l.b) + &(&quarter * &l.b.square())
            }
        };
        form.is_positive()
    }

    /// Is L_t ample, i.e. t strictly inside the nef interval?
    pub fn is_ample_ray(&self, t: &Rat) -> bool {
        self.is_ample(&BundleClass::ray(t))
    }

    /// Closed endpoints of the nef interval N(X), as exact surds.
    ///
    /// Z[√e]: ±1/√e = ±√e/e. Z[½+½√e]: −2/(√e+1) and 2/(√e−1), rationalized
    /// to (2 ∓ 2√e)/(e − 1)... with the sign arranged so lo < 0 < hi.
    pub fn nef_interval(&self) -> (Surd, Surd) {
        let e = self.e;
        match self.case {
            RingCase::Sqrt => {
                let inv = Rat::from_pair(1, e as i64);
                (
                    Surd::sqrt_multiple(-&inv, e),
                    Surd::sqrt_multiple(inv, e),
                )
            }
            RingCase::Half => {
                let den = Rat::from_int(e as i64 - 1);
                let two = Rat::from_int(2);
                let c = &two / &den;
                // −2/(√e+1) = (2 − 2√e)/(e−1), 2/(√e−1) = (2 + 2√e)/(e−1)
                (
                    Surd::new(c.clone(), -&c, e),
                    Surd::new(c.clone(), c, e),
                )
            }
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            RingCase::Sqrt => write!(f, "Z[√{}]", self.e),
            RingCase::Half => write!(f, "Z[½+½√{}]", self.e),
        }
    }
}

/// The class a·L₀ + b·L∞; rational coefficients are allowed throughout.
#[derive(Clone, PartialEq, Eq)]
pub struct BundleClass {
    pub a: Rat,
    pub b: Rat,
}

impl BundleClass {
    pub fn new(a: Rat, b: Rat) -> BundleClass {
        BundleClass { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> BundleClass {
        BundleClass::new(Rat::from_int(a), Rat::from_int(b))
    }

    pub fn from_bigints(a: BigInt, b: BigInt) -> BundleClass {
        BundleClass::new(Rat::from_bigint(a), Rat::from_bigint(b))
    }

    /// L_t = L₀ + t·L∞.
    pub fn ray(t: &Rat) -> BundleClass {
        BundleClass::new(Rat::one(), t.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn add(&self, other: &BundleClass) -> BundleClass {
        BundleClass::new(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn scale(&self, r: &Rat) -> BundleClass {
        BundleClass::new(&self.a * r, &self.b * r)
    }
}

impl fmt::Display for BundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl Serialize for BundleClass {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Debug for BundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Split a class with a > 0 into (scale, t) with scale·(1, t) = (a, b).
///
/// By homogeneity ε(L) = scale · ε(L_t).
pub fn normalize(l: &BundleClass) -> Result<(Rat, Rat)> {
    if !l.a.is_positive() {
        return Err(Error::NotNormalizable);
    }
    Ok((l.a.clone(), &l.b / &l.a))
}

/// The denominator q of t = p/q in lowest terms, and the primitive integral
/// class q·L_t = (q, p) on the same ray.
pub fn primitive_and_denominator(t: &Rat) -> (BigInt, BundleClass) {
    let q = t.denom().clone();
    let p = t.numer().clone();
    (q.clone(), BundleClass::from_bigints(q, p))
}

/// gcd-primitive integral representative of an integral class with a > 0.
pub fn primitive_integral(l: &BundleClass) -> Result<(BigInt, BundleClass)> {
    if !l.is_integral() || !l.a.is_positive() {
        return Err(Error::NotNormalizable);
    }
    let a = l.a.numer().clone();
    let b = l.b.numer().clone();
    let g = a.gcd(&b);
    Ok((
        g.clone(),
        BundleClass::from_bigints(&a / &g, &b / &g),
    ))
}
