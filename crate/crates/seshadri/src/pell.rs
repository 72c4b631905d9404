//! Minimal positive solutions of x² − D·y² = 1 and x² − D·y² = 4.
//!
//! The N = 1 case walks the continued-fraction expansion of √D and returns
//! the first convergent (h, k) with h² − D·k² = 1, which is the fundamental
//! solution. The N = 4 case reduces to N = 1: for D ≡ 0 (mod 4) substitute
//! x = 2X; for D ≡ 1 (mod 4) the equation has a solution in odd integers
//! exactly when the fundamental unit of Z[√D] is a cube in the order of
//! half-integers, which is detected by solving a³ − 3a = 2x₁ for an integer
//! a; otherwise the doubled N = 1 solution is minimal.
//!
//! Solutions are cached per (D, N) behind a mutex, so repeated queries from
//! the Seshadri engine are cheap and the functions stay observably pure.

use crate::error::{Error, Result};
use crate::surd::{is_square, isqrt};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// A primitive (minimal positive) solution of x² − D·y² = N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub d: BigInt,
    pub n: u8,
}

impl PellSolution {
    /// x² − D·y² == N, checked exactly.
    pub fn verify(&self) -> bool {
        &self.x * &self.x - &self.d * &self.y * &self.y == BigInt::from(self.n)
    }
}

fn cache() -> &'static Mutex<HashMap<(BigInt, u8), (BigInt, BigInt)>> {
    static CACHE: OnceLock<Mutex<HashMap<(BigInt, u8), (BigInt, BigInt)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_discriminant(d: &BigInt) -> Result<()> {
    if d < &BigInt::from(2) || is_square(d) {
        return Err(Error::SquareDiscriminant(d.clone()));
    }
    Ok(())
}

/// Smallest k ≤ kmax with D·k² + 1 a perfect square, i.e. the fundamental
/// solution whenever its y is small. Much cheaper than the continued
/// fraction, and a failure certifies y > kmax for callers that only need
/// a bound on 1/y².
pub(crate) fn probe_small_y(d: &BigInt, kmax: u64) -> Option<(BigInt, BigInt)> {
    // u128 fast path: d·kmax² must stay below 2¹²⁶.
    if let Ok(du) = u128::try_from(d) {
        if du < (1u128 << 100) && kmax < (1 << 12) {
            for k in 1..=kmax as u128 {
                let t = du * k * k + 1;
                let r = crate::surd::isqrt_u128(t);
                if r * r == t {
                    return Some((BigInt::from(r), BigInt::from(k)));
                }
            }
            return None;
        }
    }
    let mut k = BigInt::one();
    for _ in 0..kmax {
        let t = d * &k * &k + 1;
        if is_square(&t) {
            return Some((isqrt(&t), k));
        }
        k += 1;
    }
    None
}

/// Minimal positive solution of x² − D·y² = 1 for non-square D ≥ 2.
pub fn pell1(d: &BigInt) -> Result<PellSolution> {
    check_discriminant(d)?;
    if let Some((x, y)) = cache().lock().unwrap().get(&(d.clone(), 1)) {
        return Ok(PellSolution { x: x.clone(), y: y.clone(), d: d.clone(), n: 1 });
    }
    if let Some((x, y)) = probe_small_y(d, 64) {
        cache()
            .lock()
            .unwrap()
            .insert((d.clone(), 1), (x.clone(), y.clone()));
        return Ok(PellSolution { x, y, d: d.clone(), n: 1 });
    }

    // Continued fraction of √D. With P/Q from the standard recurrence the
    // convergents satisfy h_i² − D·k_i² = (−1)^(i+1) Q_(i+1), so the loop
    // only watches for Q == 1 and never multiplies full-size convergents;
    // an odd period yields the norm −1 unit, which is squared at the end.
    let a0 = isqrt(d);
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut odd_steps = false; // parity of i+1 for the current convergent (h_i, k_i)
    let (x, y) = loop {
        p = &q * &a - &p;
        q = (d - &p * &p) / &q;
        odd_steps = !odd_steps;
        if q == BigInt::one() {
            if odd_steps {
                // h² − D·k² = −1; the fundamental +1 solution is its square.
                break (&h * &h + d * &k * &k, BigInt::from(2) * &h * &k);
            }
            break (h, k);
        }
        a = (&a0 + &p) / &q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    };
    debug_assert!(&x * &x - d * &y * &y == BigInt::one());
    cache()
        .lock()
        .unwrap()
        .insert((d.clone(), 1), (x.clone(), y.clone()));
    Ok(PellSolution { x, y, d: d.clone(), n: 1 })
}

/// Largest integer a ≥ 2 with a³ − 3a ≤ target, for target ≥ 2.
fn cubic_floor(target: &BigInt) -> BigInt {
    let mut lo = BigInt::from(2);
    let mut hi = isqrt(target) + BigInt::from(2);
    // a³ − 3a is increasing for a ≥ 1, so binary search is fine.
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if &mid * &mid * &mid - BigInt::from(3) * &mid <= *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Minimal positive solution of x² − D·y² = 4 for non-square D ≥ 2.
pub fn pell4(d: &BigInt) -> Result<PellSolution> {
    check_discriminant(d)?;
    if let Some((x, y)) = cache().lock().unwrap().get(&(d.clone(), 4)) {
        return Ok(PellSolution { x: x.clone(), y: y.clone(), d: d.clone(), n: 4 });
    }

    let four = BigInt::from(4);
    let (x, y) = if (d % &four).is_zero() {
        // x must be even; x = 2X turns the equation into X² − (D/4)·y² = 1.
        let inner = pell1(&(d / &four))?;
        (BigInt::from(2) * inner.x, inner.y)
    } else {
        let base = pell1(d)?;
        let doubled = (BigInt::from(2) * &base.x, BigInt::from(2) * &base.y);
        if (d % &four) == BigInt::one() {
            // An odd solution (a, b) satisfies ((a+b√D)/2)³ = x₁ + y₁√D,
            // which forces a³ − 3a = 2x₁ and b = 2y₁/(a² − 1).
            let target = BigInt::from(2) * &base.x;
            let a = cubic_floor(&target);
            let mut found = None;
            if &a * &a * &a - BigInt::from(3) * &a == target {
                let denom = &a * &a - BigInt::one();
                let num = BigInt::from(2) * &base.y;
                if (&num % &denom).is_zero() {
                    let b = num / denom;
                    if &a * &a - d * &b * &b == four {
                        found = Some((a, b));
                    }
                }
            }
            found.unwrap_or(doubled)
        } else {
            // D ≡ 2, 3 (mod 4): both x and y are forced even.
            doubled
        }
    };

    cache()
        .lock()
        .unwrap()
        .insert((d.clone(), 4), (x.clone(), y.clone()));
    Ok(PellSolution { x, y, d: d.clone(), n: 4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigInt {
        BigInt::from(n)
    }

    fn isqrt_u128(n: u128) -> u128 {
        if n < 2 {
            return n;
        }
        let mut x = (n as f64).sqrt() as u128 + 2;
        while x * x > n {
            x -= 1;
        }
        x
    }

    /// Brute-force oracle: smallest y ≤ cap with D·y² + N a perfect square.
    fn brute(d: u64, n: u64, cap: u64) -> Option<(BigInt, BigInt)> {
        for y in 1..=cap as u128 {
            let t = d as u128 * y * y + n as u128;
            let r = isqrt_u128(t);
            if r * r == t {
                return Some((BigInt::from(r), BigInt::from(y)));
            }
        }
        None
    }

    #[test]
    fn pell1_examples() {
        let s = pell1(&big(2)).unwrap();
        assert_eq!((s.x, s.y), (big(3), big(2)));
        let s = pell1(&big(48)).unwrap();
        assert_eq!((s.x, s.y), (big(7), big(1)));
        assert_eq!(pell1(&big(4)), Err(Error::SquareDiscriminant(big(4))));
        assert_eq!(pell1(&big(1)), Err(Error::SquareDiscriminant(big(1))));
    }

    #[test]
    fn pell4_examples() {
        let s = pell4(&big(5)).unwrap();
        assert_eq!((s.x, s.y), (big(3), big(1)));
        let s = pell4(&big(33)).unwrap();
        assert_eq!((s.x, s.y), (big(46), big(8)));
        assert_eq!(pell4(&big(9)), Err(Error::SquareDiscriminant(big(9))));
    }

    #[test]
    fn pell4_mod4_branches() {
        // D ≡ 0 (mod 4): minimal solution comes from D/4, not from doubling.
        let s = pell4(&big(12)).unwrap();
        assert_eq!((s.x, s.y), (big(4), big(1)));
        // D ≡ 2 (mod 4)
        let s = pell4(&big(2)).unwrap();
        assert_eq!((s.x, s.y), (big(6), big(4)));
    }

    #[test]
    fn solutions_satisfy_equation_and_match_brute_force() {
        for d in 2u64..=400 {
            if is_square(&big(d)) {
                continue;
            }
            let s1 = pell1(&big(d)).unwrap();
            assert!(s1.verify(), "pell1({d}) identity");
            let s4 = pell4(&big(d)).unwrap();
            assert!(s4.verify(), "pell4({d}) identity");
            assert!(s4.y <= BigInt::from(2) * &s1.y, "pell4({d}) y bound");
            // Minimality against the brute oracle wherever it can reach.
            if let Some((bx, by)) = brute(d, 1, 30_000) {
                assert_eq!((bx, by), (s1.x.clone(), s1.y.clone()), "pell1({d}) minimal");
            }
            if let Some((bx, by)) = brute(d, 4, 30_000) {
                assert_eq!((bx, by), (s4.x.clone(), s4.y.clone()), "pell4({d}) minimal");
            }
        }
    }

    #[test]
    fn closed_form_family() {
        // D = 4n² + 4n has fundamental solution (2n+1, 1).
        for n in 1u64..=50 {
            let s = pell1(&big(4 * n * n + 4 * n)).unwrap();
            assert_eq!((s.x, s.y), (big(2 * n + 1), big(1)));
        }
    }

    #[test]
    fn large_fundamental_solution() {
        // D = 61 is the classic large case.
        let s = pell1(&big(61)).unwrap();
        assert_eq!(s.x.to_string(), "1766319049");
        assert_eq!(s.y.to_string(), "226153980");
    }
}
