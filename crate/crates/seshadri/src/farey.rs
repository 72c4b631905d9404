//! Enumeration of reduced fractions with bounded denominator.
//!
//! The walk starts from a Stern–Brocot descent that brackets the left
//! endpoint between two consecutive order-qmax Farey fractions, then steps
//! through the sequence with the classical next-term recurrence
//! k = ⌊(n + b)/d⌋, next = (k·c − a)/(k·d − b). Integer shifts extend the
//! Farey sequence beyond [0, 1], so arbitrary surd intervals are fine.

use crate::rat::Rat;
use crate::surd::Surd;
use num_bigint::BigInt;
use std::cmp::Ordering;

/// All reduced p/q with 1 ≤ q ≤ qmax strictly inside (lo, hi), ascending.
pub fn fractions_in_interval(lo: &Surd, hi: &Surd, qmax: u64) -> Vec<Rat> {
    assert!(qmax >= 1);
    let mut out = Vec::new();
    if lo.cmp_surd(hi) != Ordering::Less {
        return out;
    }
    let shift = lo.floor_int();
    let shift_rat = Rat::from_bigint(shift.clone());
    let e = lo.radicand();
    let lo = lo - &Surd::from_rat(shift_rat.clone(), e);
    let hi = hi - &Surd::from_rat(shift_rat, e);

    // Descend until (a/b, c/d) are consecutive in the order-qmax sequence
    // with a/b ≤ lo < c/d.
    let n = BigInt::from(qmax);
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    let (mut c, mut d) = (BigInt::from(1), BigInt::from(1));
    loop {
        let (mn, md) = (&a + &c, &b + &d);
        if md > n {
            break;
        }
        let med = Rat::new(mn, md);
        if lo.cmp_rat(&med) != Ordering::Less {
            a = med.numer().clone();
            b = med.denom().clone();
        } else {
            c = med.numer().clone();
            d = med.denom().clone();
        }
    }

    loop {
        let cur = Rat::new(c.clone(), d.clone());
        if hi.cmp_rat(&cur) != Ordering::Greater {
            break;
        }
        if lo.cmp_rat(&cur) == Ordering::Less {
            out.push(cur + Rat::from_bigint(shift.clone()));
        }
        let k = (&n + &b) / &d;
        let next_num = &k * &c - &a;
        let next_den = &k * &d - &b;
        a = std::mem::replace(&mut c, next_num);
        b = std::mem::replace(&mut d, next_den);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Brute-force oracle: per-denominator scan.
    fn brute(lo: &Surd, hi: &Surd, qmax: u64) -> Vec<Rat> {
        let mut out = Vec::new();
        for q in 1..=qmax {
            let scaled_lo = lo.scale(&Rat::from_int(q as i64));
            let scaled_hi = hi.scale(&Rat::from_int(q as i64));
            let mut p = scaled_lo.floor_int();
            let hi_cut = scaled_hi.floor_int() + 1;
            while p <= hi_cut {
                let r = Rat::new(p.clone(), BigInt::from(q));
                if r.denom() == &BigInt::from(q)
                    && lo.cmp_rat(&r) == Ordering::Less
                    && hi.cmp_rat(&r) == Ordering::Greater
                {
                    out.push(r);
                }
                p += 1;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn walk_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..120 {
            let e = [2u64, 5, 33][rng.gen_range(0..3)];
            let a = Rat::from_pair(rng.gen_range(-30..30), rng.gen_range(1..9));
            let width = Rat::from_pair(rng.gen_range(1..30), rng.gen_range(1..9));
            let blo = Rat::from_pair(rng.gen_range(-3..3), rng.gen_range(5..9));
            let lo = Surd::new(a.clone(), blo.clone(), e);
            let hi = Surd::new(a + width, blo, e);
            let qmax = rng.gen_range(1..=12);
            assert_eq!(
                fractions_in_interval(&lo, &hi, qmax),
                brute(&lo, &hi, qmax),
                "({lo}, {hi}) qmax={qmax}"
            );
        }
    }

    #[test]
    fn endpoints_are_excluded() {
        // (0, 1) with qmax 3: 1/3, 1/2, 2/3
        let lo = Surd::zero(2);
        let hi = Surd::from_rat(Rat::one(), 2);
        let got = fractions_in_interval(&lo, &hi, 3);
        let want: Vec<Rat> = vec![
            Rat::from_pair(1, 3),
            Rat::from_pair(1, 2),
            Rat::from_pair(2, 3),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn crosses_integers() {
        // (−√2/2, √2/2), qmax 2: −1/2, 0, 1/2
        let lo = Surd::sqrt_multiple(Rat::from_pair(-1, 2), 2);
        let hi = Surd::sqrt_multiple(Rat::from_pair(1, 2), 2);
        let got = fractions_in_interval(&lo, &hi, 2);
        let want: Vec<Rat> = vec![Rat::from_pair(-1, 2), Rat::zero(), Rat::from_pair(1, 2)];
        assert_eq!(got, want);
    }

    #[test]
    fn empty_interval() {
        let x = Surd::from_rat(Rat::from_pair(1, 3), 2);
        assert!(fractions_in_interval(&x, &x, 10).is_empty());
    }
}
