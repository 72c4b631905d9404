//! Pell bounds π_λ, their submaximality intervals J_λ, the interval-length
//! denominator bound, and the finite candidate set A_λ.
//!
//! For an ample L_λ with √(L_λ²) irrational, write λ = p/q in lowest terms
//! and let (l, k) solve x² − (q·L_λ)²·y² = 1. The Pell bound is the linear
//! function π_λ(t) = k·q·(L_λ·L_t)/l; it undercuts the general upper bound
//! √(L_t²) exactly on an open interval J_λ whose endpoints are explicit
//! elements of Q(√e).

use crate::error::{Error, Result};
use crate::farey;
use crate::lattice::{primitive_and_denominator, BundleClass, OrderSpec, RingCase};
use crate::pell::{pell1, PellSolution};
use crate::rat::Rat;
use crate::surd::{is_square, Surd};
use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Self-intersection of the primitive integral class (q, p); always an
/// integer.
pub fn primitive_disc(p: &BigInt, q: &BigInt, order: &OrderSpec) -> BigInt {
    let e = BigInt::from(order.e());
    match order.case() {
        RingCase::Sqrt => BigInt::from(2) * q * q - BigInt::from(2) * &e * p * p,
        // (1−e)/2 is an even integer for e ≡ 1 (mod 4)
        RingCase::Half => {
            BigInt::from(2) * q * q
                + BigInt::from(2) * p * q
                + (BigInt::from(1) - &e) / 2 * p * p
        }
    }
}

/// The linear upper bound π_λ(t) = c0 + c1·t with its provenance.
#[derive(Clone, PartialEq, Eq)]
pub struct PellBound {
    pub lambda: Rat,
    pub q: BigInt,
    pub pell: PellSolution,
    pub c0: Rat,
    pub c1: Rat,
}

impl PellBound {
    pub fn eval(&self, t: &Rat) -> Rat {
        &self.c0 + &(&self.c1 * t)
    }

    pub fn eval_surd(&self, t: &Surd) -> Surd {
        let e = t.radicand();
        &Surd::from_rat(self.c0.clone(), e) + &t.scale(&self.c1)
    }

    pub fn slope(&self) -> &Rat {
        &self.c1
    }

    /// The open interval where π_λ(t) < √(L_t²), from the closed formulas.
    pub fn submax_interval(&self, order: &OrderSpec) -> SubmaxInterval {
        let e = order.e_rat();
        let q2 = Rat::from_bigint(&self.q * &self.q);
        let k = Rat::from_bigint(self.pell.y.clone());
        let l = Rat::from_bigint(self.pell.x.clone());
        let k2q2 = &k.square() * &q2;
        let two = Rat::from_int(2);
        let (center, coeff) = match order.case() {
            RingCase::Sqrt => {
                // (2ek²q²λ ∓ l√e) / (e(2k²q² + 1))
                let den = &e * &(&(&two * &k2q2) + &Rat::one());
                (
                    &(&(&two * &e) * &(&k2q2 * &self.lambda)) / &den,
                    &l / &den,
                )
            }
            RingCase::Half => {
                // (2 + 2ek²q²λ ∓ 2l√e) / ((e−1) + 2eq²k²)
                let den = &(&e - &Rat::one()) + &(&(&two * &e) * &k2q2);
                (
                    &(&two + &(&(&two * &e) * &(&k2q2 * &self.lambda))) / &den,
                    &(&two * &l) / &den,
                )
            }
        };
        let eu = order.e();
        SubmaxInterval {
            lo: Surd::new(center.clone(), -&coeff, eu),
            hi: Surd::new(center, coeff, eu),
        }
    }
}

impl fmt::Debug for PellBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "π_{} [l={}, k={}]: t ↦ {} + {}·t",
            self.lambda, self.pell.x, self.pell.y, self.c0, self.c1
        )
    }
}

impl Serialize for PellBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PellBound", 5)?;
        s.serialize_field("lambda", &self.lambda)?;
        s.serialize_field("l", &self.pell.x.to_string())?;
        s.serialize_field("k", &self.pell.y.to_string())?;
        s.serialize_field("c0", &self.c0)?;
        s.serialize_field("c1", &self.c1)?;
        s.end()
    }
}

/// Open interval (lo, hi) in Q(√e); lo = a − b√e and hi = a' + b'√e with
/// b, b' > 0.
#[derive(Clone, PartialEq, Eq)]
pub struct SubmaxInterval {
    pub lo: Surd,
    pub hi: Surd,
}

impl SubmaxInterval {
    pub fn contains_rat(&self, t: &Rat) -> bool {
        self.lo.cmp_rat(t) == Ordering::Less && self.hi.cmp_rat(t) == Ordering::Greater
    }

    pub fn contains_surd(&self, t: &Surd) -> bool {
        self.lo.lt(t) && t.lt(&self.hi)
    }

    pub fn length(&self) -> Surd {
        &self.hi - &self.lo
    }

    /// Does this interval contain `other` (as sets, endpoints included)?
    pub fn contains_interval(&self, other: &SubmaxInterval) -> bool {
        self.lo.le(&other.lo) && other.hi.le(&self.hi)
    }

    /// Nonempty open intersection?
    pub fn overlaps(&self, other: &SubmaxInterval) -> bool {
        let lo = if self.lo.le(&other.lo) { &other.lo } else { &self.lo };
        let hi = if self.hi.le(&other.hi) { &self.hi } else { &other.hi };
        lo.lt(hi)
    }

    pub fn intersect(&self, other: &SubmaxInterval) -> Option<SubmaxInterval> {
        if !self.overlaps(other) {
            return None;
        }
        let lo = if self.lo.le(&other.lo) { other.lo.clone() } else { self.lo.clone() };
        let hi = if self.hi.le(&other.hi) { self.hi.clone() } else { other.hi.clone() };
        Some(SubmaxInterval { lo, hi })
    }

    /// Smallest interval containing both; meaningful when they overlap.
    pub fn union_hull(&self, other: &SubmaxInterval) -> SubmaxInterval {
        let lo = if self.lo.le(&other.lo) { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi.le(&other.hi) { other.hi.clone() } else { self.hi.clone() };
        SubmaxInterval { lo, hi }
    }
}

impl fmt::Debug for SubmaxInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl fmt::Display for SubmaxInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Construct the Pell bound at L_t.
///
/// Errors with `NotAmple` outside the open nef interval and with
/// `SquareSelfIntersection` when √(L_t²) is rational (no bound exists).
pub fn pell_bound(t: &Rat, order: &OrderSpec) -> Result<PellBound> {
    if !order.is_ample_ray(t) {
        return Err(Error::NotAmple);
    }
    let (q, primitive) = primitive_and_denominator(t);
    let d = order.self_intersection(&primitive);
    debug_assert!(d.is_integer() && d.is_positive());
    let d = d.numer().clone();
    if is_square(&d) {
        return Err(Error::SquareSelfIntersection);
    }
    let pell = pell1(&d)?;
    // π_λ(t) = k·q·(L_λ·L_t)/l, expanded in t against the basis (L₀, L∞).
    let ray = BundleClass::ray(t);
    let factor = Rat::new(&pell.y * &q, pell.x.clone());
    let c0 = &factor * &order.intersection(&ray, &BundleClass::from_ints(1, 0));
    let c1 = &factor * &order.intersection(&ray, &BundleClass::from_ints(0, 1));
    Ok(PellBound { lambda: t.clone(), q, pell, c0, c1 })
}

/// Largest integer q ≥ 0 with q·s·√e ≤ √11, decided exactly by comparing
/// q²·s²·e against 11 in Q(√e). Returns 0 when even q = 1 fails.
pub fn qbound_from_length(s: &Surd, order: &OrderSpec) -> Result<BigInt> {
    if s.sign() <= 0 {
        return Err(Error::NonpositiveLength);
    }
    let s2e = s.square().scale(&order.e_rat());
    let eleven = Rat::from_int(11);
    let fits = |q: &BigInt| -> bool {
        let q2 = Rat::from_bigint(q * q);
        (&Surd::from_rat(eleven.clone(), s.radicand()) - &s2e.scale(&q2)).sign() >= 0
    };
    if !fits(&BigInt::from(1)) {
        return Ok(BigInt::from(0));
    }
    // Exponential search for an upper bound, then binary search.
    let mut hi = BigInt::from(2);
    while fits(&hi) {
        hi *= 2;
    }
    let mut lo: BigInt = &hi / 2;
    while &hi - &lo > BigInt::from(1) {
        let mid: BigInt = (&lo + &hi) / 2;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// A member of the candidate set A_λ. Candidates whose primitive class has
/// square self-intersection carry no Pell bound; they are enumerated but
/// marked unusable and skipped in minimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub lambda: Rat,
    pub usable: bool,
}

/// The finite candidate set A_λ = {a/b ∈ N(X) : 1 ≤ b ≤ √11/(s(λ)√e)},
/// with s(λ) the distance from λ to the nearer endpoint of J_λ. Sorted
/// ascending; always contains λ itself.
pub fn candidate_set(t: &Rat, order: &OrderSpec) -> Result<Vec<Candidate>> {
    let bound = pell_bound(t, order)?;
    let interval = bound.submax_interval(order);
    let e = order.e();
    let t_surd = Surd::from_rat(t.clone(), e);
    let left = &t_surd - &interval.lo;
    let right = &interval.hi - &t_surd;
    let s = left.min_surd(right);
    let qb = qbound_from_length(&s, order)?;
    let qb: u64 = u64::try_from(&qb).unwrap_or_else(|_| {
        panic!("candidate-set denominator bound {qb} exceeds enumerable range")
    });
    let (nef_lo, nef_hi) = order.nef_interval();
    let set = farey::fractions_in_interval(&nef_lo, &nef_hi, qb);
    Ok(set
        .into_iter()
        .map(|lambda| {
            let (q, _) = primitive_and_denominator(&lambda);
            let d = primitive_disc(lambda.numer(), &q, order);
            let usable = !is_square(&d);
            Candidate { lambda, usable }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::SqrtRat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sqrt2() -> OrderSpec {
        OrderSpec::sqrt_order(2).unwrap()
    }

    #[test]
    fn pell_bound_examples() {
        let b = pell_bound(&Rat::zero(), &sqrt2()).unwrap();
        assert_eq!(b.c0, Rat::from_pair(4, 3));
        assert_eq!(b.c1, Rat::zero());
        assert_eq!((&b.pell.x, &b.pell.y), (&BigInt::from(3), &BigInt::from(2)));

        let b = pell_bound(&Rat::from_pair(1, 3), &sqrt2()).unwrap();
        assert_eq!(b.c0, Rat::from_pair(8, 5));
        assert_eq!(b.c1, Rat::from_pair(-16, 15));
        assert_eq!((&b.pell.x, &b.pell.y), (&BigInt::from(15), &BigInt::from(4)));

        assert_eq!(
            pell_bound(&Rat::from_pair(1, 2), &sqrt2()),
            Err(Error::SquareSelfIntersection)
        );
        assert_eq!(pell_bound(&Rat::one(), &sqrt2()), Err(Error::NotAmple));
    }

    #[test]
    fn submax_interval_examples() {
        // e = 2, λ = 0: (−√2/6, √2/6)
        let b = pell_bound(&Rat::zero(), &sqrt2()).unwrap();
        let j = b.submax_interval(&sqrt2());
        assert_eq!(j.lo, Surd::sqrt_multiple(Rat::from_pair(-1, 6), 2));
        assert_eq!(j.hi, Surd::sqrt_multiple(Rat::from_pair(1, 6), 2));

        // e = 5 (Case 1), λ = 0: (−√5/15, √5/15)
        let o5 = OrderSpec::sqrt_order(5).unwrap();
        let b = pell_bound(&Rat::zero(), &o5).unwrap();
        let j = b.submax_interval(&o5);
        assert_eq!(j.lo, Surd::sqrt_multiple(Rat::from_pair(-1, 15), 5));
        assert_eq!(j.hi, Surd::sqrt_multiple(Rat::from_pair(1, 15), 5));

        // Case 2, e = 5, λ = 0: ((1−3√5)/22, (1+3√5)/22)
        let h5 = OrderSpec::half_order(5).unwrap();
        let b = pell_bound(&Rat::zero(), &h5).unwrap();
        let j = b.submax_interval(&h5);
        assert_eq!(
            j.lo,
            Surd::new(Rat::from_pair(1, 22), Rat::from_pair(-3, 22), 5)
        );
        assert_eq!(
            j.hi,
            Surd::new(Rat::from_pair(1, 22), Rat::from_pair(3, 22), 5)
        );
    }

    #[test]
    fn qbound_examples() {
        let o = sqrt2();
        let s = Surd::sqrt_multiple(Rat::from_pair(1, 6), 2);
        assert_eq!(qbound_from_length(&s, &o).unwrap(), BigInt::from(9));
        let s = Surd::from_rat(Rat::one(), 2);
        assert_eq!(qbound_from_length(&s, &o).unwrap(), BigInt::from(2));
        let s = Surd::from_rat(Rat::from_int(4), 2);
        assert_eq!(qbound_from_length(&s, &o).unwrap(), BigInt::from(0));
        assert_eq!(
            qbound_from_length(&Surd::zero(2), &o),
            Err(Error::NonpositiveLength)
        );
    }

    #[test]
    fn candidate_set_at_zero() {
        let o = sqrt2();
        let cands = candidate_set(&Rat::zero(), &o).unwrap();
        // Brute oracle: all reduced p/q in (−√2/2, √2/2) with q ≤ 9.
        let (lo, hi) = o.nef_interval();
        let brute = farey::fractions_in_interval(&lo, &hi, 9);
        assert_eq!(
            cands.iter().map(|c| c.lambda.clone()).collect::<Vec<_>>(),
            brute
        );
        assert!(cands.iter().any(|c| c.lambda == Rat::zero() && c.usable));
        // 1/2 is enumerated but unusable: (2L₀+L∞)² = 4.
        let half = cands.iter().find(|c| c.lambda == Rat::from_pair(1, 2)).unwrap();
        assert!(!half.usable);
    }

    fn random_ample_lambda(rng: &mut StdRng, order: &OrderSpec) -> Option<Rat> {
        let t = Rat::from_pair(rng.gen_range(-60..60), rng.gen_range(1..60));
        order.is_ample_ray(&t).then_some(t)
    }

    #[test]
    fn bound_is_submaximal_at_base_point() {
        let mut rng = StdRng::seed_from_u64(21);
        for order in [
            sqrt2(),
            OrderSpec::sqrt_order(5).unwrap(),
            OrderSpec::half_order(33).unwrap(),
        ] {
            let mut done = 0;
            while done < 200 {
                let Some(t) = random_ample_lambda(&mut rng, &order) else { continue };
                let Ok(b) = pell_bound(&t, &order) else { continue };
                done += 1;
                // π_λ(λ) < √(L_λ²), strictly.
                let val = b.eval(&t);
                let l2 = order.ray_self_intersection(&t);
                assert_eq!(
                    crate::surd::cmp_rat_sqrt(&val, &SqrtRat::new(l2)),
                    Ordering::Less
                );
                // λ strictly inside J_λ, and the endpoint surd coefficients
                // have the advertised signs.
                let j = b.submax_interval(&order);
                assert!(j.contains_rat(&t));
                assert!(j.lo.sqrt_coefficient().is_negative());
                assert!(j.hi.sqrt_coefficient().is_positive());
            }
        }
    }

    #[test]
    fn interval_endpoints_solve_the_border_equation() {
        let mut rng = StdRng::seed_from_u64(22);
        for order in [sqrt2(), OrderSpec::half_order(5).unwrap()] {
            let mut done = 0;
            while done < 100 {
                let Some(t) = random_ample_lambda(&mut rng, &order) else { continue };
                let Ok(b) = pell_bound(&t, &order) else { continue };
                done += 1;
                let j = b.submax_interval(&order);
                for endpoint in [&j.lo, &j.hi] {
                    // π_λ(t)² = L_t² exactly in Q(√e).
                    let pi = b.eval_surd(endpoint);
                    let e = order.e();
                    let lt = endpoint.clone();
                    let lt2 = match order.case() {
                        RingCase::Sqrt => {
                            &Surd::from_rat(Rat::from_int(2), e)
                                - &lt.square().scale(&Rat::from_int(2 * e as i64))
                        }
                        RingCase::Half => {
                            let half = Rat::new(
                                BigInt::from(1i64 - e as i64),
                                BigInt::from(2),
                            );
                            &(&Surd::from_rat(Rat::from_int(2), e)
                                + &lt.scale(&Rat::from_int(2)))
                                + &lt.square().scale(&half)
                        }
                    };
                    assert_eq!(pi.square(), lt2, "order {order}, λ = {t}");
                }
            }
        }
    }

    #[test]
    fn interval_length_respects_the_bound() {
        // |J_λ| < √11/(q√e), exactly: e·q²·|J|² < 11.
        let mut rng = StdRng::seed_from_u64(23);
        for order in [
            sqrt2(),
            OrderSpec::sqrt_order(5).unwrap(),
            OrderSpec::half_order(5).unwrap(),
            OrderSpec::half_order(33).unwrap(),
        ] {
            let mut done = 0;
            while done < 500 {
                let Some(t) = random_ample_lambda(&mut rng, &order) else { continue };
                let Ok(b) = pell_bound(&t, &order) else { continue };
                done += 1;
                let len = b.submax_interval(&order).length();
                let len2 = len.square();
                let len2 = len2.as_rat().expect("length² is rational").clone();
                let q2e = Rat::from_bigint(&b.q * &b.q) * order.e_rat();
                assert!(len2 * q2e < Rat::from_int(11), "order {order}, λ = {t}");
            }
        }
    }

    #[test]
    fn lambda_is_a_candidate() {
        let mut rng = StdRng::seed_from_u64(24);
        let order = sqrt2();
        let mut done = 0;
        while done < 25 {
            let Some(t) = random_ample_lambda(&mut rng, &order) else { continue };
            let Ok(b) = pell_bound(&t, &order) else { continue };
            // The denominator bound scales with the Pell solution; only
            // enumerate the set where that stays desk-sized.
            let j = b.submax_interval(&order);
            let ts = Surd::from_rat(t.clone(), order.e());
            let s = (&ts - &j.lo).min_surd(&j.hi - &ts);
            if qbound_from_length(&s, &order).unwrap() > BigInt::from(500) {
                continue;
            }
            let cands = candidate_set(&t, &order).unwrap();
            done += 1;
            assert!(cands.iter().any(|c| c.lambda == t));
        }
    }
}
