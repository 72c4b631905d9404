//! Exact Seshadri constants ε(L_t) and curve certification.
//!
//! For √(L_t²) irrational, ε(L_t) is the minimum of π_μ(t) over a finite
//! candidate set around t. Enumerating that set literally is hopeless when
//! Pell solutions get large, so the minimization here prunes with an exact
//! light-cone estimate instead: for a usable candidate μ ≠ t with primitive
//! class M = (b, a) and D = M², the Pell solution (l, k) satisfies
//! l > k·√D, and M·L_t > √(M²·L_t²) because the intersection form has
//! signature (1,1), hence
//!
//!     π_μ(t) = k·b·(L_μ·L_t)/l > √(L_t²) · √(D/(D+1)).
//!
//! So once a value v < √(L_t²) is in hand, any candidate with
//! D·(L_t² − v²) ≥ v² is strictly worse than v and needs no Pell solution
//! at all. Moreover D = b²·L_μ² grows quadratically in the denominator b
//! (candidates are confined to |μ − t| < √11/(b√e), where L_μ² ≥ L_t² − 14/b),
//! so only finitely many b are ever inspected and every exclusion is exact.
//! The minimum over the surviving candidates equals the minimum over the
//! full candidate set, because a minimizer is never excluded.
//!
//! For √(L_t²) rational the general upper bound may be attained. In that
//! case ε(L_t) ≤ (2q²L_t² − 1)/(2q²√(L_t²)), and bracketing slopes taken
//! from the Seshadri curves of two flanking points confine any submaximal
//! curve to a computable interval I around t; minimizing the Pell bounds
//! living on I either beats √(L_t²) or proves ε(L_t) = √(L_t²).

use crate::bounds::{pell_bound, primitive_disc, qbound_from_length, PellBound};
use crate::error::{Error, Result};
use crate::lattice::{normalize, BundleClass, OrderSpec, RingCase};
use crate::pell::PellSolution;
use crate::rat::Rat;
use crate::surd::{cmp_rat_sqrt, is_square, isqrt, isqrt_u128, SqrtRat, Surd};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;
use std::cmp::Ordering;

/// The exact value of a Seshadri constant: a rational, or the square root
/// of a rational when the general upper bound is attained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum EpsilonValue {
    Rational(Rat),
    SqrtRational(SqrtRat),
}

impl EpsilonValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            EpsilonValue::Rational(r) => r.to_f64(),
            EpsilonValue::SqrtRational(s) => s.to_f64(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EpsilonKind {
    Submaximal,
    MaxBound,
}

/// ε(L) together with the bounds achieving it (in cross-section coordinates).
#[derive(Clone, Debug, Serialize)]
pub struct SeshadriResult {
    pub value: EpsilonValue,
    pub kind: EpsilonKind,
    pub witnesses: Vec<PellBound>,
}

/// One of the two numerical shadows an irreducible submaximal curve can
/// have; both induce the same linear bound.
#[derive(Clone, Debug)]
pub struct CurveClassOption {
    pub class: BundleClass,
    pub multiplicity: BigInt,
}

impl Serialize for CurveClassOption {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CurveClassOption", 2)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("multiplicity", &self.multiplicity.to_string())?;
        s.end()
    }
}

/// Witness that π_λ is strictly minimal at its own base point, i.e. the
/// bound of an irreducible submaximal curve.
#[derive(Clone, Debug)]
pub struct CurveCertificate {
    pub lambda: Rat,
    pub pell: PellSolution,
    pub bound: PellBound,
    pub curve_class_options: [CurveClassOption; 2],
}

/// Candidate μ = a/b near t: reduced, strictly inside the nef interval,
/// within the submaximality window e·(a − b·t)² < 11, with the primitive
/// discriminant D = (b·L_μ)² and the integer b·q_t·(L_μ·L_t) precomputed.
struct NearbyCandidate {
    mu: Rat,
    d: BigInt,
    /// M·L_t scaled by q_t, i.e. an integer; π_μ(t) = k·(this)/(l·q_t).
    m_dot_lt_num: BigInt,
}

/// (b·L_μ)·(q_t·L_t) as an integer, for M = (b, a) and N = (q_t, p_t) in
/// the (L₀, L∞) coordinates.
fn intersect_int(b: &BigInt, a: &BigInt, qt: &BigInt, pt: &BigInt, order: &OrderSpec) -> BigInt {
    let e = BigInt::from(order.e());
    match order.case() {
        RingCase::Sqrt => BigInt::from(2) * b * qt - BigInt::from(2) * &e * a * pt,
        RingCase::Half => {
            BigInt::from(2) * b * qt + b * pt + a * qt + (BigInt::one() - &e) / 2 * a * pt
        }
    }
}

/// Reduced, ample μ = a/b with its discriminant data; `None` when a is not
/// coprime to b or the ray is not ample.
fn make_candidate(a: BigInt, b_int: &BigInt, t: &Rat, order: &OrderSpec) -> Option<NearbyCandidate> {
    if a.gcd(b_int) != BigInt::one() {
        return None;
    }
    let mu = Rat::new(a.clone(), b_int.clone());
    if !order.is_ample_ray(&mu) {
        return None;
    }
    let d = primitive_disc(&a, b_int, order);
    let m_dot_lt_num = intersect_int(b_int, &a, t.denom(), t.numer(), order);
    Some(NearbyCandidate { mu, d, m_dot_lt_num })
}

fn candidates_at_denominator(t: &Rat, b: u64, order: &OrderSpec) -> Vec<NearbyCandidate> {
    let b_int = BigInt::from(b);
    let bt = t * &Rat::from_bigint(b_int.clone());
    let center = bt.floor_int();
    let e = BigInt::from(order.e());
    let qt = t.denom();
    let pt = t.numer();
    let eleven_qt2 = BigInt::from(11) * qt * qt;
    let mut out = Vec::new();
    for off in -3i64..=4 {
        let a = &center + BigInt::from(off);
        // e·(a·qt − b·pt)² < 11·qt² encodes |μ − t| < √11/(b√e)
        let delta = &a * qt - &b_int * pt;
        if &e * &delta * &delta >= eleven_qt2 {
            continue;
        }
        if let Some(cand) = make_candidate(a, &b_int, t, order) {
            out.push(cand);
        }
    }
    out
}

/// Hard ceiling on candidate denominators; a scan that reaches it aborts
/// with an internal error rather than running without bound.
const SCAN_LIMIT: u64 = 20_000_000;

/// Round a positive rational up to 128 fractional bits, keeping its
/// representation small for cheap repeated comparisons.
fn round_up(v: &Rat) -> Rat {
    let scale: BigInt = BigInt::from(1) << 128;
    Rat::new((v * &Rat::from_bigint(scale.clone())).ceil_int(), scale)
}

/// Exclusion state for the candidate scan at t.
///
/// π_μ(t) = k·(M·L_t)/l with l > k·√D gives π_μ(t) > (M·L_t)/√(D+1), so a
/// candidate is hopeless once (M·L_t)² ≥ v²·(D+1) for any v ≥ best. The
/// denominator scan stops at b_term, past which every windowed candidate
/// has D ≥ b²·L_t² − 14·b ≥ v²/(L_t² − v²) and loses by the light-cone
/// inequality M·L_t ≥ √(D·L_t²).
struct Pruner {
    lt2: Rat,
    sqrt_lt2: SqrtRat,
    qt2: Rat,
    best: Rat,
    /// Small-representation stand-in with best ≤ best_up < √(L_t²).
    best_up: Rat,
    /// best_up², cached: the exclusion test runs per candidate.
    best_up2: Rat,
    b_term: u64,
}

impl Pruner {
    fn new(t: &Rat, lt2: &Rat, value: Rat) -> Pruner {
        let mut p = Pruner {
            lt2: lt2.clone(),
            sqrt_lt2: SqrtRat::new(lt2.clone()),
            qt2: Rat::from_bigint(t.denom() * t.denom()),
            best: Rat::zero(),
            best_up: Rat::zero(),
            best_up2: Rat::zero(),
            b_term: 0,
        };
        p.update(value);
        p
    }

    fn update(&mut self, value: Rat) {
        debug_assert_eq!(cmp_rat_sqrt(&value, &self.sqrt_lt2), Ordering::Less);
        let rounded = round_up(&value);
        self.best_up = if cmp_rat_sqrt(&rounded, &self.sqrt_lt2) == Ordering::Less {
            rounded
        } else {
            value.clone()
        };
        self.best = value;
        self.best_up2 = self.best_up.square();
        // Smallest b with b²·L_t² − 14·b ≥ B := best_up²/(L_t² − best_up²);
        // root of the quadratic, rounded up through a √ overestimate.
        let v2 = self.best_up.square();
        let cap = &v2 / &(&self.lt2 - &v2);
        let disc = Rat::from_int(196) + Rat::from_int(4) * &self.lt2 * &cap;
        let sqrt_over = Rat::new(isqrt(&(disc.numer() * disc.denom())) + 1, disc.denom().clone());
        let b_term = (&(&Rat::from_int(14) + &sqrt_over) / &(&Rat::from_int(2) * &self.lt2))
            .ceil_int()
            + 1;
        self.b_term = u64::try_from(&b_term).unwrap_or(u64::MAX);
    }

    /// Certainly π_μ(t) > best? Exact, with only small multiplications.
    /// `recip_k2` is an upper bound for 1/k² of the candidate's Pell
    /// solution (1 unconditionally, 1/(K+1)² once probing rules out k ≤ K):
    /// π_μ(t) = (M·L_t)/(q_t·√(D + 1/k²)) ≥ (M·L_t)/(q_t·√(D + recip_k2)).
    fn excluded(&self, cand: &NearbyCandidate, recip_k2: &Rat) -> bool {
        let lhs = Rat::from_bigint(&cand.m_dot_lt_num * &cand.m_dot_lt_num);
        let rhs = &(&self.best_up2 * &(&Rat::from_bigint(cand.d.clone()) + recip_k2)) * &self.qt2;
        lhs >= rhs
    }
}


/// Outcome of the cheap comparison of π_μ(t) against a value v, using only
/// integer square-root probes.
enum QuickCmp {
    /// π_μ(t) > v, proven without the Pell solution.
    Above,
    /// π_μ(t) < v, proven without the Pell solution (via π < (M·L_t)/(q√D)).
    Below,
    /// The probe found the fundamental solution outright.
    Solved,
    /// Genuinely needs the continued fraction.
    Unknown,
}

/// Compare π_μ(t) against a value v without computing the fundamental
/// solution unless it is small. `v_dn2 ≤ v² ≤ v_up2` must be squared
/// cheap-to-multiply enclosures, already scaled by q_t².
fn quick_compare(cand: &NearbyCandidate, v_dn2_qt2: &Rat, v_up2_qt2: &Rat) -> QuickCmp {
    let lhs = Rat::from_bigint(&cand.m_dot_lt_num * &cand.m_dot_lt_num);
    // π > (M·L_t)/(q·√(D+1)) ≥ v_up ⟹ above.
    if lhs >= v_up2_qt2 * &Rat::from_bigint(&cand.d + 1) {
        return QuickCmp::Above;
    }
    // π < (M·L_t)/(q·√D) ≤ v_dn ⟹ below.
    if !v_dn2_qt2.is_positive() {
        return QuickCmp::Unknown;
    }
    if lhs <= v_dn2_qt2 * &Rat::from_bigint(cand.d.clone()) {
        return QuickCmp::Below;
    }
    match cf_exclude_or_terminate(&cand.d, &lhs, v_up2_qt2) {
        CfProbe::Excluded => QuickCmp::Above,
        CfProbe::Terminates => QuickCmp::Solved,
        CfProbe::GaveUp => QuickCmp::Unknown,
    }
}

/// Outcome of the bounded continued-fraction walk on √d.
enum CfProbe {
    /// The walk hit the period end: the fundamental solution is cheap, and
    /// pell1 will reproduce it quickly.
    Terminates,
    /// The walk certified, through the Fibonacci growth of convergent
    /// denominators, that k is large enough for π_μ(t) > v.
    Excluded,
    /// Pathologically long period; the caller decides exactly.
    GaveUp,
}

/// Walk the continued fraction of √d with u128 state. After j unterminated
/// steps the fundamental y is at least Fib(j), so 1/k² ≤ 1/Fib(j)² plugs
/// into the exclusion test (M·L_t)² ≥ v_up²·q_t²·(D + 1/k²); near-threshold
/// candidates are excluded within a few dozen steps. For gaps beyond the
/// reach of u128 Fibonacci numbers, Fib(m·j) ≥ Fib(j)^m extends the bound
/// by exact squaring.
fn cf_exclude_or_terminate(d: &BigInt, lhs: &Rat, v_up2_qt2: &Rat) -> CfProbe {
    let Ok(du) = u128::try_from(d) else {
        return CfProbe::GaveUp;
    };
    if du >= 1 << 100 {
        return CfProbe::GaveUp;
    }
    let a0 = isqrt_u128(du);
    debug_assert!(a0 * a0 != du, "square discriminants are filtered earlier");
    let rhs_d = v_up2_qt2 * &Rat::from_bigint(d.clone());
    let (mut p, mut q) = (0u128, 1u128);
    let mut a = a0;
    // Exact Fibonacci pair, frozen at the last value fitting u128.
    let (mut fib_prev, mut fib) = (1u128, 1u128);
    let mut fib_step = 1u32;
    let mut next_check = 8u32;
    for step in 1u32..=200_000 {
        p = q * a - p;
        q = (du - p * p) / q;
        if q == 1 {
            return CfProbe::Terminates;
        }
        a = (a0 + p) / q;
        if fib_step == step {
            if let Some(next) = fib.checked_add(fib_prev) {
                fib_prev = std::mem::replace(&mut fib, next);
                fib_step += 1;
            }
        }
        if step == next_check {
            next_check = next_check.saturating_mul(2).min(next_check + 4096);
            // k ≥ Fib(step), via Fib(m·j) ≥ Fib(j)^m when u128 ran out.
            let k_lb: BigInt = if fib_step > step {
                BigInt::from(fib)
            } else {
                BigInt::from(fib).pow(step / fib_step)
            };
            let recip = Rat::new(BigInt::one(), &k_lb * &k_lb);
            if *lhs >= &rhs_d + &(v_up2_qt2 * &recip) {
                return CfProbe::Excluded;
            }
        }
    }
    CfProbe::GaveUp
}

/// Round a positive rational down to 128 fractional bits.
fn round_down(v: &Rat) -> Rat {
    let scale: BigInt = BigInt::from(1) << 128;
    Rat::new((v * &Rat::from_bigint(scale.clone())).floor_int(), scale)
}

struct Minimization {
    best: Rat,
    witnesses: Vec<PellBound>,
}

/// Minimize π_μ(t) over all usable candidates, seeded with the bound at t
/// itself. Exact; records every minimizer.
fn minimize_at(t: &Rat, order: &OrderSpec, seed: PellBound) -> Result<Minimization> {
    let lt2 = order.ray_self_intersection(t);
    let mut witnesses = vec![seed.clone()];
    let mut pruner = Pruner::new(t, &lt2, seed.eval(t));
    let mut b = 1u64;
    while b <= pruner.b_term {
        if b > SCAN_LIMIT {
            return Err(Error::Internal(format!(
                "minimization at t = {t} needs denominators beyond {SCAN_LIMIT}"
            )));
        }
        let one = Rat::one();
        for cand in candidates_at_denominator(t, b, order) {
            if cand.mu == *t || is_square(&cand.d) || pruner.excluded(&cand, &one) {
                continue;
            }
            // The bounded continued-fraction walk either certifies that the
            // candidate stays above the current best or shows that its
            // Pell solution is cheap to compute.
            {
                let lhs = Rat::from_bigint(&cand.m_dot_lt_num * &cand.m_dot_lt_num);
                let v_up2_qt2 = &pruner.best_up2 * &pruner.qt2;
                if matches!(
                    cf_exclude_or_terminate(&cand.d, &lhs, &v_up2_qt2),
                    CfProbe::Excluded
                ) {
                    continue;
                }
            }
            let bound = pell_bound(&cand.mu, order).expect("candidate is ample with non-square D");
            let val = bound.eval(t);
            match val.cmp(&pruner.best) {
                Ordering::Less => {
                    pruner.update(val);
                    witnesses = vec![bound];
                }
                Ordering::Equal => witnesses.push(bound),
                Ordering::Greater => {}
            }
        }
        b += 1;
    }
    witnesses.sort_by(|x, y| x.lambda.cmp(&y.lambda));
    Ok(Minimization { best: pruner.best, witnesses })
}

/// ε(L_t) for ample L_t with √(L_t²) irrational: the exact rational minimum
/// of the Pell bounds at t, with all minimizers recorded.
pub fn epsilon_irrational(t: &Rat, order: &OrderSpec) -> Result<SeshadriResult> {
    let seed = pell_bound(t, order)?;
    let min = minimize_at(t, order, seed)?;
    debug_assert_eq!(
        cmp_rat_sqrt(&min.best, &SqrtRat::new(order.ray_self_intersection(t))),
        Ordering::Less
    );
    Ok(SeshadriResult {
        value: EpsilonValue::Rational(min.best),
        kind: EpsilonKind::Submaximal,
        witnesses: min.witnesses,
    })
}

/// Certificate that the bound at t is strictly minimal there among all
/// usable candidates, hence the bound of an irreducible submaximal curve.
/// Exact decision of whether any usable candidate μ ≠ t reaches
/// π_μ(t) ≤ value. The i128 fast path covers the entire scan with two
/// multiplications and a float comparison per candidate; only candidates
/// inside a 10⁻⁹-relative deadband (or outside the i128 envelope) fall
/// back to exact arithmetic. Scale-invariance of all the tests lets the
/// scan skip gcd reduction entirely: a non-reduced (a, b) answers exactly
/// like its reduction, which was already scanned at a smaller b.
fn some_candidate_undercuts(
    t: &Rat,
    order: &OrderSpec,
    pruner: &Pruner,
    value: &Rat,
) -> Result<bool> {
    let qt2 = Rat::from_bigint(t.denom() * t.denom());
    let v_dn2_qt2 = &round_down(value).square() * &qt2;
    let v_up2_qt2 = &pruner.best_up2 * &qt2;
    // Scan to b_term, but never beyond the hard limit: scans that get that
    // far without finding an undercutting bound abort rather than run for
    // days. Rejections almost always resolve at tiny denominators.
    let exhausted = |resolved_to: u64| -> Result<bool> {
        if resolved_to < pruner.b_term {
            return Err(Error::Internal(format!(
                "certification at t = {t} needs denominators beyond {SCAN_LIMIT}"
            )));
        }
        Ok(false)
    };

    // i128 envelope: every intermediate product must fit comfortably.
    let fits = |x: &BigInt| i128::try_from(x).ok().filter(|v| v.abs() < 1 << 40);
    let fast = match (fits(t.denom()), fits(t.numer())) {
        (Some(qt), Some(pt)) => {
            let e = order.e() as i128;
            let bt = pruner.b_term as i128;
            // |a| ≤ (|p_t|/q_t + 3)·b; coordinates stay below ~2^63, so all
            // squared terms stay below 2^126.
            let coord_cap = bt
                .checked_mul(pt.abs() / qt + 4)
                .and_then(|c| c.checked_mul(qt.max(e)));
            match coord_cap {
                Some(c) if c < 1 << 62 => Some((qt, pt, e)),
                _ => None,
            }
        }
        _ => None,
    };

    if let Some((qt, pt, e)) = fast {
        let half_one_minus_e = (1 - e) / 2;
        let v_up2_f = v_up2_qt2.to_f64();
        let v_dn2_f = v_dn2_qt2.to_f64();
        let lt2_qt2_f = pruner.lt2.to_f64() * (qt as f64) * (qt as f64);
        let qt_f = qt as f64;
        let c_det = match order.case() {
            RingCase::Sqrt => 4.0 * e as f64,
            RingCase::Half => e as f64,
        };
        // |Δ| beyond the 11-window can never be submaximal at t.
        let w_window = qt_f * (11.0 / e as f64).sqrt() * (1.0 + 1e-9) + 1.0;
        let scan_to = pruner.b_term.min(SCAN_LIMIT);
        let candidate = |b: i128, delta: i128| -> Option<Result<bool>> {
            let a = (b * pt + delta) / qt;
            debug_assert_eq!(a * qt - b * pt, delta);
            // Exact window test: e·Δ² < 11·q_t².
            if e * delta * delta >= 11 * qt * qt {
                return None;
            }
            let (ample, d) = match order.case() {
                RingCase::Sqrt => (e * a * a < b * b, 2 * b * b - 2 * e * a * a),
                RingCase::Half => {
                    let form = 4 * b * b + 4 * a * b + (1 - e) * a * a;
                    (b > 0 && form > 0, 2 * b * b + 2 * a * b + half_one_minus_e * a * a)
                }
            };
            if !ample {
                return None;
            }
            debug_assert!(d > 0);
            let m_dot = match order.case() {
                RingCase::Sqrt => 2 * b * qt - 2 * e * a * pt,
                RingCase::Half => 2 * b * qt + b * pt + a * qt + half_one_minus_e * a * pt,
            };
            let lhs_f = (m_dot as f64) * (m_dot as f64);
            let d_f = d as f64;
            // Certainly above: (M·L_t)² ≥ v_up²·q_t²·(D+1). The float
            // deadband of 10⁻⁹ dwarfs the conversion error (< 10⁻¹⁵).
            if lhs_f > v_up2_f * (d_f + 1.0) * (1.0 + 1e-9) {
                return None;
            }
            let du = d as u128;
            let r = isqrt_u128(du);
            if r * r == du {
                return None; // unusable: square self-intersection
            }
            // Certainly below: (M·L_t)² ≤ v_dn²·q_t²·D.
            if lhs_f < v_dn2_f * d_f * (1.0 - 1e-9) {
                return Some(Ok(true));
            }
            let cand = NearbyCandidate {
                mu: Rat::new(BigInt::from(a), BigInt::from(b)),
                d: BigInt::from(d),
                m_dot_lt_num: BigInt::from(m_dot),
            };
            match quick_compare(&cand, &v_dn2_qt2, &v_up2_qt2) {
                QuickCmp::Above => return None,
                QuickCmp::Below => return Some(Ok(true)),
                QuickCmp::Solved | QuickCmp::Unknown => {}
            }
            let other =
                pell_bound(&cand.mu, order).expect("candidate is ample with non-square D");
            if other.eval(t) <= *value {
                return Some(Ok(true));
            }
            None
        };
        for b in 1..=(scan_to as i128) {
            // Windowed candidates at denominator b have D ≥ b²L_t² − 14b,
            // so the sharp test c_det·Δ² < q_t²·v_up² − D·(q_t²L_t² − q_t²v_up²)
            // caps |Δ| (everything in q_t-scaled units); most denominators
            // allow no candidate at all. Floats decide with an error pad
            // that errs towards inspecting more candidates.
            let b_f = b as f64;
            let d_min = (b_f * b_f * lt2_qt2_f / (qt_f * qt_f) - 14.0 * b_f).max(0.0);
            let relax = v_up2_f - d_min * (lt2_qt2_f - v_up2_f);
            let err_pad = 1e-11 * (v_up2_f + d_min * lt2_qt2_f);
            if relax + err_pad <= 0.0 {
                continue;
            }
            let w_allow = ((relax + err_pad).max(0.0) / c_det).sqrt() + 1.0;
            let w_allow = w_allow.min(w_window);
            // Δ ranges over −r, −r−q_t, … and (q_t − r), (2q_t − r), …
            let r0 = (b * pt).rem_euclid(qt);
            let mut delta = -r0;
            while (delta as f64) >= -w_allow {
                if delta != 0 {
                    if let Some(outcome) = candidate(b, delta) {
                        return outcome;
                    }
                }
                delta -= qt;
            }
            let mut delta = qt - r0;
            while (delta as f64) <= w_allow {
                if let Some(outcome) = candidate(b, delta) {
                    return outcome;
                }
                delta += qt;
            }
        }
        return exhausted(scan_to);
    }

    // Generic path, exact arithmetic throughout.
    let scan_to = pruner.b_term.min(SCAN_LIMIT);
    let mut b = 1u64;
    while b <= scan_to {
        for cand in candidates_at_denominator(t, b, order) {
            if cand.mu == *t || is_square(&cand.d) {
                continue;
            }
            match quick_compare(&cand, &v_dn2_qt2, &v_up2_qt2) {
                QuickCmp::Above => continue,
                QuickCmp::Below => return Ok(true),
                QuickCmp::Solved | QuickCmp::Unknown => {}
            }
            let other = pell_bound(&cand.mu, order).expect("candidate is ample with non-square D");
            if other.eval(t) <= *value {
                return Ok(true);
            }
        }
        b += 1;
    }
    exhausted(scan_to)
}

pub fn certify_curve(t: &Rat, order: &OrderSpec) -> Result<Option<CurveCertificate>> {
    let base = pell_bound(t, order)?;
    let value = base.eval(t);
    let lt2 = order.ray_self_intersection(t);
    let pruner = Pruner::new(t, &lt2, value.clone());
    if some_candidate_undercuts(t, order, &pruner, &value)? {
        return Ok(None);
    }
    let q = base.q.clone();
    let p = t.numer().clone();
    let (l, k) = (base.pell.x.clone(), base.pell.y.clone());
    let options = [
        CurveClassOption {
            class: BundleClass::from_bigints(&k * &q, &k * &p),
            multiplicity: l.clone(),
        },
        CurveClassOption {
            class: BundleClass::from_bigints(BigInt::from(2) * &k * &q, BigInt::from(2) * &k * &p),
            multiplicity: BigInt::from(2) * &l,
        },
    ];
    Ok(Some(CurveCertificate {
        lambda: t.clone(),
        pell: base.pell.clone(),
        bound: base,
        curve_class_options: options,
    }))
}

/// All certified curves with denominator ≤ qmax whose submaximality
/// interval contains t, sorted by base point.
pub fn submax_curves_at(t: &Rat, order: &OrderSpec, qmax: u64) -> Result<Vec<CurveCertificate>> {
    if !order.is_ample_ray(t) {
        return Err(Error::NotAmple);
    }
    let mut found = Vec::new();
    for b in 1..=qmax {
        for cand in candidates_at_denominator(t, b, order) {
            if is_square(&cand.d) {
                continue;
            }
            let bound = pell_bound(&cand.mu, order).expect("candidate is ample with non-square D");
            if !bound.submax_interval(order).contains_rat(t) {
                continue;
            }
            if let Some(cert) = certify_curve(&cand.mu, order)? {
                found.push(cert);
            }
        }
    }
    found.sort_by(|x, y| x.lambda.cmp(&y.lambda));
    Ok(found)
}

/// Rational lower bounds for the two roots of A·s² + B·s + C = 0 (A > 0),
/// together with rational enclosures: ((lo⁻, lo⁺), (hi⁻, hi⁺)).
fn quadratic_root_brackets(a: &Rat, b: &Rat, c: &Rat, bits: u32) -> ((Rat, Rat), (Rat, Rat)) {
    let disc = &b.square() - &(&(&Rat::from_int(4) * a) * c);
    assert!(disc.is_positive(), "flanking cap must cut the sqrt curve twice");
    // √disc = √(p/q) bracketed by isqrt(p·q·4^bits)/(q·2^bits)
    let scale = BigInt::from(1) << (2 * bits);
    let num = isqrt(&(disc.numer() * disc.denom() * &scale));
    let den = disc.denom() * (BigInt::from(1) << bits);
    let sqrt_lo = Rat::new(num.clone(), den.clone());
    let sqrt_hi = Rat::new(num + 1, den);
    let two_a = &Rat::from_int(2) * a;
    let lo_lo = &(&(-b) - &sqrt_hi) / &two_a;
    let lo_hi = &(&(-b) - &sqrt_lo) / &two_a;
    let hi_lo = &(&(-b) + &sqrt_lo) / &two_a;
    let hi_hi = &(&(-b) + &sqrt_hi) / &two_a;
    ((lo_lo, lo_hi), (hi_lo, hi_hi))
}

/// Coefficients (A, B, C) of r(s)² − L_s² as a quadratic in s, for the line
/// r(s) = intercept + slope·s.
fn line_minus_sqrt_quadratic(intercept: &Rat, slope: &Rat, order: &OrderSpec) -> (Rat, Rat, Rat) {
    let e = order.e_rat();
    let two = Rat::from_int(2);
    match order.case() {
        // L_s² = 2 − 2e·s²
        RingCase::Sqrt => (
            &slope.square() + &(&two * &e),
            &two * &(intercept * slope),
            &intercept.square() - &two,
        ),
        // L_s² = 2 + 2s + ((1−e)/2)·s²
        RingCase::Half => (
            &slope.square() + &(&(&e - &Rat::one()) / &two),
            &(&two * &(intercept * slope)) - &two,
            &intercept.square() - &two,
        ),
    }
}

/// ε(L_t) for any ample L_t. Rational √(L_t²) routes through the flanking
/// construction; the result is MaxBound exactly when no Pell bound is
/// submaximal at t.
pub fn epsilon(t: &Rat, order: &OrderSpec) -> Result<SeshadriResult> {
    if !order.is_ample_ray(t) {
        return Err(Error::NotAmple);
    }
    match epsilon_irrational(t, order) {
        Err(Error::SquareSelfIntersection) => {}
        other => return other,
    }

    let lt2 = order.ray_self_intersection(t);
    let q = t.denom().clone();
    let l2_int = &(&Rat::from_bigint(&q * &q) * &lt2);
    debug_assert!(l2_int.is_integer());
    let sq = isqrt(l2_int.numer());
    let sqrt_lt2 = Rat::new(sq.clone(), q.clone()); // √(L_t²), exactly rational here

    // Cap: ε(L_t) ≤ (2q²L_t² − 1)/(2q²√(L_t²)).
    let cap = Rat::new(BigInt::from(2) * l2_int.numer() - 1, BigInt::from(2) * &q * &sq);

    // Flanking points t ∓ 1/(n·q²) with irrational √(L²); their Seshadri
    // curves bracket the slope of any submaximal curve at t.
    let q2 = &q * &q;
    let mut n = BigInt::one();
    let (left, right) = loop {
        let delta = Rat::new(BigInt::one(), &n * &q2);
        let mu1 = t - &delta;
        let mu2 = t + &delta;
        if order.is_ample_ray(&mu1) && order.is_ample_ray(&mu2) {
            match (epsilon_irrational(&mu1, order), epsilon_irrational(&mu2, order)) {
                (Ok(a), Ok(b)) => break (a, b),
                (Err(Error::SquareSelfIntersection), _) | (_, Err(Error::SquareSelfIntersection)) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        n += 1;
    };
    let slope_left = left
        .witnesses
        .iter()
        .map(|w| w.slope().clone())
        .max()
        .expect("flank minimizers exist");
    let slope_right = right
        .witnesses
        .iter()
        .map(|w| w.slope().clone())
        .min()
        .expect("flank minimizers exist");
    if slope_left < slope_right {
        return Err(Error::Internal(format!(
            "flank slopes out of order at t = {t}: {slope_left} < {slope_right}"
        )));
    }

    // Any submaximal curve at t is submaximal on I = {max(r₁, r₂) < √(L_s²)}
    // where r_i goes through (t, cap) with the flanking slopes. Work with a
    // conservative rational window ⊇ I and a rational 0 < s_lb ≤ |I|.
    let lines = [
        (&cap - &(&slope_right * t), slope_right.clone()),
        (&cap - &(&slope_left * t), slope_left.clone()),
    ];
    let mut bits = 16u32;
    let (window_lo, window_hi, s_lb) = loop {
        let mut lo_brackets = Vec::new();
        let mut hi_brackets = Vec::new();
        for (intercept, slope) in &lines {
            let (a, b, c) = line_minus_sqrt_quadratic(intercept, slope, order);
            let (lo, hi) = quadratic_root_brackets(&a, &b, &c, bits);
            lo_brackets.push(lo);
            hi_brackets.push(hi);
        }
        // |I| ≥ min(hi⁻) − max(lo⁺); positive once the brackets are sharp.
        let hi_min = hi_brackets.iter().map(|p| p.0.clone()).min().unwrap();
        let lo_max = lo_brackets.iter().map(|p| p.1.clone()).max().unwrap();
        let s_lb = &hi_min - &lo_max;
        if s_lb.is_positive() {
            let window_lo = lo_brackets.into_iter().map(|p| p.0).min().unwrap();
            let window_hi = hi_brackets.into_iter().map(|p| p.1).max().unwrap();
            break (window_lo, window_hi, s_lb);
        }
        bits *= 2;
        if bits > 1 << 20 {
            return Err(Error::Internal(format!("cap interval refinement diverged at t = {t}")));
        }
    };

    let qb = qbound_from_length(&Surd::from_rat(s_lb, order.e()), order)?;
    let qb = u64::try_from(&qb)
        .map_err(|_| Error::Internal(format!("denominator bound {qb} out of range at t = {t}")))?;

    // Minimize every usable Pell bound that can cover I, at t. Values at
    // or above the (rational) general upper bound never matter: either some
    // bound dips below it, or the bound itself is the Seshadri constant.
    let mut pruner: Option<Pruner> = None;
    let mut witnesses: Vec<PellBound> = Vec::new();
    for b in 1..=qb {
        let b_rat = Rat::from_int(b as i64);
        let a_lo = (&b_rat * &window_lo).floor_int() - BigInt::from(3);
        let a_hi = (&b_rat * &window_hi).ceil_int() + BigInt::from(3);
        let b_int = BigInt::from(b);
        let mut a = a_lo;
        while a <= a_hi {
            let numer = a.clone();
            a += 1;
            let Some(cand) = make_candidate(numer, &b_int, t, order) else {
                continue;
            };
            if is_square(&cand.d) {
                continue;
            }
            if let Some(p) = &pruner {
                if p.excluded(&cand, &Rat::one()) {
                    continue;
                }
                let lhs = Rat::from_bigint(&cand.m_dot_lt_num * &cand.m_dot_lt_num);
                let v_up2_qt2 = &p.best_up2 * &p.qt2;
                if matches!(
                    cf_exclude_or_terminate(&cand.d, &lhs, &v_up2_qt2),
                    CfProbe::Excluded
                ) {
                    continue;
                }
            }
            let bound = pell_bound(&cand.mu, order).expect("candidate is ample with non-square D");
            let val = bound.eval(t);
            if val >= sqrt_lt2 {
                continue;
            }
            match &mut pruner {
                Some(p) if val > p.best => {}
                Some(p) if val == p.best => witnesses.push(bound),
                Some(p) => {
                    p.update(val);
                    witnesses = vec![bound];
                }
                None => {
                    pruner = Some(Pruner::new(t, &lt2, val));
                    witnesses = vec![bound];
                }
            }
        }
    }

    let best = pruner.map(|p| p.best);
    match best {
        Some(v) if v < sqrt_lt2 => {
            witnesses.sort_by(|x, y| x.lambda.cmp(&y.lambda));
            Ok(SeshadriResult {
                value: EpsilonValue::Rational(v),
                kind: EpsilonKind::Submaximal,
                witnesses,
            })
        }
        _ => Ok(SeshadriResult {
            value: EpsilonValue::SqrtRational(SqrtRat::new(lt2)),
            kind: EpsilonKind::MaxBound,
            witnesses: Vec::new(),
        }),
    }
}

/// ε of an arbitrary ample class, by homogeneity: ε(L) = a·ε(L_{b/a}).
pub fn epsilon_class(l: &BundleClass, order: &OrderSpec) -> Result<SeshadriResult> {
    if !order.is_ample(l) {
        return Err(Error::NotAmple);
    }
    let (scale, t) = normalize(l)?;
    let res = epsilon(&t, order)?;
    let value = match res.value {
        EpsilonValue::Rational(r) => EpsilonValue::Rational(&r * &scale),
        EpsilonValue::SqrtRational(s) => {
            EpsilonValue::SqrtRational(SqrtRat::new(s.radicand() * &scale.square()))
        }
    };
    Ok(SeshadriResult { value, ..res })
}
