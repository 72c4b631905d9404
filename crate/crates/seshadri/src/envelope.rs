//! The segment structure of the Seshadri function over an interval.
//!
//! A sweep enumerates every reduced λ = p/q with q ≤ qmax in the requested
//! range, certifies each Pell bound, and assembles the exact lower envelope
//! of the certified bounds. Envelope break-points between two linear bounds
//! are rational; end-points against the √(L_t²) curve are the surd borders
//! of the submaximality intervals. Subintervals covered by no certified
//! bound are reported as gaps — there the function equals √(L_t²) at this
//! resolution, which a sweep cannot distinguish from a finer curve.

use crate::bounds::PellBound;
use crate::epsilon::certify_curve;
use crate::error::{Error, Result};
use crate::farey;
use crate::lattice::OrderSpec;
use crate::rat::Rat;
use crate::surd::Surd;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;

/// A maximal interval on which a single certified bound is minimal, or a
/// gap at the working resolution.
#[derive(Clone, Debug)]
pub struct Segment {
    pub lo: Surd,
    pub hi: Surd,
    /// The certified bound reigning on the interval; `None` marks a gap.
    pub bound: Option<PellBound>,
    pub certified: bool,
}

impl Segment {
    pub fn is_gap(&self) -> bool {
        self.bound.is_none()
    }
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Segment", 4)?;
        s.serialize_field("lo", &self.lo)?;
        s.serialize_field("hi", &self.hi)?;
        s.serialize_field("bound", &self.bound)?;
        s.serialize_field("certified", &self.certified)?;
        s.end()
    }
}

/// CSV header matching [`segment_csv_row`].
pub const SEGMENT_CSV_HEADER: &str = "lo_a,lo_b,hi_a,hi_b,c0,c1,lambda,certified";

/// One CSV row per segment; bound columns stay empty for gaps.
pub fn segment_csv_row(seg: &Segment) -> String {
    let (c0, c1, lambda) = match &seg.bound {
        Some(b) => (b.c0.to_string(), b.c1.to_string(), b.lambda.to_string()),
        None => (String::new(), String::new(), String::new()),
    };
    format!(
        "{},{},{},{},{},{},{},{}",
        seg.lo.rational_part(),
        seg.lo.sqrt_coefficient(),
        seg.hi.rational_part(),
        seg.hi.sqrt_coefficient(),
        c0,
        c1,
        lambda,
        seg.certified
    )
}

/// Certify every λ = p/q in [lo, hi] with q ≤ qmax and return the exact
/// lower envelope of the certified bounds as a sorted segment list.
pub fn sample_function(lo: &Rat, hi: &Rat, qmax: u64, order: &OrderSpec) -> Result<Vec<Segment>> {
    if qmax < 1 || lo >= hi || !order.is_ample_ray(lo) || !order.is_ample_ray(hi) {
        return Err(Error::InvalidRange);
    }
    let e = order.e();
    let lo_s = Surd::from_rat(lo.clone(), e);
    let hi_s = Surd::from_rat(hi.clone(), e);

    // Closed interval: the rational endpoints take part when their
    // denominators are within resolution.
    let mut lambdas = Vec::new();
    if u64::try_from(lo.denom()).map_or(false, |q| q <= qmax) {
        lambdas.push(lo.clone());
    }
    lambdas.extend(farey::fractions_in_interval(&lo_s, &hi_s, qmax));
    if u64::try_from(hi.denom()).map_or(false, |q| q <= qmax) {
        lambdas.push(hi.clone());
    }

    let certified: Vec<PellBound> = lambdas
        .par_iter()
        .map(|l| match certify_curve(l, order) {
            // Points with rational √(L²) carry no bound; skip them.
            Err(Error::SquareSelfIntersection) => Ok(None),
            other => other,
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .map(|cert| cert.bound)
        .collect();

    // Restrict each bound to J_λ ∩ [lo, hi].
    struct Active {
        bound: PellBound,
        lo: Surd,
        hi: Surd,
    }
    let mut active = Vec::new();
    for bound in certified {
        let j = bound.submax_interval(order);
        let clip_lo = if j.lo.lt(&lo_s) { lo_s.clone() } else { j.lo };
        let clip_hi = if hi_s.lt(&j.hi) { hi_s.clone() } else { j.hi };
        if clip_lo.lt(&clip_hi) {
            active.push(Active { bound, lo: clip_lo, hi: clip_hi });
        }
    }

    // Event points: range ends, clipped interval ends, and crossings of
    // overlapping pairs (always rational).
    let mut events: Vec<Surd> = vec![lo_s.clone(), hi_s.clone()];
    for a in &active {
        events.push(a.lo.clone());
        events.push(a.hi.clone());
    }
    for i in 0..active.len() {
        for j in i + 1..active.len() {
            let (x, y) = (&active[i], &active[j]);
            if !(x.lo.lt(&y.hi) && y.lo.lt(&x.hi)) {
                continue;
            }
            if x.bound.c1 == y.bound.c1 {
                // Distinct certified bounds are never the same line.
                debug_assert_ne!(x.bound.c0, y.bound.c0);
                continue;
            }
            let cross = &(&y.bound.c0 - &x.bound.c0) / &(&x.bound.c1 - &y.bound.c1);
            let cross = Surd::from_rat(cross, e);
            if x.lo.lt(&cross) && cross.lt(&x.hi) && y.lo.lt(&cross) && cross.lt(&y.hi) {
                events.push(cross);
            }
        }
    }
    events.sort_by(|a, b| a.cmp_surd(b));
    events.dedup();

    // Between consecutive events the minimal active bound is constant;
    // sample at the midpoint and merge equal neighbors.
    let half = Rat::from_pair(1, 2);
    let mut segments: Vec<Segment> = Vec::new();
    for pair in events.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        if !x.lt(y) {
            continue;
        }
        let mid = (x + y).scale(&half);
        let mut reigning: Option<&Active> = None;
        let mut reigning_val: Option<Surd> = None;
        for cand in &active {
            if !(cand.lo.lt(&mid) && mid.lt(&cand.hi)) {
                continue;
            }
            let val = cand.bound.eval_surd(&mid);
            let better = match &reigning_val {
                None => true,
                Some(cur) => match val.cmp_surd(cur) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        return Err(Error::Internal(format!(
                            "two certified bounds tie strictly inside a piece near {mid}"
                        )))
                    }
                },
            };
            if better {
                reigning_val = Some(val);
                reigning = Some(cand);
            }
        }
        let (bound, certified) = match reigning {
            Some(a) => (Some(a.bound.clone()), true),
            None => (None, false),
        };
        let same_as_last = segments.last().map_or(false, |s| match (&s.bound, &bound) {
            (Some(x), Some(y)) => x.lambda == y.lambda,
            (None, None) => true,
            _ => false,
        });
        if same_as_last {
            segments.last_mut().unwrap().hi = y.clone();
        } else {
            segments.push(Segment { lo: x.clone(), hi: y.clone(), bound, certified });
        }
    }
    Ok(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_near_zero_has_the_constant_segment() {
        let o = OrderSpec::sqrt_order(2).unwrap();
        let segs = sample_function(&Rat::zero(), &Rat::from_pair(1, 2), 10, &o).unwrap();
        // [0, √2/6) carries the constant bound 4/3 from λ = 0.
        let first = &segs[0];
        assert!(first.certified);
        let b = first.bound.as_ref().unwrap();
        assert_eq!(b.lambda, Rat::zero());
        assert_eq!(b.c0, Rat::from_pair(4, 3));
        assert_eq!(first.hi, Surd::sqrt_multiple(Rat::from_pair(1, 6), 2));
        // Segments tile the range in order.
        for w in segs.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert!(w[0].lo.lt(&w[0].hi));
        }
    }

    #[test]
    fn no_adjacent_segments_for_single_curve_orders() {
        for order in [
            OrderSpec::sqrt_order(2).unwrap(),
            OrderSpec::half_order(5).unwrap(),
        ] {
            let segs = sample_function(&Rat::zero(), &Rat::from_pair(1, 2), 12, &order).unwrap();
            // Certified segments are separated by gaps: no two certified
            // segments share an endpoint.
            for w in segs.windows(2) {
                assert!(
                    w[0].is_gap() || w[1].is_gap(),
                    "adjacent certified segments in {order}"
                );
            }
            // Away from the range clips, certified endpoints are genuine
            // surds a − b√e (left) and a' + b'√e (right) with b, b' > 0.
            let range_lo = Surd::zero(order.e());
            let range_hi = Surd::from_rat(Rat::from_pair(1, 2), order.e());
            for s in segs.iter().filter(|s| s.certified) {
                assert!(s.lo == range_lo || s.lo.sqrt_coefficient().is_negative());
                assert!(s.hi == range_hi || s.hi.sqrt_coefficient().is_positive());
            }
        }
    }

    #[test]
    fn adjacent_pair_with_rational_breakpoint_for_e33() {
        let o = OrderSpec::half_order(33).unwrap();
        let segs = sample_function(&Rat::from_pair(1, 3), &Rat::from_pair(2, 5), 30, &o).unwrap();
        let mut found = None;
        for w in segs.windows(2) {
            if w[0].certified && w[1].certified && w[0].hi == w[1].lo {
                found = Some(w[0].hi.clone());
            }
        }
        let breakpoint = found.expect("two certified segments meet for e = 33");
        // The break-point is rational and close to 0.37.
        let r = breakpoint.as_rat().expect("break-point must be rational").clone();
        assert!(r > Rat::from_pair(36, 100) && r < Rat::from_pair(38, 100));
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let o = OrderSpec::sqrt_order(2).unwrap();
        let bad = sample_function(&Rat::from_pair(1, 2), &Rat::zero(), 10, &o);
        assert_eq!(bad.err(), Some(Error::InvalidRange));
        let bad = sample_function(&Rat::zero(), &Rat::from_int(3), 10, &o);
        assert_eq!(bad.err(), Some(Error::InvalidRange));
    }
}
