//! The isometry group preserving the Seshadri function, and the fundamental
//! interval that determines the function on the whole ample cone.
//!
//! For Z[√e] the group is generated by φ₀ = [[α₀, eβ₀], [β₀, α₀]] with
//! (α₀, β₀) the fundamental solution of x² − ey² = 1, together with the
//! reflection τ = diag(1, −1). For Z[½+½√e] the generator comes from the
//! fundamental solution of x² − ey² = 4 via (α₀, β₀) = ((x₀−y₀)/2, y₀), as
//! ψ₀ = [[α₀, ((e−1)/4)β₀], [β₀, α₀+β₀]], with the involution [[1, 1], [0, −1]].
//! Every principal polarization is gen^k applied to L₀, and the interval
//! [0, (α₀−1)/(eβ₀)] resp. [0, β₀/(α₀+1)] is a fundamental domain for the
//! induced action on the nef cross-section.

use crate::error::{Error, Result};
use crate::lattice::{normalize, BundleClass, OrderSpec, RingCase};
use crate::pell::{pell1, pell4};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

/// Integer 2×2 matrix acting on (L₀, L∞)-coordinates, preserving the
/// intersection form and the ample cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryMatrix {
    pub m: [[BigInt; 2]; 2],
}

impl IsometryMatrix {
    pub fn new(m: [[BigInt; 2]; 2]) -> IsometryMatrix {
        IsometryMatrix { m }
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> IsometryMatrix {
        IsometryMatrix::new(m.map(|row| row.map(BigInt::from)))
    }

    pub fn identity() -> IsometryMatrix {
        IsometryMatrix::from_ints([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn mul(&self, other: &IsometryMatrix) -> IsometryMatrix {
        let a = &self.m;
        let b = &other.m;
        IsometryMatrix::new([
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ])
    }

    /// Exact inverse; the determinant is ±1 for isometries.
    pub fn inverse(&self) -> IsometryMatrix {
        let det = self.det();
        assert!(
            det == BigInt::one() || det == -BigInt::one(),
            "isometry determinant must be ±1"
        );
        let adj = IsometryMatrix::new([
            [self.m[1][1].clone(), -&self.m[0][1]],
            [-&self.m[1][0], self.m[0][0].clone()],
        ]);
        if det == BigInt::one() {
            adj
        } else {
            IsometryMatrix::new(adj.m.map(|row| row.map(|x| -x)))
        }
    }

    pub fn apply(&self, l: &BundleClass) -> BundleClass {
        let a = &Rat::from_bigint(self.m[0][0].clone()) * &l.a
            + &Rat::from_bigint(self.m[0][1].clone()) * &l.b;
        let b = &Rat::from_bigint(self.m[1][0].clone()) * &l.a
            + &Rat::from_bigint(self.m[1][1].clone()) * &l.b;
        BundleClass::new(a, b)
    }

    pub fn pow(&self, k: i64) -> IsometryMatrix {
        let base = if k >= 0 { self.clone() } else { self.inverse() };
        let mut out = IsometryMatrix::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }
}

impl fmt::Display for IsometryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Serialize for IsometryMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .m
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(serializer)
    }
}

/// Apply an isometry to a class.
pub fn apply_isometry(m: &IsometryMatrix, l: &BundleClass) -> BundleClass {
    m.apply(l)
}

/// The generator pair (gen, involution) of the invariance group.
pub fn generators(order: &OrderSpec) -> Result<(IsometryMatrix, IsometryMatrix)> {
    let e = BigInt::from(order.e());
    match order.case() {
        RingCase::Sqrt => {
            let s = pell1(&e)?;
            let (a0, b0) = (s.x, s.y);
            let gen = IsometryMatrix::new([[a0.clone(), &e * &b0], [b0, a0]]);
            let invol = IsometryMatrix::from_ints([[1, 0], [0, -1]]);
            Ok((gen, invol))
        }
        RingCase::Half => {
            let s = pell4(&e)?;
            let (x0, y0) = (s.x, s.y);
            assert!(x0 > y0 && y0 > BigInt::zero(), "minimal x² − ey² = 4 solution must have x₀ > y₀ > 0");
            let a0: BigInt = (&x0 - &y0) / 2;
            let b0 = y0;
            let quarter: BigInt = (&e - 1) / 4;
            let gen = IsometryMatrix::new([
                [a0.clone(), &quarter * &b0],
                [b0.clone(), &a0 + &b0],
            ]);
            let invol = IsometryMatrix::from_ints([[1, 1], [0, -1]]);
            Ok((gen, invol))
        }
    }
}

/// The principal polarizations L_k = gen^k·L₀ for k in [kmin, kmax]; every
/// entry has self-intersection 2.
pub fn principal_polarizations(
    order: &OrderSpec,
    kmin: i64,
    kmax: i64,
) -> Result<Vec<BundleClass>> {
    if kmin > kmax {
        return Err(Error::BadInput(format!("empty range {kmin}..{kmax}")));
    }
    let (gen, _) = generators(order)?;
    let l0 = BundleClass::from_ints(1, 0);
    let mut out = Vec::new();
    let mut cur = gen.pow(kmin).apply(&l0);
    for k in kmin..=kmax {
        out.push(cur.clone());
        if k < kmax {
            cur = gen.apply(&cur);
        }
    }
    Ok(out)
}

/// The closed interval [0, hi] of the nef cross-section whose orbit under
/// the group covers the whole ample interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalInterval {
    pub lo: Rat,
    pub hi: Rat,
}

pub fn fundamental_interval(order: &OrderSpec) -> Result<FundamentalInterval> {
    let (gen, _) = generators(order)?;
    let hi = match order.case() {
        // (α₀ − 1)/(e·β₀)
        RingCase::Sqrt => Rat::new(
            gen.m[0][0].clone() - 1,
            BigInt::from(order.e()) * &gen.m[1][0],
        ),
        // β₀/(α₀ + 1)
        RingCase::Half => Rat::new(gen.m[1][0].clone(), gen.m[0][0].clone() + 1),
    };
    Ok(FundamentalInterval { lo: Rat::zero(), hi })
}

/// One application step of a group generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenStep {
    Gen,
    GenInv,
    Invol,
}

impl GenStep {
    fn inverse(self) -> GenStep {
        match self {
            GenStep::Gen => GenStep::GenInv,
            GenStep::GenInv => GenStep::Gen,
            // Both involutions are their own inverses.
            GenStep::Invol => GenStep::Invol,
        }
    }
}

/// Apply a word of generator steps, first step first.
pub fn apply_word(word: &[GenStep], l: &BundleClass, order: &OrderSpec) -> Result<BundleClass> {
    let (gen, invol) = generators(order)?;
    let gen_inv = gen.inverse();
    let mut cur = l.clone();
    for step in word {
        cur = match step {
            GenStep::Gen => gen.apply(&cur),
            GenStep::GenInv => gen_inv.apply(&cur),
            GenStep::Invol => invol.apply(&cur),
        };
    }
    Ok(cur)
}

/// Fold t into the fundamental interval. Returns (t', word) where applying
/// the word to L_{t'} lands on the ray of L_t.
pub fn reduce_to_fundamental(t: &Rat, order: &OrderSpec) -> Result<(Rat, Vec<GenStep>)> {
    if !order.is_ample_ray(t) {
        return Err(Error::NotAmple);
    }
    let (gen, invol) = generators(order)?;
    let gen_inv = gen.inverse();
    let fund = fundamental_interval(order)?;
    let mut cur = t.clone();
    let mut applied: Vec<GenStep> = Vec::new();
    loop {
        if !cur.is_negative() && cur <= fund.hi {
            break;
        }
        let step = if cur.is_negative() {
            GenStep::Invol
        } else {
            GenStep::GenInv
        };
        let m = match step {
            GenStep::Invol => &invol,
            _ => &gen_inv,
        };
        let image = m.apply(&BundleClass::ray(&cur));
        let (_, next) = normalize(&image)?;
        cur = next;
        applied.push(step);
    }
    let word: Vec<GenStep> = applied.iter().rev().map(|s| s.inverse()).collect();
    Ok((cur, word))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sqrt2() -> OrderSpec {
        OrderSpec::sqrt_order(2).unwrap()
    }

    fn half5() -> OrderSpec {
        OrderSpec::half_order(5).unwrap()
    }

    fn half33() -> OrderSpec {
        OrderSpec::half_order(33).unwrap()
    }

    #[test]
    fn generator_examples() {
        let (gen, invol) = generators(&sqrt2()).unwrap();
        assert_eq!(gen, IsometryMatrix::from_ints([[3, 4], [2, 3]]));
        assert_eq!(invol, IsometryMatrix::from_ints([[1, 0], [0, -1]]));
        let (gen, invol) = generators(&half5()).unwrap();
        assert_eq!(gen, IsometryMatrix::from_ints([[1, 1], [1, 2]]));
        assert_eq!(invol, IsometryMatrix::from_ints([[1, 1], [0, -1]]));
        let (gen, _) = generators(&half33()).unwrap();
        assert_eq!(gen, IsometryMatrix::from_ints([[19, 64], [8, 27]]));
    }

    #[test]
    fn generators_are_isometries_preserving_the_ample_cone() {
        // Conditions: L₀, L∞ images keep their pairwise intersections, and
        // the top-left entry stays positive.
        for order in [sqrt2(), half5(), half33()] {
            let (gen, invol) = generators(&order).unwrap();
            let l0 = BundleClass::from_ints(1, 0);
            let linf = BundleClass::from_ints(0, 1);
            for m in [&gen, &invol] {
                let i0 = m.apply(&l0);
                let iinf = m.apply(&linf);
                assert_eq!(order.self_intersection(&i0), order.self_intersection(&l0));
                assert_eq!(
                    order.self_intersection(&iinf),
                    order.self_intersection(&linf)
                );
                assert_eq!(
                    order.intersection(&i0, &iinf),
                    order.intersection(&l0, &linf)
                );
                assert!(m.m[0][0].is_positive());
            }
        }
    }

    #[test]
    fn apply_examples() {
        let (gen, invol) = generators(&sqrt2()).unwrap();
        assert_eq!(
            gen.apply(&BundleClass::from_ints(1, 0)),
            BundleClass::from_ints(3, 2)
        );
        assert_eq!(
            invol.apply(&BundleClass::from_ints(5, 7)),
            BundleClass::from_ints(5, -7)
        );
        // (ψ₀ ∘ σ) fixes (α₀+1)L₀ + β₀L∞ for Case 2, e = 5.
        let (gen, invol) = generators(&half5()).unwrap();
        let l = BundleClass::from_ints(2, 1);
        assert_eq!(gen.apply(&invol.apply(&l)), l);
    }

    #[test]
    fn polarization_orbits() {
        let ps = principal_polarizations(&sqrt2(), 0, 2).unwrap();
        assert_eq!(
            ps,
            vec![
                BundleClass::from_ints(1, 0),
                BundleClass::from_ints(3, 2),
                BundleClass::from_ints(17, 12),
            ]
        );
        let ps = principal_polarizations(&half5(), 1, 1).unwrap();
        assert_eq!(ps, vec![BundleClass::from_ints(1, 1)]);
        // Self-intersection 2 and ample, in both directions of the orbit.
        for order in [sqrt2(), half5(), half33()] {
            for l in principal_polarizations(&order, -4, 4).unwrap() {
                assert_eq!(order.self_intersection(&l), Rat::from_int(2));
                assert!(order.is_ample(&l));
            }
        }
    }

    #[test]
    fn fundamental_interval_examples() {
        assert_eq!(
            fundamental_interval(&sqrt2()).unwrap().hi,
            Rat::from_pair(1, 2)
        );
        assert_eq!(
            fundamental_interval(&half5()).unwrap().hi,
            Rat::from_pair(1, 2)
        );
        assert_eq!(
            fundamental_interval(&half33()).unwrap().hi,
            Rat::from_pair(2, 5)
        );
    }

    #[test]
    fn reduction_examples() {
        let o = sqrt2();
        // Already fundamental: identity word.
        let (t, word) = reduce_to_fundamental(&Rat::from_pair(1, 3), &o).unwrap();
        assert_eq!(t, Rat::from_pair(1, 3));
        assert!(word.is_empty());
        // Mirror.
        let (t, word) = reduce_to_fundamental(&Rat::from_pair(-1, 5), &o).unwrap();
        assert_eq!(t, Rat::from_pair(1, 5));
        assert_eq!(word, vec![GenStep::Invol]);
        // 2/3 is the ray of L₁ = (3, 2); φ₀⁻¹ brings it to L₀.
        let (t, word) = reduce_to_fundamental(&Rat::from_pair(2, 3), &o).unwrap();
        assert_eq!(t, Rat::zero());
        assert_eq!(word, vec![GenStep::Gen]);
    }

    #[test]
    fn reduction_word_recovers_the_ray() {
        let mut rng = StdRng::seed_from_u64(44);
        for order in [sqrt2(), half5(), half33()] {
            let fund = fundamental_interval(&order).unwrap();
            let mut done = 0;
            while done < 120 {
                let t = Rat::from_pair(rng.gen_range(-300..300), rng.gen_range(1..120));
                if !order.is_ample_ray(&t) {
                    continue;
                }
                done += 1;
                let (t2, word) = reduce_to_fundamental(&t, &order).unwrap();
                assert!(!t2.is_negative() && t2 <= fund.hi, "t' = {t2} not fundamental");
                let back = apply_word(&word, &BundleClass::ray(&t2), &order).unwrap();
                let (_, ray) = normalize(&back).unwrap();
                assert_eq!(ray, t, "word failed for t = {t} in {order}");
                // Idempotence.
                let (t3, word2) = reduce_to_fundamental(&t2, &order).unwrap();
                assert_eq!(t3, t2);
                assert!(word2.is_empty());
            }
        }
    }
}
