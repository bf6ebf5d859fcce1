//! Finite unions of subintervals of [0,1] with exact rational endpoints
//! and exact Lebesgue measure.
//!
//! The centers a/k of the approximation sets are not dyadic, so endpoints
//! are kept as arbitrary-precision rationals; this is what makes identities
//! like λ(S_k^coprime) = 2ψ·φ(k)/k checkable with equality rather than
//! tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numtheory::{gcd_u64, Dyadic64};

/// Sorted, disjoint, nonempty open intervals within [0,1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalUnion {
    intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { intervals: Vec::new() }
    }

    /// Normalizes raw intervals: clips to [0,1], drops empty pieces, sorts,
    /// and merges overlapping or touching neighbors.
    pub fn from_raw(mut raw: Vec<(BigRational, BigRational)>) -> Self {
        let zero = BigRational::zero();
        let one = BigRational::one();
        raw.retain(|(lo, hi)| hi > &zero && lo < &one && lo < hi);
        let mut clipped: Vec<(BigRational, BigRational)> = raw
            .into_iter()
            .map(|(lo, hi)| (lo.max(zero.clone()), hi.min(one.clone())))
            .filter(|(lo, hi)| lo < hi)
            .collect();
        clipped.sort();
        let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(clipped.len());
        for (lo, hi) in clipped {
            match merged.last_mut() {
                Some((_, last_hi)) if lo <= *last_hi => {
                    if hi > *last_hi {
                        *last_hi = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        IntervalUnion { intervals: merged }
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Exact Lebesgue measure Σ(hi - lo).
    pub fn measure(&self) -> BigRational {
        self.intervals
            .iter()
            .fold(BigRational::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    pub fn measure_f64(&self) -> f64 {
        rational_to_f64(&self.measure())
    }

    /// Exact intersection by a sorted two-pointer sweep.
    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            let lo = a[i].0.clone().max(b[j].0.clone());
            let hi = a[i].1.clone().min(b[j].1.clone());
            if lo < hi {
                out.push((lo, hi));
            }
            if a[i].1 <= b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion { intervals: out }
    }

    /// Union of any family.
    pub fn union_of<'a>(unions: impl IntoIterator<Item = &'a IntervalUnion>) -> IntervalUnion {
        let raw: Vec<(BigRational, BigRational)> = unions
            .into_iter()
            .flat_map(|u| u.intervals.iter().cloned())
            .collect();
        IntervalUnion::from_raw(raw)
    }

    /// Membership (open intervals), by binary search on the left endpoints.
    pub fn contains(&self, x: &BigRational) -> bool {
        let idx = self.intervals.partition_point(|(lo, _)| lo < x);
        if idx == 0 {
            return false;
        }
        let (lo, hi) = &self.intervals[idx - 1];
        lo < x && x < hi
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Good to f64 precision for the magnitudes used here (measures in [0,1],
    // denominators up to ~2^80).
    let numer = r.numer();
    let denom = r.denom();
    let scale = 1u128 << 80;
    let scaled = (numer * BigInt::from(scale)) / denom;
    let approx: f64 = match scaled.abs().try_into() {
        Ok(v) => {
            let v: u128 = v;
            v as f64 / scale as f64
        }
        Err(_) => {
            // Falls back for magnitudes beyond 2^48 or so; not hit by the
            // measure paths but keeps the helper total.
            let s = scaled.to_string();
            s.parse::<f64>().unwrap_or(f64::INFINITY) / scale as f64
        }
    };
    if r.is_negative() {
        -approx
    } else {
        approx
    }
}

/// Converts an exact dyadic to the rational bits/2^64.
pub fn dyadic_to_rational(d: Dyadic64) -> BigRational {
    BigRational::new(BigInt::from(d.bits), BigInt::one() << 64)
}

/// The approximation set S_k: the union over admissible numerators
/// 0 ≤ a ≤ k of (a/k - ψ/k, a/k + ψ/k), clipped to [0,1]. With
/// `coprime_only` the union ranges only over a with gcd(a, k) = 1.
pub fn build_s(k: u64, psi: Dyadic64, coprime_only: bool) -> IntervalUnion {
    assert!(k >= 1, "build_s needs k >= 1");
    assert!(psi.bits < 1 << 63, "psi must lie in [0, 1/2)");
    let den: BigInt = BigInt::from(k) << 64;
    let psi_num = BigInt::from(psi.bits);
    let mut raw = Vec::new();
    for a in 0..=k {
        if coprime_only && gcd_u64(a, k) != 1 {
            continue;
        }
        let center: BigInt = BigInt::from(a) << 64;
        let lo = BigRational::new(&center - &psi_num, den.clone());
        let hi = BigRational::new(&center + &psi_num, den.clone());
        raw.push((lo, hi));
    }
    IntervalUnion::from_raw(raw)
}
