//! Overlap diagnostics for pairs of approximation sets, and the
//! Chung–Erdős lower bound for the measure of a union.
//!
//! The overlap record reports the quantities entering the sifted-overlap
//! estimate (D, the prime product P, the exact overlap measure, and the
//! bound's right-hand side). The estimate hides an unspecified absolute
//! constant, so nothing is asserted about the ratio — it is a diagnostic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{gcd_u64, primes_up_to, Dyadic64};

use super::intervals::{build_s, IntervalUnion};

#[derive(Clone, Copy, Debug)]
pub struct OverlapDiagnostics {
    /// D(z_m, z_n) = max(z_m·ψ_n, z_n·ψ_m)/gcd(z_m, z_n).
    pub d: f64,
    /// Π (1 + 1/p) over primes p | z_m·z_n/gcd² with D < p ≤ prime_bound;
    /// zero when D < 1.
    pub p: f64,
    /// λ(S_m ∩ S_n), exact measure converted to f64.
    pub lhs_measure: f64,
    /// √(ψ_m ψ_n)/prime_bound + P·λ(S_m)·λ(S_n).
    pub rhs_bound: f64,
    /// lhs/rhs; infinite if rhs is zero while lhs is not.
    pub ratio: f64,
}

pub fn overlap_diagnostics(
    z_m: u64,
    z_n: u64,
    psi_m: Dyadic64,
    psi_n: Dyadic64,
    prime_bound: u64,
) -> Result<OverlapDiagnostics> {
    if z_m == z_n {
        return Err(Error::InvalidParameter("overlap needs z_m != z_n".into()));
    }
    let g = gcd_u64(z_m, z_n);
    let d = (z_m as f64 * psi_n.to_f64()).max(z_n as f64 * psi_m.to_f64()) / g as f64;
    let p = if d < 1.0 {
        0.0
    } else {
        let w = (z_m / g) as u128 * (z_n / g) as u128;
        let mut prod = 1.0;
        for q in primes_up_to(prime_bound)? {
            if (q as f64) > d && w.is_multiple_of(q as u128) {
                prod *= 1.0 + 1.0 / q as f64;
            }
        }
        prod
    };
    let s_m = build_s(z_m, psi_m, false);
    let s_n = build_s(z_n, psi_n, false);
    let lhs_measure = s_m.intersect(&s_n).measure_f64();
    let rhs_bound = (psi_m.to_f64() * psi_n.to_f64()).sqrt() / prime_bound as f64
        + p * s_m.measure_f64() * s_n.measure_f64();
    let ratio = if rhs_bound > 0.0 {
        lhs_measure / rhs_bound
    } else if lhs_measure == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(OverlapDiagnostics {
        d,
        p,
        lhs_measure,
        rhs_bound,
        ratio,
    })
}

#[derive(Clone, Debug)]
pub struct ChungErdosReport {
    /// λ(∪ A_m), exact.
    pub lhs: BigRational,
    /// (Σ λ(A_m))² / Σ_{m,n} λ(A_m ∩ A_n), exact.
    pub rhs: BigRational,
    pub holds: bool,
}

/// Checks λ(∪ A_m) ≥ (Σλ)²/ΣΣλ(A_m ∩ A_n) with a 2⁻⁴⁰ slack on the right.
pub fn chung_erdos_check(unions: &[IntervalUnion]) -> Result<ChungErdosReport> {
    let measures: Vec<BigRational> = unions.iter().map(|u| u.measure()).collect();
    let total: BigRational = measures.iter().fold(BigRational::zero(), |a, m| a + m);
    if total.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    let lhs = IntervalUnion::union_of(unions.iter()).measure();
    let mut pair_sum = BigRational::zero();
    for (m, um) in unions.iter().enumerate() {
        pair_sum += &measures[m]; // diagonal term
        for un in unions.iter().skip(m + 1) {
            let overlap = um.intersect(un).measure();
            pair_sum += &overlap + &overlap;
        }
    }
    let rhs = &total * &total / pair_sum;
    let slack = BigRational::new(BigInt::one(), BigInt::one() << 40);
    let holds = lhs >= &rhs - &slack;
    Ok(ChungErdosReport { lhs, rhs, holds })
}
