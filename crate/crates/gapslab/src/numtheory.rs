//! Arithmetic primitives shared by every other module: prime and totient
//! sieves, exact torus distances for dyadic dilation factors, and the
//! Mertens product.

use crate::bits::Bitset;
use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

/// Default sieve capacity (number of table entries).
pub const DEFAULT_SIEVE_CAPACITY: u64 = 1 << 31;

/// A dilation factor α = `numerator` / 2⁶⁴ ∈ [0, 1).
///
/// With 64 fractional bits, ‖kα‖ is exact for every k < 2⁶⁴: the fractional
/// part of kα is just the low 64 bits of the integer product k·numerator.
/// Samplers force the numerator odd so that ‖kα‖ > 0 for all 1 ≤ k < 2⁶⁴.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlphaFixed {
    pub numerator: u64,
}

impl AlphaFixed {
    pub fn new(numerator: u64) -> Self {
        AlphaFixed { numerator }
    }

    /// Nearest dyadic with 64 fractional bits; clamps to [0, 1).
    pub fn from_f64(x: f64) -> Self {
        let clamped = x.clamp(0.0, 1.0 - f64::EPSILON);
        AlphaFixed {
            numerator: (clamped * 18446744073709551616.0).round() as u64,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / 18446744073709551616.0
    }

    pub fn is_odd(self) -> bool {
        self.numerator & 1 == 1
    }
}

/// An exact dyadic fraction `bits` / 2⁶⁴ ∈ [0, 1). Torus distances and
/// minimal gaps live here; comparisons are integer comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic64 {
    pub bits: u64,
}

impl Dyadic64 {
    pub const ZERO: Dyadic64 = Dyadic64 { bits: 0 };
    pub const HALF: Dyadic64 = Dyadic64 { bits: 1 << 63 };

    pub fn new(bits: u64) -> Self {
        Dyadic64 { bits }
    }

    pub fn from_f64(x: f64) -> Self {
        let clamped = x.clamp(0.0, 1.0 - f64::EPSILON);
        Dyadic64 {
            bits: (clamped * 18446744073709551616.0).round() as u64,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.bits as f64 / 18446744073709551616.0
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }
}

/// A point a·α mod 1 on the torus, stored as its 64 fractional bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorusPoint {
    pub bits: u64,
}

impl TorusPoint {
    /// a·α mod 1, exact: the low word of the product.
    pub fn dilate(a: u64, alpha: AlphaFixed) -> Self {
        TorusPoint {
            bits: a.wrapping_mul(alpha.numerator),
        }
    }
}

/// ‖kα‖, the distance from kα to the nearest integer, computed exactly.
/// Requires k ≥ 1; the result is in [0, 1/2].
pub fn torus_norm(k: u64, alpha: AlphaFixed) -> Dyadic64 {
    debug_assert!(k >= 1);
    let f = k.wrapping_mul(alpha.numerator);
    Dyadic64 {
        bits: f.min(f.wrapping_neg()),
    }
}

/// Primes ≤ x in ascending order (plain Eratosthenes over a bitset).
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    primes_up_to_with_cap(x, DEFAULT_SIEVE_CAPACITY)
}

pub fn primes_up_to_with_cap(x: u64, cap: u64) -> Result<Vec<u64>> {
    if x >= cap {
        return Err(Error::Capacity {
            what: "prime sieve",
            requested: x,
            cap,
        });
    }
    if x < 2 {
        return Ok(Vec::new());
    }
    let mut composite = Bitset::new(x + 1);
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d * d <= x {
        if !composite.get(d) {
            let mut m = d * d;
            while m <= x {
                composite.set(m);
                m += d;
            }
        }
        d += 1;
    }
    for p in 2..=x {
        if !composite.get(p) {
            primes.push(p);
        }
    }
    Ok(primes)
}

/// Table of Euler's totient φ(k) for 1 ≤ k ≤ x.
pub struct TotientTable {
    values: Vec<u64>,
}

impl TotientTable {
    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// φ(k); panics if k is 0 or beyond the sieve limit.
    pub fn phi(&self, k: u64) -> u64 {
        assert!(k >= 1 && k <= self.limit(), "totient index out of range");
        self.values[k as usize]
    }
}

pub fn totient_sieve(x: u64) -> Result<TotientTable> {
    totient_sieve_with_cap(x, DEFAULT_SIEVE_CAPACITY)
}

pub fn totient_sieve_with_cap(x: u64, cap: u64) -> Result<TotientTable> {
    if x >= cap {
        return Err(Error::Capacity {
            what: "totient sieve",
            requested: x,
            cap,
        });
    }
    let mut values: Vec<u64> = (0..=x).collect();
    for p in 2..=x {
        if values[p as usize] == p {
            // p is prime: apply the (1 - 1/p) factor to every multiple.
            let mut m = p;
            while m <= x {
                values[m as usize] -= values[m as usize] / p;
                m += p;
            }
        }
    }
    Ok(TotientTable { values })
}

/// Π_{p ≤ x} (1 − 1/p). By Mertens's third theorem this is ~ e^{−γ}/log x.
pub fn mertens_product(x: u64) -> Result<f64> {
    debug_assert!(x >= 2);
    let primes = primes_up_to(x)?;
    Ok(primes.iter().map(|&p| 1.0 - 1.0 / p as f64).product())
}

/// log x read as max{1, log x} (natural log). All envelope formulas apply
/// this clamp at every level so that iterated logs stay positive down to
/// the smallest N.
pub fn clog(x: f64) -> f64 {
    x.ln().max(1.0)
}

pub fn clog2(x: f64) -> f64 {
    clog(clog(x))
}

pub fn clog3(x: f64) -> f64 {
    clog(clog2(x))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
