//! The rectangular-billiard spectrum {α·m² + n² : m, n ≥ 1} in exact
//! fixed-point arithmetic, its minimal consecutive gaps, and per-N
//! trajectories.

use crate::error::{Error, Result};
use crate::numtheory::AlphaFixed;

/// Default cap on the number of enumerated spectrum entries.
pub const DEFAULT_SPECTRUM_CAP: usize = 1 << 25;

const FRAC_BITS: u32 = 64;
const ONE_FP: u128 = 1u128 << FRAC_BITS;

/// Fixed-point billiard aspect ratio α with 64 fractional bits and integer
/// part up to 2³². Sampled values are 1 + (odd dyadic), which keeps the
/// spectrum values exact and collisions detectable by integer equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BilliardAlpha {
    pub fp: u128,
}

impl BilliardAlpha {
    pub fn new(fp: u128) -> Result<Self> {
        if fp == 0 || fp >> (FRAC_BITS + 32) != 0 {
            return Err(Error::InvalidParameter(
                "billiard alpha must be positive with integer part < 2^32".into(),
            ));
        }
        Ok(BilliardAlpha { fp })
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() || x <= 0.0 || x >= 4294967296.0 {
            return Err(Error::InvalidParameter(format!(
                "billiard alpha out of range: {x}"
            )));
        }
        BilliardAlpha::new((x * ONE_FP as f64).round() as u128)
    }

    /// 1 + α for a unit-interval dyadic α: the default [1, 2] sampling band.
    pub fn one_plus(alpha: AlphaFixed) -> Self {
        BilliardAlpha {
            fp: ONE_FP + alpha.numerator as u128,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.fp as f64 / ONE_FP as f64
    }
}

pub fn lambda_fp_from_f64(x: f64) -> u128 {
    assert!(x >= 0.0);
    (x * ONE_FP as f64).round() as u128
}

pub fn fp_to_f64(v: u128) -> f64 {
    v as f64 / ONE_FP as f64
}

/// One eigenvalue α·m² + n², exact in fixed point, with its lattice label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub value: u128,
    pub m: u32,
    pub n: u32,
}

/// Sorted spectrum up to a cutoff. `collisions` lists indices i where
/// entries i and i+1 carry exactly equal values — surfaced, never merged.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub alpha: BilliardAlpha,
    pub entries: Vec<SpectrumEntry>,
    pub collisions: Vec<usize>,
}

impl Spectrum {
    pub fn has_collisions(&self) -> bool {
        !self.collisions.is_empty()
    }
}

/// Enumerates all α·m² + n² ≤ Λ (fixed-point cutoff), sorted ascending.
pub fn spectrum(alpha: BilliardAlpha, lambda_fp: u128) -> Result<Spectrum> {
    spectrum_with_cap(alpha, lambda_fp, DEFAULT_SPECTRUM_CAP)
}

pub fn spectrum_with_cap(
    alpha: BilliardAlpha,
    lambda_fp: u128,
    cap: usize,
) -> Result<Spectrum> {
    let mut entries = Vec::new();
    'outer: for m in 1u32.. {
        let m2 = m as u128 * m as u128;
        // The cheapest value in this m-stripe is alpha·m² + 1.
        match alpha.fp.checked_mul(m2).and_then(|b| b.checked_add(ONE_FP)) {
            Some(lowest) if lowest <= lambda_fp => {}
            _ => break,
        }
        let base = alpha.fp * m2;
        for n in 1u32.. {
            let value = match (n as u128 * n as u128)
                .checked_mul(ONE_FP)
                .and_then(|n2| base.checked_add(n2))
            {
                Some(v) if v <= lambda_fp => v,
                _ => continue 'outer,
            };
            if entries.len() >= cap {
                return Err(Error::Capacity {
                    what: "spectrum entries",
                    requested: cap as u64 + 1,
                    cap: cap as u64,
                });
            }
            entries.push(SpectrumEntry { value, m, n });
        }
    }
    entries.sort_unstable_by_key(|e| (e.value, e.m, e.n));
    let collisions = entries
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].value == w[1].value)
        .map(|(i, _)| i)
        .collect();
    Ok(Spectrum {
        alpha,
        entries,
        collisions,
    })
}

/// min{λ_{k+1} − λ_k : 1 ≤ k ≤ N}, exact. Errors if the spectrum is too
/// short or the first N+1 entries contain an exact collision.
pub fn min_gap_spectrum(s: &Spectrum, n: usize) -> Result<u128> {
    if n < 1 || s.entries.len() < n + 1 {
        return Err(Error::InsufficientEntries {
            have: s.entries.len(),
            need: n + 1,
        });
    }
    if s.collisions.iter().any(|&i| i < n) {
        return Err(Error::SpectrumCollision { within: n + 1 });
    }
    Ok((1..=n)
        .map(|k| s.entries[k].value - s.entries[k - 1].value)
        .min()
        .expect("n >= 1"))
}

/// δ_min(N) for N = 1..=n_max: running minimum of consecutive gaps.
/// `deltas[i]` holds the value at N = i + 1.
#[derive(Clone, Debug)]
pub struct BilliardTrajectory {
    pub alpha: BilliardAlpha,
    pub deltas: Vec<u128>,
}

impl BilliardTrajectory {
    pub fn n_max(&self) -> usize {
        self.deltas.len()
    }

    pub fn delta_at(&self, n: usize) -> u128 {
        assert!((1..=self.n_max()).contains(&n));
        self.deltas[n - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u128)> + '_ {
        self.deltas.iter().enumerate().map(|(i, &d)| (i + 1, d))
    }
}

/// Enumerates enough of the spectrum (by the lattice count Λ ≈ 4√α·k/π,
/// with margin and re-enumeration if short) and takes running gap minima.
pub fn billiard_trajectory(alpha: BilliardAlpha, n_max: usize) -> Result<BilliardTrajectory> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("billiard trajectory needs N_max >= 1".into()));
    }
    let af = alpha.to_f64();
    let mut lambda = 4.0 * af.sqrt() * (n_max as f64 + 2.0) / std::f64::consts::PI * 1.1 + 4.0 * af;
    let spec = loop {
        let s = spectrum(alpha, lambda_fp_from_f64(lambda))?;
        if s.entries.len() > n_max {
            break s;
        }
        lambda *= 1.5;
    };
    if spec.collisions.iter().any(|&i| i < n_max) {
        return Err(Error::SpectrumCollision { within: n_max + 1 });
    }
    let mut deltas = Vec::with_capacity(n_max);
    let mut running = u128::MAX;
    for k in 1..=n_max {
        running = running.min(spec.entries[k].value - spec.entries[k - 1].value);
        deltas.push(running);
    }
    Ok(BilliardTrajectory { alpha, deltas })
}

/// Expected lattice-point count πΛ/(4√α) below the cutoff.
pub fn weyl_expected_count(alpha: f64, lambda: f64) -> f64 {
    std::f64::consts::PI * lambda / (4.0 * alpha.sqrt())
}
