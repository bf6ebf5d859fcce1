//! Minimal gaps of {a_n·α mod 1}: brute force over pairs, the sorted
//! circular-gap method, and the incremental trajectory that yields
//! δ_min(N) for every N in one pass.
//!
//! All values are exact 64-fractional-bit dyadics; every comparison is an
//! integer comparison. The pairwise minimum of torus distances equals the
//! minimal circular gap between adjacent sorted points, because the N arcs
//! sum to 1, so the smallest arc is at most 1/N ≤ 1/2.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::numtheory::{torus_norm, AlphaFixed, Dyadic64, TorusPoint};
use crate::sequences::IntegerSequence;

/// Default cap on N for the brute-force O(N²) method.
pub const DEFAULT_BRUTE_CAP: usize = 2000;

/// A minimal-gap value. `degenerate` is set when two dilated points
/// coincide exactly (possible only for adversarial dyadic α), in which
/// case `delta` is zero rather than an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinGap {
    pub delta: Dyadic64,
    pub degenerate: bool,
}

impl MinGap {
    fn from_bits(bits: u64) -> Self {
        MinGap {
            delta: Dyadic64::new(bits),
            degenerate: bits == 0,
        }
    }
}

/// δ_min over all pairs: min ‖(a_m - a_n)·α‖, m ≠ n.
pub fn min_gap_bruteforce(a: &[u64], alpha: AlphaFixed) -> Result<MinGap> {
    min_gap_bruteforce_with_cap(a, alpha, DEFAULT_BRUTE_CAP)
}

pub fn min_gap_bruteforce_with_cap(a: &[u64], alpha: AlphaFixed, cap: usize) -> Result<MinGap> {
    assert!(a.len() >= 2, "min gap needs N >= 2");
    if a.len() > cap {
        return Err(Error::Capacity {
            what: "brute-force min gap",
            requested: a.len() as u64,
            cap: cap as u64,
        });
    }
    let mut best = u64::MAX;
    for m in 1..a.len() {
        for j in 0..m {
            best = best.min(torus_norm(a[m] - a[j], alpha).bits);
        }
    }
    Ok(MinGap::from_bits(best))
}

/// δ_min via sorting {a_n·α mod 1} and taking the smallest circular
/// adjacent gap (wraparound included). Exactly equal to the brute force.
pub fn min_gap_sorted(a: &[u64], alpha: AlphaFixed) -> MinGap {
    assert!(a.len() >= 2, "min gap needs N >= 2");
    let mut points: Vec<u64> = a.iter().map(|&v| TorusPoint::dilate(v, alpha).bits).collect();
    points.sort_unstable();
    let mut best = points[0].wrapping_sub(points[points.len() - 1]); // wraparound arc
    for w in points.windows(2) {
        best = best.min(w[1] - w[0]);
    }
    MinGap::from_bits(best)
}

/// δ_min(N) for every 2 ≤ N ≤ n_max, with `deltas[i]` holding the value at
/// N = i + 2. Nonincreasing by construction.
#[derive(Clone, Debug)]
pub struct GapTrajectory {
    pub alpha: AlphaFixed,
    pub deltas: Vec<Dyadic64>,
    pub degenerate: bool,
}

impl GapTrajectory {
    pub fn n_max(&self) -> usize {
        self.deltas.len() + 1
    }

    pub fn delta_at(&self, n: usize) -> Dyadic64 {
        assert!((2..=self.n_max()).contains(&n));
        self.deltas[n - 2]
    }

    /// (N, δ_min(N)) pairs, N = 2..=n_max.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Dyadic64)> + '_ {
        self.deltas.iter().enumerate().map(|(i, &d)| (i + 2, d))
    }
}

/// Incremental trajectory on an explicit prefix. Maintains the ordered set
/// of points; inserting a point splits one arc into two, and the running
/// minimum only needs the two new arcs (the destroyed arc was their sum).
pub fn min_gap_trajectory_slice(a: &[u64], alpha: AlphaFixed) -> GapTrajectory {
    assert!(a.len() >= 2, "trajectory needs N_max >= 2");
    let mut points: BTreeSet<u64> = BTreeSet::new();
    points.insert(TorusPoint::dilate(a[0], alpha).bits);
    let mut deltas = Vec::with_capacity(a.len() - 1);
    let mut running = u64::MAX;
    let mut degenerate = false;
    for &term in &a[1..] {
        let p = TorusPoint::dilate(term, alpha).bits;
        if points.contains(&p) {
            degenerate = true;
            running = 0;
        } else {
            let pred = points
                .range(..p)
                .next_back()
                .or_else(|| points.iter().next_back())
                .copied()
                .unwrap();
            let succ = points
                .range(p..)
                .next()
                .or_else(|| points.iter().next())
                .copied()
                .unwrap();
            running = running.min(p.wrapping_sub(pred)).min(succ.wrapping_sub(p));
            points.insert(p);
        }
        deltas.push(Dyadic64::new(running));
    }
    GapTrajectory {
        alpha,
        deltas,
        degenerate,
    }
}

pub fn min_gap_trajectory(
    seq: &mut IntegerSequence,
    alpha: AlphaFixed,
    n_max: usize,
) -> Result<GapTrajectory> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("trajectory needs N_max >= 2".into()));
    }
    Ok(min_gap_trajectory_slice(seq.prefix(n_max)?, alpha))
}
