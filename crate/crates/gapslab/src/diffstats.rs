//! Exact difference-set statistics of a truncation A_N: representation
//! counts rep_N(u), the cardinalities C⁺_N and C_N, the additive energy
//! E_N, the first-occurrence map, the canonical z-enumeration, and GCD
//! sums.

use std::collections::HashMap;

use crate::bits::Bitset;
use crate::convolution;
use crate::error::{Error, Result};
use crate::numtheory::gcd_u64;
use crate::sequences::{IntegerSequence, SequenceSpec};

/// Default cap on N for the O(N²) direct method.
pub const DEFAULT_DIRECT_CAP: usize = 5000;
/// Default cap on a_N for the convolution method.
pub const DEFAULT_CONV_CAP: u64 = 1 << 27;
/// Default cap on the difference range for incremental bitset sweeps.
pub const DEFAULT_DIFFSET_BITS: u64 = 1 << 31;

/// Exact statistics of the difference set of one truncation.
///
/// `rep_counts` maps u to rep_N(u) for u ≥ 1, ascending, zeros omitted;
/// rep_N(0) = N is implicit and rep_N(-u) = rep_N(u). The full symmetric
/// cardinality C_N = 2·C⁺_N + 1 is what every envelope formula uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffStats {
    pub n: usize,
    pub rep_counts: Vec<(u64, u64)>,
    pub c_plus: u64,
    pub c_full: u64,
    pub energy: u128,
}

impl DiffStats {
    pub fn rep(&self, u: u64) -> u64 {
        match self.rep_counts.binary_search_by_key(&u, |&(k, _)| k) {
            Ok(i) => self.rep_counts[i].1,
            Err(_) => 0,
        }
    }

    /// Σ_{u ≥ 1} rep_N(u); always N(N-1)/2.
    pub fn sum_of_reps(&self) -> u128 {
        self.rep_counts.iter().map(|&(_, c)| c as u128).sum()
    }

    pub fn summary(&self) -> DiffSummary {
        DiffSummary {
            n: self.n,
            c_plus: self.c_plus,
            c_full: self.c_full,
            energy: self.energy,
        }
    }
}

/// The scalar part of [`DiffStats`], available even when the raw values of
/// the sequence are too large to materialize (geometric growth).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffSummary {
    pub n: usize,
    pub c_plus: u64,
    pub c_full: u64,
    pub energy: u128,
}

impl DiffSummary {
    /// N⁴/C_N ≤ E_N ≤ N²·C_N, checked in exact integer arithmetic.
    pub fn sandwich_holds(&self) -> bool {
        let n = self.n as u128;
        let c = self.c_full as u128;
        let n4 = n * n * n * n;
        n4 <= self.energy * c && self.energy <= n * n * c
    }

    /// E_N·C_N/N⁴ (≥ 1 by Cauchy–Schwarz).
    pub fn ratio_e_lower(&self) -> f64 {
        let n = self.n as f64;
        self.energy as f64 * self.c_full as f64 / (n * n * n * n)
    }

    /// E_N/(N²·C_N) (≤ 1 by Cauchy–Schwarz).
    pub fn ratio_e_upper(&self) -> f64 {
        let n = self.n as f64;
        self.energy as f64 / (n * n * self.c_full as f64)
    }
}

fn stats_from_dense(n: usize, dense: &[u32]) -> DiffStats {
    let mut rep_counts = Vec::new();
    let mut c_plus = 0u64;
    let mut energy: u128 = (n as u128) * (n as u128);
    for (u, &c) in dense.iter().enumerate().skip(1) {
        if c > 0 {
            rep_counts.push((u as u64, c as u64));
            c_plus += 1;
            energy += 2 * (c as u128) * (c as u128);
        }
    }
    DiffStats {
        n,
        rep_counts,
        c_plus,
        c_full: 2 * c_plus + 1,
        energy,
    }
}

fn stats_from_sparse(n: usize, rep_counts: Vec<(u64, u64)>) -> DiffStats {
    let c_plus = rep_counts.len() as u64;
    let energy: u128 = (n as u128) * (n as u128)
        + rep_counts
            .iter()
            .map(|&(_, c)| 2 * (c as u128) * (c as u128))
            .sum::<u128>();
    DiffStats {
        n,
        rep_counts,
        c_plus,
        c_full: 2 * c_plus + 1,
        energy,
    }
}

fn assert_strictly_increasing(a: &[u64]) {
    assert!(!a.is_empty(), "empty truncation");
    assert!(
        a.windows(2).all(|w| w[0] < w[1]),
        "truncation must be strictly increasing"
    );
}

/// Exact rep counts by the O(N²) double loop.
pub fn rep_counts_direct(a: &[u64]) -> Result<DiffStats> {
    rep_counts_direct_with_cap(a, DEFAULT_DIRECT_CAP)
}

pub fn rep_counts_direct_with_cap(a: &[u64], cap: usize) -> Result<DiffStats> {
    assert_strictly_increasing(a);
    let n = a.len();
    if n > cap {
        return Err(Error::Capacity {
            what: "direct rep counts",
            requested: n as u64,
            cap: cap as u64,
        });
    }
    let range = a[n - 1] - a[0];
    // Dense counting array when the difference range is affordable,
    // otherwise collect-and-sort.
    if range < DEFAULT_CONV_CAP {
        let mut dense = vec![0u32; range as usize + 1];
        for m in 1..n {
            for j in 0..m {
                dense[(a[m] - a[j]) as usize] += 1;
            }
        }
        Ok(stats_from_dense(n, &dense))
    } else {
        let mut diffs = Vec::with_capacity(n * (n - 1) / 2);
        for m in 1..n {
            for j in 0..m {
                diffs.push(a[m] - a[j]);
            }
        }
        diffs.sort_unstable();
        let mut rep_counts: Vec<(u64, u64)> = Vec::new();
        for d in diffs {
            match rep_counts.last_mut() {
                Some((u, c)) if *u == d => *c += 1,
                _ => rep_counts.push((d, 1)),
            }
        }
        Ok(stats_from_sparse(n, rep_counts))
    }
}

/// Exact rep counts from the autocorrelation of the 0/1 indicator of A_N,
/// computed by an exact integer transform. Output is identical to
/// [`rep_counts_direct`].
pub fn rep_counts_fast(a: &[u64]) -> Result<DiffStats> {
    rep_counts_fast_with_cap(a, DEFAULT_CONV_CAP)
}

pub fn rep_counts_fast_with_cap(a: &[u64], cap: u64) -> Result<DiffStats> {
    assert_strictly_increasing(a);
    let n = a.len();
    if *a.last().unwrap() > cap {
        return Err(Error::Capacity {
            what: "convolution rep counts",
            requested: *a.last().unwrap(),
            cap,
        });
    }
    debug_assert!((n as u64) < convolution::NTT_PRIME);
    let range = (a[n - 1] - a[0]) as usize;
    let mut indicator = vec![0u64; range + 1];
    for &v in a {
        indicator[(v - a[0]) as usize] = 1;
    }
    let corr = convolution::autocorrelation(&indicator);
    debug_assert_eq!(corr[0], n as u64);
    let rep_counts: Vec<(u64, u64)> = corr
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &c)| c > 0)
        .map(|(u, &c)| (u as u64, c))
        .collect();
    Ok(stats_from_sparse(n, rep_counts))
}

/// Difference-set summary for a sequence prefix, routed to whichever exact
/// method fits: the convolution for compact ranges, the dense direct count
/// for wide polynomial ranges, and the closed form for geometric growth
/// (where distinct pairs provably give distinct differences, so every
/// rep count is 1).
pub fn diff_summary(seq: &mut IntegerSequence, n: usize) -> Result<DiffSummary> {
    if n < 1 {
        return Err(Error::InvalidParameter("diff_summary needs N >= 1".into()));
    }
    if let SequenceSpec::Geometric { .. } = seq.spec() {
        // For ratio >= 2, comparing p-adic valuations at any prime p | ratio
        // shows a(r^m - r^n) determines (m, n); all positive differences are
        // distinct.
        let nn = n as u64;
        let c_plus = nn * (nn - 1) / 2;
        return Ok(DiffSummary {
            n,
            c_plus,
            c_full: 2 * c_plus + 1,
            energy: (n as u128) * (n as u128) + 2 * c_plus as u128,
        });
    }
    let a = seq.prefix(n)?.to_vec();
    let range = a[n - 1] - a[0];
    let stats = if range < (1 << 23) {
        rep_counts_fast(&a)?
    } else if range < DEFAULT_CONV_CAP {
        rep_counts_direct_with_cap(&a, n)?
    } else if n <= DEFAULT_DIRECT_CAP {
        rep_counts_direct(&a)?
    } else {
        return Err(Error::Capacity {
            what: "diff summary (range too wide for any exact method)",
            requested: range,
            cap: DEFAULT_CONV_CAP,
        });
    };
    Ok(stats.summary())
}

/// First-occurrence times: for each k in some (A_M - A_M)⁺ with M ≤ horizon,
/// the smallest such M. Keys absent from the map never occur within the
/// horizon.
pub struct FirstOccurrenceMap {
    map: HashMap<u64, u32>,
    horizon: u32,
}

impl FirstOccurrenceMap {
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// 𝒩(k), or None when k does not occur within the horizon.
    pub fn get(&self, k: u64) -> Option<u32> {
        self.map.get(&k).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }
}

/// Incremental construction: the term a_M contributes every difference
/// a_M - a_n (n < M) not seen before, with value M.
pub fn first_occurrence(seq: &mut IntegerSequence, n_max: u32) -> Result<FirstOccurrenceMap> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("first_occurrence needs N_max >= 2".into()));
    }
    let a = seq.prefix(n_max as usize)?;
    let mut map = HashMap::new();
    for m in 1..n_max as usize {
        for j in 0..m {
            map.entry(a[m] - a[j]).or_insert(m as u32 + 1);
        }
    }
    Ok(FirstOccurrenceMap { map, horizon: n_max })
}

/// Canonical enumeration of ∪(A_N - A_N)⁺: ordered by first-occurrence
/// time, ties broken by increasing value. Its length-C⁺_N prefix equals
/// (A_N - A_N)⁺ as a set for every N ≤ N_max.
pub fn z_enumeration(seq: &mut IntegerSequence, n_max: u32) -> Result<Vec<u64>> {
    let occ = first_occurrence(seq, n_max)?;
    let mut pairs: Vec<(u32, u64)> = occ.iter().map(|(k, v)| (v, k)).collect();
    pairs.sort_unstable();
    Ok(pairs.into_iter().map(|(_, k)| k).collect())
}

/// C⁺_N for every N = 1..=n_max, by an incremental bitset sweep over the
/// difference range (O(N²) time, one bit per possible difference).
pub fn c_plus_trajectory(seq: &mut IntegerSequence, n_max: usize) -> Result<Vec<u64>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("c_plus_trajectory needs N_max >= 1".into()));
    }
    if let SequenceSpec::Geometric { .. } = seq.spec() {
        return Ok((1..=n_max as u64).map(|n| n * (n - 1) / 2).collect());
    }
    let a = seq.prefix(n_max)?;
    let range = a[n_max - 1] - a[0];
    if range + 1 > DEFAULT_DIFFSET_BITS {
        return Err(Error::Capacity {
            what: "difference bitset",
            requested: range + 1,
            cap: DEFAULT_DIFFSET_BITS,
        });
    }
    let mut seen = Bitset::new(range + 1);
    let mut out = Vec::with_capacity(n_max);
    let mut c_plus = 0u64;
    out.push(0);
    for m in 1..n_max {
        for j in 0..m {
            if seen.set_new(a[m] - a[j]) {
                c_plus += 1;
            }
        }
        out.push(c_plus);
    }
    Ok(out)
}

/// Σ_{m,n} gcd(v_m, v_n)/√(v_m·v_n) over all ordered pairs, diagonal
/// included. Products are formed in 128 bits before the square root.
pub fn gcd_sum(values: &[u64]) -> f64 {
    assert!(!values.is_empty(), "gcd_sum needs a nonempty list");
    let mut sum = values.len() as f64; // diagonal terms are all 1
    for (i, &vm) in values.iter().enumerate() {
        for &vn in &values[i + 1..] {
            let g = gcd_u64(vm, vn);
            sum += 2.0 * g as f64 / ((vm as u128 * vn as u128) as f64).sqrt();
        }
    }
    sum
}
