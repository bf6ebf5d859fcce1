//! Exact integer autocorrelation via a number-theoretic transform.
//!
//! The modulus 3221225473 = 3·2^30 + 1 is prime with primitive root 5 and
//! supports power-of-two transforms up to length 2^30. Autocorrelation
//! counts are bounded by the sequence length N < 2^30 < p, so every count
//! is recovered exactly from a single modular transform — no CRT and no
//! rounding certification needed.

/// NTT modulus, prime, p - 1 = 3 · 2^30.
pub(crate) const NTT_PRIME: u64 = 3_221_225_473;
const PRIMITIVE_ROOT: u64 = 5;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % NTT_PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= NTT_PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// In-place iterative radix-2 transform. `len` must be a power of two
/// dividing 2^30. `inverse` applies the inverse transform including the
/// 1/len normalization.
fn ntt(values: &mut [u64], inverse: bool) {
    let n = values.len();
    assert!(n.is_power_of_two() && n <= 1 << 30);
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let mut w_len = pow_mod(PRIMITIVE_ROOT, (NTT_PRIME - 1) / len as u64);
        if inverse {
            w_len = pow_mod(w_len, NTT_PRIME - 2);
        }
        let mut i = 0;
        while i < n {
            let mut w = 1u64;
            for k in 0..len / 2 {
                let u = values[i + k];
                let v = mul_mod(values[i + k + len / 2], w);
                values[i + k] = if u + v >= NTT_PRIME { u + v - NTT_PRIME } else { u + v };
                values[i + k + len / 2] = if u >= v { u - v } else { u + NTT_PRIME - v };
                w = mul_mod(w, w_len);
            }
            i += len;
        }
        len <<= 1;
    }
    if inverse {
        let inv_n = pow_mod(n as u64, NTT_PRIME - 2);
        for v in values.iter_mut() {
            *v = mul_mod(*v, inv_n);
        }
    }
}

/// Exact autocorrelation of a 0/1 indicator: returns `corr` with
/// `corr[u] = #{i : ind[i] = ind[i+u] = 1}` for u in 0..ind.len().
/// Requires the number of ones to be < NTT_PRIME (always true here).
pub(crate) fn autocorrelation(indicator: &[u64]) -> Vec<u64> {
    let len = indicator.len();
    assert!(len >= 1);
    let size = (2 * len).next_power_of_two();
    let mut fwd = vec![0u64; size];
    fwd[..len].copy_from_slice(indicator);
    let mut rev = vec![0u64; size];
    for (i, &v) in indicator.iter().enumerate() {
        rev[len - 1 - i] = v;
    }
    ntt(&mut fwd, false);
    ntt(&mut rev, false);
    for (a, b) in fwd.iter_mut().zip(rev.iter()) {
        *a = mul_mod(*a, *b);
    }
    ntt(&mut fwd, true);
    // Product coefficient at index len-1+u is the correlation at lag u.
    (0..len).map(|u| fwd[len - 1 + u]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_is_ntt_friendly() {
        // g^((p-1)/q) != 1 for the prime factors q = 2, 3 of p - 1.
        assert_ne!(pow_mod(PRIMITIVE_ROOT, (NTT_PRIME - 1) / 2), 1);
        assert_ne!(pow_mod(PRIMITIVE_ROOT, (NTT_PRIME - 1) / 3), 1);
        assert_eq!(pow_mod(PRIMITIVE_ROOT, NTT_PRIME - 1), 1);
    }

    #[test]
    fn transform_roundtrip() {
        let original: Vec<u64> = (0..16).map(|i| (i * 37 + 5) % 101).collect();
        let mut v = original.clone();
        ntt(&mut v, false);
        ntt(&mut v, true);
        assert_eq!(v, original);
    }

    fn autocorr_naive(ind: &[u64]) -> Vec<u64> {
        (0..ind.len())
            .map(|u| (0..ind.len() - u).map(|i| ind[i] * ind[i + u]).sum())
            .collect()
    }

    #[test]
    fn autocorrelation_matches_naive() {
        let cases: Vec<Vec<u64>> = vec![
            vec![1],
            vec![1, 1, 1],
            vec![1, 0, 0, 1, 1, 0, 1],
            (0..100).map(|i| u64::from(i % 3 != 1)).collect(),
        ];
        for ind in cases {
            assert_eq!(autocorrelation(&ind), autocorr_naive(&ind));
        }
    }
}
