/// Flat bitset over `0..len`, one bit per index. Used by the sieves and the
/// difference/product marking sweeps, where `Vec<bool>` would be 8x larger.
#[derive(Clone)]
pub(crate) struct Bitset {
    words: Vec<u64>,
    len: u64,
}

impl Bitset {
    pub fn new(len: u64) -> Self {
        let words = vec![0u64; len.div_ceil(64) as usize];
        Bitset { words, len }
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    /// Sets bit `i` and reports whether it was previously clear.
    #[inline]
    pub fn set_new(&mut self, i: u64) -> bool {
        debug_assert!(i < self.len);
        let word = &mut self.words[(i >> 6) as usize];
        let mask = 1 << (i & 63);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}
