//! Deterministic 64-bit generator used for all seeded system construction.

/// splitmix64 stream.
///
/// `next_u64` advances the state by the golden-gamma constant and mixes it;
/// the same seed always yields the same stream on every platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `lo..=hi` by reducing `next_u64` modulo the width.
    ///
    /// The modulo mapping is biased by at most `width / 2^64` per value; for
    /// the single-digit widths used here that is far below anything
    /// observable, so the simpler mapping keeps the stream easy to reproduce
    /// in other languages.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        let width = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % width) as i64
    }
}
