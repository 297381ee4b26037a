//! Counter-based random numbers.
//!
//! A stream is keyed by `(seed, stream_index)`. The key is
//! `mix64(seed + mix64(stream_index ^ STREAM_SALT))` and draw `i` of the
//! stream is `mix64(key + (i + 1) · GOLDEN)`, i.e. the `i`-th output of a
//! SplitMix64 generator started at `key`. `mix64` is the SplitMix64
//! finalizer (Stafford's "mix13"). Output depends only on
//! `(seed, stream_index, draw_index)`, never on thread scheduling or
//! platform entropy.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_SALT: u64 = 0xd1b5_4a32_d192_ed03;

/// 64-bit avalanche mixing function.
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    seed: u64,
    stream_index: u64,
    key: u64,
    counter: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let key = mix64(seed.wrapping_add(mix64(stream_index ^ STREAM_SALT)));
        RandomStream {
            seed,
            stream_index,
            key,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Number of draws consumed so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Raw 64-bit word at `draw_index`, independent of the cursor.
    pub fn word_at(&self, draw_index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(draw_index.wrapping_add(1).wrapping_mul(GOLDEN)),
        )
    }

    pub fn next_u64(&mut self) -> u64 {
        let w = self.word_at(self.counter);
        self.counter += 1;
        w
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn draw_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli trial with success probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.draw_uniform() < p
    }

    /// Index drawn from non-negative `weights` (need not be normalized).
    /// Returns the last index with positive weight if rounding leaves the
    /// cumulative sum short of the draw.
    pub fn choose_weighted(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let target = self.draw_uniform() * total;
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                last_positive = i;
            }
            acc += w;
            if target < acc {
                return i;
            }
        }
        last_positive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_sequence() {
        let mut a = RandomStream::new(42, 3);
        let mut b = RandomStream::new(42, 3);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let c = RandomStream::new(42, 3);
        assert_eq!(c.word_at(999), a.word_at(999));
    }

    #[test]
    fn frozen_words() {
        // SplitMix64 reference: seeded with 0, the first output is
        // 0xe220a8397b1dcdaf. Our stream key differs, so check mix64 itself.
        assert_eq!(mix64(GOLDEN), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn uniform_mean() {
        let mut s = RandomStream::new(1, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.draw_uniform()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn uniform_range() {
        let mut s = RandomStream::new(u64::MAX, u64::MAX);
        for _ in 0..10_000 {
            let u = s.draw_uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn adjacent_streams_uncorrelated() {
        let n = 100_000;
        let mut a = RandomStream::new(7, 0);
        let mut b = RandomStream::new(7, 1);
        let xs: Vec<f64> = (0..n).map(|_| a.draw_uniform()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.draw_uniform()).collect();
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx).powi(2);
            syy += (y - my).powi(2);
        }
        let r = sxy / (sxx * syy).sqrt();
        assert!(r.abs() < 0.01, "r = {r}");
    }

    #[test]
    fn choose_weighted_skips_zero_weights() {
        let mut s = RandomStream::new(5, 5);
        for _ in 0..1000 {
            let i = s.choose_weighted(&[0.0, 0.3, 0.0, 0.7, 0.0]);
            assert!(i == 1 || i == 3);
        }
    }
}
