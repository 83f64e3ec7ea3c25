//! Deterministic counter-based random number generation.
//!
//! `StreamRng` is a SplitMix64 sequence whose initial state is derived from a
//! `(seed, stream)` pair. Replication `r` of a simulation uses stream `r`, so
//! any worker can jump straight to its own stream without walking a shared
//! generator. Output is identical across platforms and thread schedules.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator bound to one `(seed, stream)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamRng {
    state: u64,
}

impl StreamRng {
    /// Generator for `stream` under the master `seed`. Distinct pairs land on
    /// well-separated initial states via two finalizer rounds.
    pub fn new(seed: u64, stream: u64) -> Self {
        let tag = mix(stream.wrapping_mul(GOLDEN).wrapping_add(0x632B_E59B_D9B4_E019));
        StreamRng {
            state: mix(seed ^ tag),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw strictly inside (0, 1); endpoints are unreachable so
    /// inverse-transform sampling never produces infinite quantiles.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_for_fixed_pair() {
        let mut a = StreamRng::new(42, 7);
        let mut b = StreamRng::new(42, 7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_are_distinct() {
        // No collisions in the first 4 draws across many streams of one seed.
        let mut seen = std::collections::HashSet::new();
        for stream in 0..4096u64 {
            let mut rng = StreamRng::new(1234, stream);
            let head = [
                rng.next_u64(),
                rng.next_u64(),
                rng.next_u64(),
                rng.next_u64(),
            ];
            assert!(seen.insert(head), "stream {stream} collided");
        }
    }

    #[test]
    fn open01_is_strictly_inside() {
        let mut rng = StreamRng::new(0, 0);
        for _ in 0..100_000 {
            let u = rng.next_open01();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn open01_roughly_uniform() {
        let mut rng = StreamRng::new(9, 3);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| rng.next_open01()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean = {mean}");
    }
}
