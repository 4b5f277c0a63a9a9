use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ChaCha8 keyed by `seed` (expanded with `seed_from_u64`) on stream
/// `stream`. The algorithm is portable and each `(seed, stream)` pair names an
/// independent, reproducible sequence, so parallel trials can each own a
/// stream and still produce identical results for any worker count.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh generator on another stream of the same seed.
    pub fn fork(&self, stream: u64) -> Self {
        SeededRng::new(self.seed, stream)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Partial Fisher–Yates over a persistent permutation of `0..n`.
///
/// Each call to [`IndexShuffler::draw`] returns a uniformly random ordered
/// `k`-tuple of distinct indices, whatever the permutation state left by
/// earlier draws.
#[derive(Debug, Clone)]
pub struct IndexShuffler {
    perm: Vec<usize>,
}

impl IndexShuffler {
    pub fn new(n: usize) -> Self {
        IndexShuffler { perm: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> &[usize] {
        let n = self.perm.len();
        assert!(k <= n, "cannot draw {k} of {n}");
        for i in 0..k {
            let j = rng.random_range(i..n);
            self.perm.swap(i, j);
        }
        &self.perm[..k]
    }

    /// Like [`IndexShuffler::draw`] but sorted, i.e. a uniform k-subset.
    pub fn draw_subset<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Vec<usize> {
        let mut out = self.draw(k, rng).to_vec();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_stream_reproduce() {
        let mut a = SeededRng::new(42, 3);
        let mut b = SeededRng::new(42, 3);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn streams_differ() {
        let mut a = SeededRng::new(42, 0);
        let mut b = SeededRng::new(42, 1);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
        assert_eq!(a.fork(1).next_u64(), SeededRng::new(42, 1).next_u64());
    }

    #[test]
    fn draws_are_distinct() {
        let mut rng = SeededRng::new(1, 0);
        let mut sh = IndexShuffler::new(10);
        for k in 0..=10 {
            let s = sh.draw_subset(k, &mut rng);
            assert_eq!(s.len(), k);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&i| i < 10));
        }
    }
}
