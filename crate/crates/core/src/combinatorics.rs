//! Binomial coefficients and colexicographic enumeration of k-subsets.
//!
//! Subsets are represented as strictly increasing index vectors into some
//! sorted base list. Colex order compares subsets by their largest element
//! first, which gives the ranking `rank(c) = sum_i C(c_i, i + 1)`.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` as a `u128`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Falling factorial `n! / (n - r)!`.
pub fn falling_factorial(n: usize, r: usize) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    (0..r).try_fold(1u128, |acc, i| acc.checked_mul((n - i) as u128))
}

pub fn factorial_big(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Colex rank of a strictly increasing index vector.
pub fn colex_rank(subset: &[usize]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1).expect("rank overflow"))
        .sum()
}

/// Colex ranks of `k`-subsets of `0..n` from a precomputed binomial table.
#[derive(Debug, Clone)]
pub struct ColexRanker {
    k: usize,
    // table[i * n + c] = C(c, i + 1)
    table: Vec<usize>,
    n: usize,
}

impl ColexRanker {
    /// `None` when `C(n, k)` does not fit in `usize`.
    pub fn new(n: usize, k: usize) -> Option<Self> {
        usize::try_from(binomial(n, k)?).ok()?;
        let mut table = vec![0; k * n];
        for i in 0..k {
            for c in 0..n {
                table[i * n + c] = binomial(c, i + 1)? as usize;
            }
        }
        Some(ColexRanker { k, table, n })
    }

    pub fn rank(&self, subset: &[usize]) -> usize {
        debug_assert_eq!(subset.len(), self.k);
        subset
            .iter()
            .enumerate()
            .map(|(i, &c)| self.table[i * self.n + c])
            .sum()
    }
}

/// Iterator over all size-`k` subsets of `0..n` in colex order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // smallest position that can be bumped without colliding with its successor
        let bump = (0..k).find(|&i| {
            let limit = if i + 1 < k { next[i + 1] } else { self.n };
            next[i] + 1 < limit
        });
        if let Some(i) = bump {
            next[i] += 1;
            for (j, slot) in next.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Lexicographic k-combinations of `0..n`. Used where the smallest witness in
/// lexicographic order is wanted.
#[derive(Debug, Clone)]
pub struct LexCombinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl LexCombinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        LexCombinations { n, current }
    }
}

impl Iterator for LexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        if let Some(i) = (0..k).rev().find(|&i| next[i] < self.n - k + i) {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranker_matches_colex_rank() {
        let r = ColexRanker::new(9, 3).unwrap();
        for (i, s) in Combinations::new(9, 3).enumerate() {
            assert_eq!(r.rank(&s), i);
            assert_eq!(colex_rank(&s), i as u128);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(5, 0), Some(1));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(80, 2), Some(3160));
        assert_eq!(binomial_big(30, 12), BigUint::from(86_493_225u64));
        assert_eq!(falling_factorial(4, 2), Some(12));
        assert_eq!(factorial_big(5), BigUint::from(120u32));
    }

    #[test]
    fn colex_order_and_rank_agree() {
        let all: Vec<_> = Combinations::new(6, 3).collect();
        assert_eq!(all.len(), 20);
        for (i, c) in all.iter().enumerate() {
            assert_eq!(colex_rank(c), i as u128);
        }
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all[2], vec![0, 2, 3]);
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(0, 0).count(), 1);
        assert_eq!(LexCombinations::new(4, 4).count(), 1);
        assert_eq!(LexCombinations::new(3, 0).count(), 1);
    }

    #[test]
    fn lex_order() {
        let all: Vec<_> = LexCombinations::new(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[4], vec![1, 2]);
        assert_eq!(all[9], vec![3, 4]);
    }
}
