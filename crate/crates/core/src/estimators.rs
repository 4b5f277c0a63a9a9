//! Q-statistics of hypotheses on relational examples: exact means over all
//! size-`k` fragments, Monte Carlo estimates, the block estimator, the
//! supremum deviation over a class, and the expectation identity.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, colex_rank, Combinations};
use crate::hypothesis::{reduce_by_equivalence, Hypothesis, HypothesisClass, HypothesisError, Signature};
use crate::logic::RelationalExample;
use crate::sampling::{BlockVector, IndexShuffler, SeededRng};

pub const DEFAULT_EXACT_CAP: u128 = 10_000_000;
pub const DEFAULT_OUTER_CAP: u128 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EstimatorError {
    #[error("k must be positive")]
    ZeroK,
    #[error("k = {k} exceeds the domain size {domain}")]
    KTooLarge { k: usize, domain: usize },
    #[error("n = {n} exceeds the domain size {domain}")]
    NTooLarge { n: usize, domain: usize },
    #[error("trials must be positive")]
    ZeroTrials,
    #[error("{what} of {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: u128,
    },
    #[error("block {block:?} is not a subset of C_Υ")]
    BlockOutside { block: Vec<usize> },
    #[error("no block vectors given")]
    NoVectors,
    #[error("the training example is not an induced fragment of the global example")]
    NotAFragment,
    #[error(transparent)]
    Hypothesis(#[from] HypothesisError),
}

/// A Q-value: an exact mean over all fragments or an empirical frequency.
/// Counts are kept unreduced, so `total` of an exact value is `C(|domain|, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum QValue {
    Exact { hits: u128, total: u128 },
    MonteCarlo { hits: u64, trials: u64 },
}

impl QValue {
    pub fn ratio(&self) -> BigRational {
        let (h, t) = self.counts();
        BigRational::new(BigInt::from(h), BigInt::from(t))
    }

    pub fn counts(&self) -> (u128, u128) {
        match *self {
            QValue::Exact { hits, total } => (hits, total),
            QValue::MonteCarlo { hits, trials } => (hits as u128, trials as u128),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (h, t) = self.counts();
        h as f64 / t as f64
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, QValue::Exact { .. })
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ratio())
    }
}

fn check_k(domain: usize, k: usize) -> Result<(), EstimatorError> {
    if k == 0 {
        return Err(EstimatorError::ZeroK);
    }
    if k > domain {
        return Err(EstimatorError::KTooLarge { k, domain });
    }
    Ok(())
}

fn capped(what: &'static str, count: Option<u128>, cap: u128) -> Result<u128, EstimatorError> {
    match count {
        Some(c) if c <= cap => Ok(c),
        _ => Err(EstimatorError::CapExceeded {
            what,
            size: count.map_or_else(|| "> 2^128".into(), |c| c.to_string()),
            cap,
        }),
    }
}

pub fn exact_q(ex: &RelationalExample, k: usize, f: &Hypothesis) -> Result<QValue, EstimatorError> {
    exact_q_with_cap(ex, k, f, DEFAULT_EXACT_CAP)
}

/// Mean of `f` over every size-`k` fragment of `ex`.
pub fn exact_q_with_cap(ex: &RelationalExample, k: usize, f: &Hypothesis, cap: u128) -> Result<QValue, EstimatorError> {
    check_k(ex.domain_size(), k)?;
    let total = capped("subset count", binomial(ex.domain_size(), k), cap)?;
    let hits = Combinations::new(ex.domain_size(), k)
        .filter(|s| f.evaluate(&ex.fragment_by_positions(s)))
        .count() as u128;
    Ok(QValue::Exact { hits, total })
}

/// Frequency of `f` over `trials` independent uniform size-`k` fragments.
pub fn mc_q(
    ex: &RelationalExample,
    k: usize,
    f: &Hypothesis,
    trials: u64,
    rng: &mut SeededRng,
) -> Result<QValue, EstimatorError> {
    check_k(ex.domain_size(), k)?;
    if trials == 0 {
        return Err(EstimatorError::ZeroTrials);
    }
    let mut sh = IndexShuffler::new(ex.domain_size());
    let hits = (0..trials)
        .filter(|_| {
            let s = sh.draw_subset(k, rng);
            f.evaluate(&ex.fragment_by_positions(&s))
        })
        .count() as u64;
    Ok(QValue::MonteCarlo { hits, trials })
}

/// As [`mc_q`], with trial `i` drawn from stream `i` of `seed` and trials
/// spread over the rayon pool. The result does not depend on the pool size.
pub fn mc_q_parallel(
    ex: &RelationalExample,
    k: usize,
    f: &Hypothesis,
    trials: u64,
    seed: u64,
) -> Result<QValue, EstimatorError> {
    check_k(ex.domain_size(), k)?;
    if trials == 0 {
        return Err(EstimatorError::ZeroTrials);
    }
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = SeededRng::new(seed, i);
            let s = IndexShuffler::new(ex.domain_size()).draw_subset(k, &mut rng);
            f.evaluate(&ex.fragment_by_positions(&s))
        })
        .count() as u64;
    Ok(QValue::MonteCarlo { hits, trials })
}

/// Frequency of `f` over a prescribed sequence of subsets. With the full
/// colex schedule this reproduces [`exact_q`].
pub fn mc_q_scheduled<I>(
    ex: &RelationalExample,
    k: usize,
    f: &Hypothesis,
    schedule: I,
) -> Result<QValue, EstimatorError>
where
    I: IntoIterator<Item = Vec<usize>>,
{
    check_k(ex.domain_size(), k)?;
    let (mut hits, mut trials) = (0u64, 0u64);
    for s in schedule {
        trials += 1;
        if f.evaluate(&ex.fragment_by_positions(&s)) {
            hits += 1;
        }
    }
    if trials == 0 {
        return Err(EstimatorError::ZeroTrials);
    }
    Ok(QValue::MonteCarlo { hits, trials })
}

/// `R^(q)`: the mean of `f` over all blocks of `q` block vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEstimate {
    pub hits: u64,
    pub q: u64,
    pub blocks_per_vector: u64,
    pub n: usize,
    pub k: usize,
}

impl BlockEstimate {
    pub fn evaluations(&self) -> u64 {
        self.q * self.blocks_per_vector
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.hits), BigInt::from(self.evaluations()))
    }

    pub fn value(&self) -> f64 {
        self.hits as f64 / self.evaluations() as f64
    }
}

fn check_vectors(c_upsilon: &[usize], vectors: &[BlockVector]) -> Result<(u64, usize), EstimatorError> {
    let first = vectors.first().ok_or(EstimatorError::NoVectors)?;
    let k = first.blocks.first().map_or(0, Vec::len);
    for v in vectors {
        for b in &v.blocks {
            if b.len() != k || b.iter().any(|p| c_upsilon.binary_search(p).is_err()) {
                return Err(EstimatorError::BlockOutside { block: b.clone() });
            }
        }
    }
    Ok((first.blocks.len() as u64, k))
}

/// Evaluates `f` on `aleph⟨B⟩` for every block `B`. `c_upsilon` must be
/// sorted positions in `aleph`'s domain.
pub fn block_estimate(
    aleph: &RelationalExample,
    c_upsilon: &[usize],
    vectors: &[BlockVector],
    f: &Hypothesis,
) -> Result<BlockEstimate, EstimatorError> {
    let (per, k) = check_vectors(c_upsilon, vectors)?;
    let hits = vectors
        .iter()
        .flat_map(|v| &v.blocks)
        .filter(|b| f.evaluate(&aleph.fragment_by_positions(b)))
        .count() as u64;
    Ok(BlockEstimate {
        hits,
        q: vectors.len() as u64,
        blocks_per_vector: per,
        n: c_upsilon.len(),
        k,
    })
}

/// [`block_estimate`] from a precomputed behavior of `f` on `aleph`'s
/// size-`k` fragments in colex order.
pub fn block_estimate_from_signature(
    signature: &Signature,
    c_upsilon: &[usize],
    vectors: &[BlockVector],
) -> Result<BlockEstimate, EstimatorError> {
    let (per, k) = check_vectors(c_upsilon, vectors)?;
    let hits = vectors
        .iter()
        .flat_map(|v| &v.blocks)
        .filter(|b| signature.get(colex_rank(b) as usize))
        .count() as u64;
    Ok(BlockEstimate {
        hits,
        q: vectors.len() as u64,
        blocks_per_vector: per,
        n: c_upsilon.len(),
        k,
    })
}

/// A class reduced to one representative per behavior on a global example,
/// with each representative's hit count on the global example.
#[derive(Debug, Clone)]
pub struct ReducedClass {
    pub representatives: Vec<(Hypothesis, Signature)>,
    aleph_hits: Vec<u128>,
    aleph_total: u128,
    k: usize,
}

/// Largest `|Q_ℵ(f) − Q_Υ(f)|` over a class, with the first representative
/// attaining it.
#[derive(Debug, Clone)]
pub struct SupDeviation {
    pub value: BigRational,
    pub witness: Hypothesis,
    pub witness_index: usize,
}

impl ReducedClass {
    pub fn new(
        class: &HypothesisClass,
        aleph: &RelationalExample,
        k: usize,
        cap: u128,
    ) -> Result<Self, EstimatorError> {
        let representatives = reduce_by_equivalence(class, aleph, k, cap)?;
        if representatives.is_empty() {
            return Err(HypothesisError::EmptyClass.into());
        }
        let aleph_hits = representatives.iter().map(|(_, s)| s.count_ones() as u128).collect();
        let aleph_total = binomial(aleph.domain_size(), k).expect("checked by reduction");
        Ok(ReducedClass {
            representatives,
            aleph_hits,
            aleph_total,
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Exact `Q_ℵ` of representative `i`.
    pub fn aleph_q(&self, i: usize) -> QValue {
        QValue::Exact {
            hits: self.aleph_hits[i],
            total: self.aleph_total,
        }
    }

    /// Exact `Q_{ℵ⟨C⟩}` of representative `i` for sorted positions `c`.
    pub fn fragment_q(&self, i: usize, c: &[usize]) -> QValue {
        let sig = &self.representatives[i].1;
        let mut total = 0u128;
        let hits = Combinations::new(c.len(), self.k)
            .inspect(|_| total += 1)
            .filter(|s| {
                let mapped: Vec<usize> = s.iter().map(|&j| c[j]).collect();
                sig.get(colex_rank(&mapped) as usize)
            })
            .count() as u128;
        QValue::Exact { hits, total }
    }

    /// Sup-deviation between the global example and its fragment on the
    /// sorted positions `c_upsilon`.
    pub fn deviation_on(&self, c_upsilon: &[usize]) -> Result<SupDeviation, EstimatorError> {
        check_k(c_upsilon.len(), self.k)?;
        let ranks: Vec<usize> = Combinations::new(c_upsilon.len(), self.k)
            .map(|s| {
                let mapped: Vec<usize> = s.iter().map(|&j| c_upsilon[j]).collect();
                colex_rank(&mapped) as usize
            })
            .collect();
        let local_total = ranks.len() as u128;
        // |a/A − u/U| = |a·U − u·A| / (A·U); maximize the numerator
        let mut best: Option<(u128, usize)> = None;
        for (i, (_, sig)) in self.representatives.iter().enumerate() {
            let u = ranks.iter().filter(|&&r| sig.get(r)).count() as u128;
            let num = (self.aleph_hits[i] * local_total).abs_diff(u * self.aleph_total);
            if best.is_none_or(|(b, _)| num > b) {
                best = Some((num, i));
            }
        }
        let (num, i) = best.expect("nonempty class");
        Ok(SupDeviation {
            value: BigRational::new(BigInt::from(num), BigInt::from(self.aleph_total * local_total)),
            witness: self.representatives[i].0.clone(),
            witness_index: i,
        })
    }
}

/// `sup_{f∈H} |Q_{ℵ,k}(f) − Q_{Υ,k}(f)|` for a fragment `Υ` of `ℵ`.
pub fn sup_deviation(
    aleph: &RelationalExample,
    upsilon: &RelationalExample,
    k: usize,
    class: &HypothesisClass,
) -> Result<SupDeviation, EstimatorError> {
    let positions: Option<Vec<usize>> = upsilon.domain().iter().map(|c| aleph.position_of(c)).collect();
    let positions = positions.ok_or(EstimatorError::NotAFragment)?;
    if aleph.fragment_by_positions(&positions) != *upsilon {
        return Err(EstimatorError::NotAFragment);
    }
    ReducedClass::new(class, aleph, k, DEFAULT_EXACT_CAP)?.deviation_on(&positions)
}

pub fn expectation_identity_check(
    aleph: &RelationalExample,
    n: usize,
    k: usize,
    f: &Hypothesis,
) -> Result<(BigRational, BigRational), EstimatorError> {
    expectation_identity_check_with_cap(aleph, n, k, f, DEFAULT_OUTER_CAP)
}

/// `Q_{ℵ,k}(f)` and the exact average of `Q_{ℵ⟨C⟩,k}(f)` over all size-`n`
/// subsets `C` of the domain.
pub fn expectation_identity_check_with_cap(
    aleph: &RelationalExample,
    n: usize,
    k: usize,
    f: &Hypothesis,
    cap: u128,
) -> Result<(BigRational, BigRational), EstimatorError> {
    check_k(n, k)?;
    if n > aleph.domain_size() {
        return Err(EstimatorError::NTooLarge {
            n,
            domain: aleph.domain_size(),
        });
    }
    let outer = capped("outer subset count", binomial(aleph.domain_size(), n), cap)?;
    let lhs = exact_q(aleph, k, f)?.ratio();
    let mut sum = BigRational::zero();
    for c in Combinations::new(aleph.domain_size(), n) {
        sum += exact_q(&aleph.fragment_by_positions(&c), k, f)?.ratio();
    }
    Ok((lhs, sum / BigRational::from_integer(BigInt::from(outer))))
}

/// Decimal rendering used in reports.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
