//! Exact distributions of the block and i.i.d. processes on tiny instances.
//!
//! All randomness is enumerated with integer weights over a common
//! denominator, so the resulting probabilities are exact rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::process::{check_sizes, BlockVector, InjectionMode};
use super::SamplingError;
use crate::combinatorics::{binomial, falling_factorial, Combinations};

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    Block(InjectionMode),
    Iid,
}

pub type Distribution = BTreeMap<BlockVector, BigRational>;

/// Upper bound on the number of elementary outcomes the enumeration visits.
pub fn randomness_space(aleph_size: usize, n: usize, k: usize, process: Process) -> Option<u128> {
    let t = (n / k.max(1)) as u32;
    let tuples = binomial(aleph_size, k)?.checked_pow(t)?;
    match process {
        Process::Iid => Some(tuples),
        Process::Block(InjectionMode::OrderPreserving) => binomial(aleph_size, n)?.checked_mul(tuples),
        Process::Block(InjectionMode::Uniform) => binomial(aleph_size, n)?
            .checked_mul(tuples)?
            .checked_mul(falling_factorial(n, (t as usize * k).min(n))?),
    }
}

/// Exact law of one vector over a canonical domain `0..aleph_size`.
pub fn enumerate_process_distribution(
    aleph_size: usize,
    n: usize,
    k: usize,
    process: Process,
    cap: u128,
) -> Result<Distribution, SamplingError> {
    check_sizes(aleph_size, n, k)?;
    let space = randomness_space(aleph_size, n, k, process);
    match space {
        Some(s) if s <= cap => {}
        _ => {
            return Err(SamplingError::CapExceeded {
                size: space.map_or_else(|| "> 2^128".to_string(), |s| s.to_string()),
                cap,
            })
        }
    }
    let t = n / k;
    let subsets: Vec<Vec<usize>> = Combinations::new(aleph_size, k).collect();
    let mut counts: BTreeMap<BlockVector, u128> = BTreeMap::new();

    let denominator: u128 = match process {
        Process::Iid => {
            for_each_tuple(subsets.len(), t, |tuple| {
                let v = BlockVector {
                    blocks: tuple.iter().map(|&i| subsets[i].clone()).collect(),
                };
                *counts.entry(v).or_default() += 1;
            });
            (subsets.len() as u128).pow(t as u32)
        }
        Process::Block(mode) => {
            let n_fact = falling_factorial(n, n).expect("n! fits");
            let per_c = (subsets.len() as u128).pow(t as u32);
            let injections = match mode {
                InjectionMode::Uniform => n_fact,
                InjectionMode::OrderPreserving => 1,
            };
            for c_upsilon in Combinations::new(aleph_size, n) {
                for_each_tuple(subsets.len(), t, |tuple| {
                    let mut union: Vec<usize> = tuple.iter().flat_map(|&i| subsets[i].iter().copied()).collect();
                    union.sort_unstable();
                    union.dedup();
                    let r = union.len();
                    let image_of = |image: &[usize]| BlockVector {
                        blocks: tuple
                            .iter()
                            .map(|&i| {
                                let mut b: Vec<usize> = subsets[i]
                                    .iter()
                                    .map(|x| image[union.binary_search(x).unwrap()])
                                    .collect();
                                b.sort_unstable();
                                b
                            })
                            .collect(),
                    };
                    match mode {
                        InjectionMode::Uniform => {
                            // each of the n!/(n-r)! injections has weight (n-r)!/n!
                            let weight = falling_factorial(n - r, n - r).unwrap();
                            for_each_injection(&c_upsilon, r, |image| {
                                *counts.entry(image_of(image)).or_default() += weight;
                            });
                        }
                        InjectionMode::OrderPreserving => {
                            *counts.entry(image_of(&c_upsilon[..r])).or_default() += 1;
                        }
                    }
                });
            }
            binomial(aleph_size, n).unwrap() * per_c * injections
        }
    };

    let den = BigInt::from(denominator);
    Ok(counts
        .into_iter()
        .map(|(v, c)| (v, BigRational::new(BigInt::from(c), den.clone())))
        .collect())
}

/// Half the L1 distance between two distributions, exactly.
pub fn total_variation(p: &Distribution, q: &Distribution) -> BigRational {
    let mut sum = BigRational::zero();
    for (v, pv) in p {
        match q.get(v) {
            Some(qv) => sum += (pv - qv).abs(),
            None => sum += pv.clone(),
        }
    }
    for (v, qv) in q {
        if !p.contains_key(v) {
            sum += qv.clone();
        }
    }
    sum / BigRational::from_integer(BigInt::from(2))
}

fn for_each_tuple(choices: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if choices == 0 && len > 0 {
        return;
    }
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Calls `f` with every ordered `r`-tuple of distinct elements of `targets`.
fn for_each_injection(targets: &[usize], r: usize, mut f: impl FnMut(&[usize])) {
    fn rec(targets: &[usize], r: usize, used: &mut Vec<bool>, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == r {
            f(acc);
            return;
        }
        for i in 0..targets.len() {
            if !used[i] {
                used[i] = true;
                acc.push(targets[i]);
                rec(targets, r, used, acc, f);
                acc.pop();
                used[i] = false;
            }
        }
    }
    rec(
        targets,
        r,
        &mut vec![false; targets.len()],
        &mut Vec::with_capacity(r),
        &mut f,
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn total(d: &Distribution) -> BigRational {
        d.values().fold(BigRational::zero(), |a, b| a + b)
    }

    #[test]
    fn iid_four_three_one_is_uniform() {
        let d = enumerate_process_distribution(4, 3, 1, Process::Iid, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(d.len(), 64);
        let p = BigRational::new(1.into(), 64.into());
        assert!(d.values().all(|v| *v == p));
        assert!(total(&d).is_one());
    }

    #[test]
    fn block_four_three_one_is_uniform() {
        let d =
            enumerate_process_distribution(4, 3, 1, Process::Block(InjectionMode::Uniform), DEFAULT_ENUMERATION_CAP)
                .unwrap();
        assert_eq!(d.len(), 64);
        let p = BigRational::new(1.into(), 64.into());
        assert!(d.values().all(|v| *v == p));
    }

    #[test]
    fn ablation_breaks_equality() {
        let iid = enumerate_process_distribution(4, 3, 1, Process::Iid, DEFAULT_ENUMERATION_CAP).unwrap();
        let bad = enumerate_process_distribution(
            4,
            3,
            1,
            Process::Block(InjectionMode::OrderPreserving),
            DEFAULT_ENUMERATION_CAP,
        )
        .unwrap();
        assert!(total(&bad).is_one());
        assert!(total_variation(&iid, &bad) > BigRational::zero());
    }

    #[test]
    fn tv_of_disjoint_supports_is_one() {
        let a: Distribution = [(BlockVector { blocks: vec![vec![0]] }, BigRational::one())].into();
        let b: Distribution = [(BlockVector { blocks: vec![vec![1]] }, BigRational::one())].into();
        assert!(total_variation(&a, &b).is_one());
        assert!(total_variation(&a, &a).is_zero());
    }

    #[test]
    fn cap_refusal() {
        let err = enumerate_process_distribution(6, 4, 2, Process::Block(InjectionMode::Uniform), 1000).unwrap_err();
        // C(6,4) * C(6,2)^2 * 4!/0! = 15 * 225 * 24
        assert_eq!(
            err,
            SamplingError::CapExceeded {
                size: "81000".into(),
                cap: 1000
            }
        );
    }
}
