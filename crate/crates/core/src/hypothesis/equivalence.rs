use std::collections::HashMap;

use super::{Hypothesis, HypothesisClass, HypothesisError};
use crate::combinatorics::{binomial, Combinations};
use crate::logic::RelationalExample;

pub const DEFAULT_REDUCTION_CAP: u128 = 1_000_000;

/// Behavior of a hypothesis on an indexed list of points, one bit per point.
/// For k-equivalence the points are the size-`k` fragments of the global
/// example in colex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    words: Vec<u64>,
    len: usize,
}

impl Signature {
    pub fn zeros(len: usize) -> Self {
        Signature {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Signature { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `0`/`1` characters, point 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

fn check_cap(aleph: &RelationalExample, k: usize, cap: u128) -> Result<usize, HypothesisError> {
    if k == 0 {
        return Err(HypothesisError::ZeroK);
    }
    if k > aleph.domain_size() {
        return Err(HypothesisError::KTooLarge {
            k,
            domain: aleph.domain_size(),
        });
    }
    match binomial(aleph.domain_size(), k) {
        Some(c) if c <= cap => Ok(c as usize),
        other => Err(HypothesisError::CapExceeded {
            what: "fragment count",
            size: other.map_or_else(|| "> 2^128".into(), |c| c.to_string()),
            cap,
        }),
    }
}

/// All size-`k` fragments of `aleph`, in colex order of their constant sets.
pub fn fragment_points(
    aleph: &RelationalExample,
    k: usize,
    cap: u128,
) -> Result<Vec<RelationalExample>, HypothesisError> {
    check_cap(aleph, k, cap)?;
    Ok(Combinations::new(aleph.domain_size(), k)
        .map(|s| aleph.fragment_by_positions(&s))
        .collect())
}

/// One representative per k-equivalence class w.r.t. `aleph`, in the order
/// the class first exhibits each behavior.
pub fn reduce_by_equivalence(
    class: &HypothesisClass,
    aleph: &RelationalExample,
    k: usize,
    cap: u128,
) -> Result<Vec<(Hypothesis, Signature)>, HypothesisError> {
    let total = check_cap(aleph, k, cap)?;
    let subsets = Combinations::new(aleph.domain_size(), k);
    let (members, signatures) = match class {
        HypothesisClass::Explicit(members) => {
            let mut sigs = vec![Signature::zeros(total); members.len()];
            for (i, s) in subsets.enumerate() {
                let frag = aleph.fragment_by_positions(&s);
                for (m, h) in members.iter().enumerate() {
                    if h.evaluate(&frag) {
                        sigs[m].set(i);
                    }
                }
            }
            (members.clone(), sigs)
        }
        HypothesisClass::Threshold(stat) => {
            let values: Vec<i64> = subsets.map(|s| stat.value(&aleph.fragment_by_positions(&s))).collect();
            let members = HypothesisClass::threshold_members(stat, &values);
            let thresholds: Vec<i64> = {
                let mut d = values.clone();
                d.sort_unstable();
                d.dedup();
                let sentinel = d.last().map_or(0, |m| m.saturating_add(1));
                d.push(sentinel);
                d
            };
            let sigs = thresholds
                .iter()
                .map(|&t| Signature::from_bits(values.iter().map(|&v| v >= t)))
                .collect();
            (members, sigs)
        }
    };
    let mut seen: HashMap<Signature, ()> = HashMap::new();
    let mut out = Vec::new();
    for (h, sig) in members.into_iter().zip(signatures) {
        if seen.insert(sig.clone(), ()).is_none() {
            out.push((h, sig));
        }
    }
    Ok(out)
}
