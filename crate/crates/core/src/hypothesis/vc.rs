use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{HypothesisClass, HypothesisError, Signature};
use crate::combinatorics::{binomial, LexCombinations};
use crate::logic::RelationalExample;
use crate::sampling::SeededRng;

/// Limits for the exhaustive search. Above any of them the search falls back
/// to randomized greedy construction, which only certifies a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcCaps {
    /// Distinguishable points after merging points every member labels alike.
    pub max_points: usize,
    /// Distinct behaviors of the class on the universe.
    pub max_members: usize,
    /// Candidate subsets examined across all sizes.
    pub max_candidates: u128,
    pub random_restarts: usize,
}

impl Default for VcCaps {
    fn default() -> Self {
        VcCaps {
            max_points: 64,
            max_members: 4096,
            max_candidates: 20_000_000,
            random_restarts: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcResult {
    pub dimension: usize,
    /// `true` when the search was exhaustive, so `dimension` is exact.
    pub exact: bool,
    /// `⌊log2 |distinct behaviors|⌋`.
    pub upper_bound: usize,
    /// Indices into the universe of a shattered set of size `dimension`; the
    /// lexicographically smallest one when `exact`.
    pub witness: Vec<usize>,
    pub distinct_points: usize,
    pub distinct_members: usize,
}

pub fn vc_dimension(class: &HypothesisClass, universe: &[RelationalExample]) -> Result<VcResult, HypothesisError> {
    vc_dimension_with(class, universe, VcCaps::default(), 0)
}

pub fn vc_dimension_with(
    class: &HypothesisClass,
    universe: &[RelationalExample],
    caps: VcCaps,
    seed: u64,
) -> Result<VcResult, HypothesisError> {
    let members = class.effective_members(universe);
    if members.is_empty() {
        return Err(HypothesisError::EmptyClass);
    }
    let rows: Vec<Vec<bool>> = members
        .iter()
        .map(|h| universe.iter().map(|p| h.evaluate(p)).collect())
        .collect();

    // merge points with identical columns; keep the first of each
    let mut first_of: HashMap<Signature, usize> = HashMap::new();
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..universe.len() {
        let col = Signature::from_bits(rows.iter().map(|r| r[j]));
        first_of.entry(col).or_insert_with(|| {
            kept.push(j);
            j
        });
    }
    let mut patterns: Vec<Signature> = rows
        .iter()
        .map(|r| Signature::from_bits(kept.iter().map(|&j| r[j])))
        .collect();
    patterns.sort();
    patterns.dedup();

    let table = Table { rows: patterns };
    let upper_bound = (usize::BITS - 1 - table.rows.len().leading_zeros()) as usize;
    let max_d = upper_bound.min(kept.len());
    let candidates: Option<u128> = (1..=max_d).try_fold(0u128, |acc, d| acc.checked_add(binomial(kept.len(), d)?));
    let exhaustive = kept.len() <= caps.max_points
        && table.rows.len() <= caps.max_members
        && candidates.is_some_and(|c| c <= caps.max_candidates);

    let (dimension, local_witness, exact) = if exhaustive {
        let (d, w) = table.exact_search(kept.len(), max_d);
        (d, w, true)
    } else {
        let (d, w) = table.greedy_search(kept.len(), max_d, caps.random_restarts, seed);
        (d, w, d == max_d)
    };
    Ok(VcResult {
        dimension,
        exact,
        upper_bound,
        witness: local_witness.into_iter().map(|c| kept[c]).collect(),
        distinct_points: kept.len(),
        distinct_members: table.rows.len(),
    })
}

struct Table {
    rows: Vec<Signature>,
}

impl Table {
    fn shatters(&self, cols: &[usize]) -> bool {
        let d = cols.len();
        if d == 0 {
            return !self.rows.is_empty();
        }
        if self.rows.len() < 1 << d {
            return false;
        }
        let mut seen = vec![false; 1 << d];
        let mut count = 0usize;
        for row in &self.rows {
            let pat = cols
                .iter()
                .enumerate()
                .fold(0usize, |acc, (b, &c)| acc | (row.get(c) as usize) << b);
            if !seen[pat] {
                seen[pat] = true;
                count += 1;
                if count == 1 << d {
                    return true;
                }
            }
        }
        false
    }

    fn exact_search(&self, points: usize, max_d: usize) -> (usize, Vec<usize>) {
        let mut best = (0, Vec::new());
        for d in 1..=max_d {
            match LexCombinations::new(points, d).find(|s| self.shatters(s)) {
                Some(s) => best = (d, s),
                // no shattered d-set means no shattered superset either
                None => break,
            }
        }
        best
    }

    fn greedy_search(&self, points: usize, max_d: usize, restarts: usize, seed: u64) -> (usize, Vec<usize>) {
        let mut rng = SeededRng::new(seed, 0);
        let mut order: Vec<usize> = (0..points).collect();
        let mut best: Vec<usize> = Vec::new();
        for _ in 0..restarts.max(1) {
            order.shuffle(&mut rng);
            let mut set: Vec<usize> = Vec::new();
            for &c in &order {
                set.push(c);
                if !self.shatters(&set) {
                    set.pop();
                } else if set.len() == max_d {
                    break;
                }
            }
            if set.len() > best.len() {
                best = set;
            }
            if best.len() == max_d {
                break;
            }
        }
        best.sort_unstable();
        (best.len(), best)
    }
}
