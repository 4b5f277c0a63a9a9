use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::rng::{IndexShuffler, SeededRng};
use super::SamplingError;
use crate::logic::{Constant, RelationalExample};

/// `⌊n/k⌋` size-`k` blocks. Entries are positions in the sorted domain of the
/// global example; blocks are sorted and may overlap each other.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockVector {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockVector {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Resolves positions to the constants of `aleph`.
    pub fn constants(&self, aleph: &RelationalExample) -> Vec<Vec<Constant>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&p| aleph.domain()[p].clone()).collect())
            .collect()
    }
}

/// How the injection `g` from sampled index positions into `C_Υ` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InjectionMode {
    /// Uniform over all injections.
    #[default]
    Uniform,
    /// Ablation: the order-preserving injection onto the smallest elements of
    /// `C_Υ`. Breaks the distributional identity with the i.i.d. process.
    OrderPreserving,
}

/// One run of the block-sampling process: the training domain and `q`
/// vectors drawn from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDraw {
    pub c_upsilon: Vec<usize>,
    pub vectors: Vec<BlockVector>,
}

pub(crate) fn check_sizes(aleph_size: usize, n: usize, k: usize) -> Result<(), SamplingError> {
    if k == 0 {
        return Err(SamplingError::Precondition("k must be positive".into()));
    }
    if k > n {
        return Err(SamplingError::Precondition(format!("k = {k} exceeds n = {n}")));
    }
    if n > aleph_size {
        return Err(SamplingError::Precondition(format!(
            "n = {n} exceeds the global domain size {aleph_size}"
        )));
    }
    Ok(())
}

/// A uniformly random size-`n` subset of `0..size`, sorted.
pub fn sample_positions(size: usize, n: usize, rng: &mut SeededRng) -> Result<Vec<usize>, SamplingError> {
    if n > size {
        return Err(SamplingError::Precondition(format!(
            "cannot draw {n} of {size} constants"
        )));
    }
    Ok(IndexShuffler::new(size).draw_subset(n, rng))
}

/// A uniformly random size-`n` subset of the example's domain.
pub fn sample_domain_subset(
    ex: &RelationalExample,
    n: usize,
    rng: &mut SeededRng,
) -> Result<BTreeSet<Constant>, SamplingError> {
    let pos = sample_positions(ex.domain_size(), n, rng)?;
    Ok(pos.into_iter().map(|p| ex.domain()[p].clone()).collect())
}

/// Reusable state for drawing block vectors from a fixed `C_Υ`.
#[derive(Debug, Clone)]
pub struct BlockProcess {
    k: usize,
    blocks: usize,
    mode: InjectionMode,
    indices: IndexShuffler,
    targets: IndexShuffler,
}

impl BlockProcess {
    pub fn new(aleph_size: usize, n: usize, k: usize, mode: InjectionMode) -> Result<Self, SamplingError> {
        check_sizes(aleph_size, n, k)?;
        Ok(BlockProcess {
            k,
            blocks: n / k,
            mode,
            indices: IndexShuffler::new(aleph_size),
            targets: IndexShuffler::new(n),
        })
    }

    pub fn blocks_per_vector(&self) -> usize {
        self.blocks
    }

    /// Steps (a)-(c): independent uniform index subsets `I'_i`, an injection
    /// `g` from their union into `C_Υ`, and the images `g(I'_i)`.
    pub fn draw_vector(&mut self, c_upsilon: &[usize], rng: &mut SeededRng) -> BlockVector {
        let mut scratch = BlockScratch::default();
        self.draw_into(c_upsilon, rng, &mut scratch);
        BlockVector {
            blocks: scratch.blocks().map(<[usize]>::to_vec).collect(),
        }
    }

    /// [`BlockProcess::draw_vector`] into reusable buffers; consumes the
    /// generator identically.
    pub fn draw_into(&mut self, c_upsilon: &[usize], rng: &mut SeededRng, scratch: &mut BlockScratch) {
        assert_eq!(c_upsilon.len(), self.targets.len(), "C_Υ has the wrong size");
        let k = self.k;
        scratch.k = k;
        scratch.flat.clear();
        for _ in 0..self.blocks {
            let start = scratch.flat.len();
            scratch.flat.extend_from_slice(self.indices.draw(k, rng));
            scratch.flat[start..].sort_unstable();
        }
        scratch.union.clear();
        scratch.union.extend_from_slice(&scratch.flat);
        scratch.union.sort_unstable();
        scratch.union.dedup();
        // ⌊n/k⌋·k ≤ n, so an injection into C_Υ always exists
        assert!(scratch.union.len() <= c_upsilon.len());
        scratch.image.clear();
        match self.mode {
            InjectionMode::Uniform => {
                let targets = self.targets.draw(scratch.union.len(), rng);
                scratch.image.extend(targets.iter().map(|&p| c_upsilon[p]));
            }
            InjectionMode::OrderPreserving => scratch.image.extend_from_slice(&c_upsilon[..scratch.union.len()]),
        }
        for slot in scratch.flat.iter_mut() {
            *slot = scratch.image[scratch.union.binary_search(slot).expect("index in union")];
        }
        for block in scratch.flat.chunks_mut(k) {
            block.sort_unstable();
        }
    }
}

/// Buffers for [`BlockProcess::draw_into`]; after a draw, holds the blocks
/// of one vector back to back.
#[derive(Debug, Clone, Default)]
pub struct BlockScratch {
    k: usize,
    flat: Vec<usize>,
    union: Vec<usize>,
    image: Vec<usize>,
}

impl BlockScratch {
    pub fn blocks(&self) -> std::slice::ChunksExact<'_, usize> {
        self.flat.chunks_exact(self.k.max(1))
    }
}

/// The full block-sampling process: draw `C_Υ` once, then `q` vectors from it.
pub fn sample_block_vectors(
    aleph: &RelationalExample,
    n: usize,
    k: usize,
    q: usize,
    rng: &mut SeededRng,
) -> Result<BlockDraw, SamplingError> {
    sample_block_vectors_with(aleph.domain_size(), n, k, q, InjectionMode::Uniform, rng)
}

pub fn sample_block_vectors_with(
    aleph_size: usize,
    n: usize,
    k: usize,
    q: usize,
    mode: InjectionMode,
    rng: &mut SeededRng,
) -> Result<BlockDraw, SamplingError> {
    if q == 0 {
        return Err(SamplingError::Precondition("q must be positive".into()));
    }
    let mut process = BlockProcess::new(aleph_size, n, k, mode)?;
    let c_upsilon = sample_positions(aleph_size, n, rng)?;
    let vectors = (0..q).map(|_| process.draw_vector(&c_upsilon, rng)).collect();
    Ok(BlockDraw { c_upsilon, vectors })
}

/// The reference vector: `⌊n/k⌋` independent uniform size-`k` subsets of the
/// global domain.
pub fn sample_iid_vector(
    aleph: &RelationalExample,
    n: usize,
    k: usize,
    rng: &mut SeededRng,
) -> Result<BlockVector, SamplingError> {
    iid_vector(aleph.domain_size(), n, k, rng)
}

pub fn iid_vector(aleph_size: usize, n: usize, k: usize, rng: &mut SeededRng) -> Result<BlockVector, SamplingError> {
    check_sizes(aleph_size, n, k)?;
    let mut sh = IndexShuffler::new(aleph_size);
    Ok(BlockVector {
        blocks: (0..n / k).map(|_| sh.draw_subset(k, rng)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::GroundAtom;

    fn aleph(size: usize) -> RelationalExample {
        let names: Vec<String> = (0..size).map(|i| format!("c{i}")).collect();
        RelationalExample::new(Vec::<GroundAtom>::new(), names).unwrap()
    }

    #[test]
    fn full_and_empty_subsets() {
        let ex = aleph(5);
        let mut rng = SeededRng::new(3, 0);
        let all = sample_domain_subset(&ex, 5, &mut rng).unwrap();
        assert_eq!(all.len(), 5);
        assert!(sample_domain_subset(&ex, 0, &mut rng).unwrap().is_empty());
        assert!(sample_domain_subset(&ex, 6, &mut rng).is_err());
    }

    #[test]
    fn vectors_live_inside_c_upsilon() {
        let ex = aleph(9);
        let mut rng = SeededRng::new(11, 0);
        let draw = sample_block_vectors(&ex, 7, 2, 5, &mut rng).unwrap();
        assert_eq!(draw.c_upsilon.len(), 7);
        assert_eq!(draw.vectors.len(), 5);
        for v in &draw.vectors {
            assert_eq!(v.len(), 3);
            for b in &v.blocks {
                assert_eq!(b.len(), 2);
                assert!(b.iter().all(|p| draw.c_upsilon.contains(p)));
            }
        }
    }

    #[test]
    fn preconditions() {
        let ex = aleph(4);
        let mut rng = SeededRng::new(0, 0);
        assert!(sample_block_vectors(&ex, 5, 1, 1, &mut rng).is_err());
        assert!(sample_block_vectors(&ex, 2, 3, 1, &mut rng).is_err());
        assert!(sample_block_vectors(&ex, 2, 0, 1, &mut rng).is_err());
        assert!(sample_block_vectors(&ex, 2, 1, 0, &mut rng).is_err());
        assert!(sample_iid_vector(&ex, 5, 1, &mut rng).is_err());
    }

    #[test]
    fn k_equals_n_gives_single_block() {
        let ex = aleph(6);
        let mut rng = SeededRng::new(5, 0);
        let draw = sample_block_vectors(&ex, 3, 3, 2, &mut rng).unwrap();
        for v in &draw.vectors {
            assert_eq!(v.blocks, vec![draw.c_upsilon.clone()]);
        }
        assert_eq!(sample_iid_vector(&ex, 3, 3, &mut rng).unwrap().len(), 1);
    }

    #[test]
    fn order_preserving_ablation_uses_smallest_targets() {
        let mut rng = SeededRng::new(9, 0);
        let draw = sample_block_vectors_with(6, 4, 1, 10, InjectionMode::OrderPreserving, &mut rng).unwrap();
        for v in &draw.vectors {
            let mut used: Vec<usize> = v.blocks.iter().flatten().copied().collect();
            used.sort_unstable();
            used.dedup();
            assert_eq!(used, draw.c_upsilon[..used.len()].to_vec());
        }
    }

    #[test]
    fn scratch_draw_matches_vector_draw() {
        let c: Vec<usize> = vec![1, 3, 4, 6, 8, 9, 11];
        let mut a = BlockProcess::new(12, 7, 2, InjectionMode::Uniform).unwrap();
        let mut b = a.clone();
        let (mut ra, mut rb) = (SeededRng::new(3, 1), SeededRng::new(3, 1));
        let mut scratch = BlockScratch::default();
        for _ in 0..20 {
            let v = a.draw_vector(&c, &mut ra);
            b.draw_into(&c, &mut rb, &mut scratch);
            let w: Vec<Vec<usize>> = scratch.blocks().map(<[usize]>::to_vec).collect();
            assert_eq!(v.blocks, w);
        }
    }

    #[test]
    fn determinism() {
        let ex = aleph(8);
        let a = sample_block_vectors(&ex, 6, 2, 4, &mut SeededRng::new(77, 2)).unwrap();
        let b = sample_block_vectors(&ex, 6, 2, 4, &mut SeededRng::new(77, 2)).unwrap();
        assert_eq!(a, b);
    }
}
