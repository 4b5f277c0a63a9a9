//! Random processes over domains: uniform subset sampling without
//! replacement, the block-sampling process that extracts `⌊n/k⌋` size-`k`
//! blocks from a training domain, and the i.i.d. reference process, together
//! with exact enumeration of both processes on tiny instances.

mod exact;
mod process;
mod rng;

pub use exact::{
    enumerate_process_distribution, randomness_space, total_variation, Distribution, Process, DEFAULT_ENUMERATION_CAP,
};
pub use process::{
    iid_vector, sample_block_vectors, sample_block_vectors_with, sample_domain_subset, sample_iid_vector,
    sample_positions, BlockDraw, BlockProcess, BlockScratch, BlockVector, InjectionMode,
};
pub use rng::{IndexShuffler, SeededRng};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplingError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("randomness space of {size} outcomes exceeds the cap of {cap}")]
    CapExceeded { size: String, cap: u128 },
}
