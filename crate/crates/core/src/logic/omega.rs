use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::example::RelationalExample;
use super::vocab::Vocabulary;
use super::LogicError;
use crate::combinatorics::{binomial_big, Combinations};

pub const DEFAULT_OMEGA_CAP: u128 = 1_000_000;

/// All relational examples over a vocabulary whose domain is a size-`k`
/// subset of the vocabulary's constants.
#[derive(Debug, Clone)]
pub struct OmegaUniverse {
    vocab: Vocabulary,
    k: usize,
    elements: Vec<RelationalExample>,
}

impl OmegaUniverse {
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[RelationalExample] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `C(|constants|, k) * 2^(ground atoms over k constants)`.
pub fn omega_size(vocab: &Vocabulary, k: usize) -> BigUint {
    let atoms: u128 = vocab.predicates().map(|(_, arity)| (k as u128).pow(arity as u32)).sum();
    binomial_big(vocab.constants().len(), k) << (atoms as usize)
}

/// Enumerates Ω(L, k). Refuses, with the computed size, above `cap`.
pub fn enumerate_omega(vocab: &Vocabulary, k: usize, cap: u128) -> Result<OmegaUniverse, LogicError> {
    let size = omega_size(vocab, k);
    if size.to_u128().is_none_or(|s| s > cap) {
        return Err(LogicError::CapExceeded {
            size: size.to_string(),
            cap,
        });
    }
    let constants = vocab.constants();
    let mut elements = Vec::with_capacity(size.to_usize().unwrap_or(0));
    for subset in Combinations::new(constants.len(), k) {
        let domain: Vec<_> = subset.iter().map(|&i| constants[i].clone()).collect();
        let ground = vocab.ground_atoms(&domain);
        for mask in 0u64..(1u64 << ground.len()) {
            let atoms = ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.clone());
            elements
                .push(RelationalExample::new(atoms, domain.iter().cloned()).expect("ground atoms are over the domain"));
        }
    }
    Ok(OmegaUniverse {
        vocab: vocab.clone(),
        k,
        elements,
    })
}
