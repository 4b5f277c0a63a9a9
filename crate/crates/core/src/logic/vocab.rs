use std::collections::BTreeMap;

use super::example::{Constant, GroundAtom, RelationalExample};
use super::LogicError;

/// Predicates with their arities plus a finite, sorted set of constants.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    predicates: BTreeMap<String, usize>,
    constants: Vec<Constant>,
}

impl Vocabulary {
    pub fn new<P, C, S>(predicates: P, constants: C) -> Result<Self, LogicError>
    where
        P: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
        C: IntoIterator,
        C::Item: Into<Constant>,
    {
        let mut vocab = Vocabulary::default();
        for (name, arity) in predicates {
            vocab.add_predicate(name.into(), arity)?;
        }
        for c in constants {
            let c = c.into();
            match vocab.constants.binary_search(&c) {
                Ok(_) => return Err(LogicError::DuplicateConstant(c.to_string())),
                Err(pos) => vocab.constants.insert(pos, c),
            }
        }
        Ok(vocab)
    }

    /// Registers a predicate; re-adding with the same arity is a no-op.
    pub fn add_predicate(&mut self, name: String, arity: usize) -> Result<(), LogicError> {
        match self.predicates.get(&name) {
            Some(&existing) if existing != arity => Err(LogicError::ArityMismatch {
                name,
                expected: existing,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name, arity);
                Ok(())
            }
        }
    }

    /// The vocabulary implied by an example: every predicate occurring in its
    /// atoms and every constant of its domain.
    pub fn from_example(ex: &RelationalExample) -> Result<Self, LogicError> {
        let mut vocab = Vocabulary {
            predicates: BTreeMap::new(),
            constants: ex.domain().to_vec(),
        };
        for atom in ex.atoms() {
            vocab.add_predicate(atom.predicate().to_string(), atom.args().len())?;
        }
        Ok(vocab)
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.predicates.get(predicate).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.binary_search_by(|c| c.as_str().cmp(name)).is_ok()
    }

    /// Number of ground atoms over a domain of `size` constants.
    pub fn ground_atom_count(&self, size: usize) -> Option<u128> {
        self.predicates.values().try_fold(0u128, |acc, &arity| {
            acc.checked_add((size as u128).checked_pow(arity as u32)?)
        })
    }

    /// All ground atoms over `domain`, in canonical sorted order.
    pub fn ground_atoms(&self, domain: &[Constant]) -> Vec<GroundAtom> {
        let mut out = Vec::new();
        for (name, &arity) in &self.predicates {
            if arity > 0 && domain.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; arity];
            'tuples: loop {
                out.push(GroundAtom::new(
                    name.as_str(),
                    idx.iter().map(|&i| domain[i].clone()).collect(),
                ));
                // odometer increment, last position fastest
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < domain.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        out.sort();
        out
    }

    /// Checks every atom of `ex` against the predicate table.
    pub fn check_example(&self, ex: &RelationalExample) -> Result<(), LogicError> {
        for atom in ex.atoms() {
            match self.arity(atom.predicate()) {
                None => return Err(LogicError::UnknownPredicate(atom.predicate().to_string())),
                Some(a) if a != atom.args().len() => {
                    return Err(LogicError::ArityMismatch {
                        name: atom.predicate().to_string(),
                        expected: a,
                        found: atom.args().len(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_conflicting_arity() {
        let err = Vocabulary::new([("p", 1), ("p", 2)], Vec::<&str>::new()).unwrap_err();
        assert!(matches!(err, LogicError::ArityMismatch { .. }));
    }

    #[test]
    fn rejects_duplicate_constants() {
        let err = Vocabulary::new(Vec::<(&str, usize)>::new(), ["a", "a"]).unwrap_err();
        assert_eq!(err, LogicError::DuplicateConstant("a".into()));
    }

    #[test]
    fn ground_atoms_cover_all_tuples() {
        let v = Vocabulary::new([("edge", 2), ("sm", 1), ("rain", 0)], ["a", "b"]).unwrap();
        let atoms = v.ground_atoms(v.constants());
        assert_eq!(atoms.len(), 4 + 2 + 1);
        assert_eq!(v.ground_atom_count(2), Some(7));
        let mut sorted = atoms.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), atoms.len());
    }

    #[test]
    fn empty_domain_keeps_only_nullary_atoms() {
        let v = Vocabulary::new([("sm", 1), ("rain", 0)], Vec::<&str>::new()).unwrap();
        assert_eq!(v.ground_atoms(&[]).len(), 1);
    }
}
