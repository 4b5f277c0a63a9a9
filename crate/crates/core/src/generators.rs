//! Seeded global examples: directed Erdős–Rényi graphs, broadcaster graphs,
//! the smokers fixtures, and examples read from files.
//!
//! Random generators visit ordered pairs `(u, v)` of the sorted domain
//! (`u ≠ v`) in lexicographic order, drawing one uniform `f64` per decision
//! from stream 0 of the seed.

use std::path::PathBuf;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{GroundAtom, LogicError, RelationalExample, Vocabulary};
use crate::sampling::SeededRng;

pub const EDGE: &str = "edge";

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("generator `{0}` needs a `{1}` field")]
    MissingField(&'static str, &'static str),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    ErdosRenyiDirected,
    Broadcaster,
    SmokersFixture,
    SmokersProbabilityFixture,
    ExplicitFile,
}

/// Everything needed to rebuild a global example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    #[serde(default)]
    pub nodes: Option<usize>,
    /// Edge probability for Erdős–Rényi, broadcast probability for
    /// broadcaster graphs.
    #[serde(default)]
    pub probability: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

impl GeneratorSpec {
    pub fn erdos_renyi(nodes: usize, p: f64, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::ErdosRenyiDirected,
            nodes: Some(nodes),
            probability: Some(p),
            seed,
            path: None,
        }
    }

    pub fn broadcaster(nodes: usize, q: f64, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Broadcaster,
            ..Self::erdos_renyi(nodes, q, seed)
        }
    }

    pub fn fixture(kind: GeneratorKind) -> Self {
        GeneratorSpec {
            kind,
            nodes: None,
            probability: None,
            seed: 0,
            path: None,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorSpec { seed, ..self.clone() }
    }

    pub fn with_nodes(&self, nodes: usize) -> Self {
        GeneratorSpec {
            nodes: Some(nodes),
            ..self.clone()
        }
    }

    /// The example's own vocabulary plus the predicates the generator can
    /// emit, so formulas over a sparse draw still parse.
    pub fn vocabulary(&self, ex: &RelationalExample) -> Result<Vocabulary, LogicError> {
        let mut vocab = Vocabulary::from_example(ex)?;
        match self.kind {
            GeneratorKind::ErdosRenyiDirected | GeneratorKind::Broadcaster => vocab.add_predicate(EDGE.into(), 2)?,
            GeneratorKind::SmokersFixture | GeneratorKind::SmokersProbabilityFixture => {
                vocab.add_predicate("fr".into(), 2)?;
                vocab.add_predicate("sm".into(), 1)?;
            }
            GeneratorKind::ExplicitFile => {}
        }
        Ok(vocab)
    }

    pub fn generate(&self) -> Result<RelationalExample, GeneratorError> {
        let graph = |name| -> Result<(usize, f64), GeneratorError> {
            Ok((
                self.nodes.ok_or(GeneratorError::MissingField(name, "nodes"))?,
                self.probability
                    .ok_or(GeneratorError::MissingField(name, "probability"))?,
            ))
        };
        match self.kind {
            GeneratorKind::ErdosRenyiDirected => {
                let (n, p) = graph("erdos-renyi-directed")?;
                erdos_renyi_directed(n, p, self.seed)
            }
            GeneratorKind::Broadcaster => {
                let (n, q) = graph("broadcaster")?;
                broadcaster(n, q, self.seed)
            }
            GeneratorKind::SmokersFixture => Ok(smokers_fixture()),
            GeneratorKind::SmokersProbabilityFixture => Ok(smokers_probability_fixture()),
            GeneratorKind::ExplicitFile => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or(GeneratorError::MissingField("explicit-file", "path"))?;
                let text = std::fs::read_to_string(path).map_err(|source| GeneratorError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(RelationalExample::parse_text(&text)?)
            }
        }
    }
}

fn check(nodes: usize, p: f64) -> Result<Vec<String>, GeneratorError> {
    if nodes == 0 {
        return Err(GeneratorError::NoNodes);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::Probability(p));
    }
    let mut names: Vec<String> = (0..nodes).map(|i| format!("v{i}")).collect();
    names.sort();
    Ok(names)
}

fn edge(u: &str, v: &str) -> GroundAtom {
    GroundAtom::of(EDGE, &[u, v])
}

/// Each ordered pair of distinct nodes carries an edge independently with
/// probability `p`.
pub fn erdos_renyi_directed(nodes: usize, p: f64, seed: u64) -> Result<RelationalExample, GeneratorError> {
    let names = check(nodes, p)?;
    let mut rng = SeededRng::new(seed, 0);
    let mut atoms = Vec::new();
    for u in &names {
        for v in &names {
            if u != v && rng.random::<f64>() < p {
                atoms.push(edge(u, v));
            }
        }
    }
    Ok(RelationalExample::new(atoms, names)?)
}

/// Each node independently, with probability `q`, has edges to every other
/// node and otherwise none.
pub fn broadcaster(nodes: usize, q: f64, seed: u64) -> Result<RelationalExample, GeneratorError> {
    let names = check(nodes, q)?;
    let mut rng = SeededRng::new(seed, 0);
    let mut atoms = Vec::new();
    for u in &names {
        if rng.random::<f64>() < q {
            atoms.extend(names.iter().filter(|v| *v != u).map(|v| edge(u, v)));
        }
    }
    Ok(RelationalExample::new(atoms, names)?)
}

/// Friendships among alice, bob and eve; alice is the only smoker.
pub fn smokers_fixture() -> RelationalExample {
    RelationalExample::new(
        [
            GroundAtom::of("fr", &["alice", "bob"]),
            GroundAtom::of("fr", &["bob", "alice"]),
            GroundAtom::of("fr", &["bob", "eve"]),
            GroundAtom::of("fr", &["eve", "bob"]),
            GroundAtom::of("sm", &["alice"]),
        ],
        ["alice", "bob", "eve"],
    )
    .expect("fixture is well formed")
}

/// `{fr(alice,bob), sm(alice), sm(eve)}` over alice, bob and eve.
pub fn smokers_probability_fixture() -> RelationalExample {
    RelationalExample::new(
        [
            GroundAtom::of("fr", &["alice", "bob"]),
            GroundAtom::of("sm", &["alice"]),
            GroundAtom::of("sm", &["eve"]),
        ],
        ["alice", "bob", "eve"],
    )
    .expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::logic::Constant;

    #[test]
    fn extremes() {
        assert!(erdos_renyi_directed(6, 0.0, 1).unwrap().atoms().is_empty());
        assert_eq!(erdos_renyi_directed(6, 1.0, 1).unwrap().atoms().len(), 30);
        assert!(broadcaster(6, 0.0, 1).unwrap().atoms().is_empty());
        assert_eq!(broadcaster(6, 1.0, 1).unwrap().atoms().len(), 30);
        assert!(erdos_renyi_directed(0, 0.5, 1).is_err());
        assert!(broadcaster(3, 1.5, 1).is_err());
    }

    #[test]
    fn no_self_loops_and_broadcast_degrees() {
        let g = broadcaster(12, 0.4, 9).unwrap();
        for c in g.domain() {
            let out = g.atoms().iter().filter(|a| &a.args()[0] == c).count();
            assert!(out == 0 || out == 11);
        }
        let er = erdos_renyi_directed(12, 0.5, 9).unwrap();
        assert!(er.atoms().iter().chain(g.atoms()).all(|a| a.args()[0] != a.args()[1]));
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let spec = GeneratorSpec::erdos_renyi(20, 0.3, 42);
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        assert_ne!(spec.generate().unwrap(), spec.with_seed(43).generate().unwrap());
    }

    #[test]
    fn smokers_fragment() {
        let ex = smokers_fixture();
        assert_eq!((ex.atoms().len(), ex.domain_size()), (5, 3));
        let s: BTreeSet<Constant> = ["alice", "bob"].into_iter().map(Constant::from).collect();
        let frag = ex.fragment(&s).unwrap();
        let expected = RelationalExample::new(
            [
                GroundAtom::of("fr", &["alice", "bob"]),
                GroundAtom::of("fr", &["bob", "alice"]),
                GroundAtom::of("sm", &["alice"]),
            ],
            ["alice", "bob"],
        )
        .unwrap();
        assert_eq!(frag, expected);
    }

    #[test]
    fn spec_round_trip_and_missing_fields() {
        let spec: GeneratorSpec =
            toml::from_str("kind = \"broadcaster\"\nnodes = 5\nprobability = 0.5\nseed = 3\n").unwrap();
        assert_eq!(spec, GeneratorSpec::broadcaster(5, 0.5, 3));
        let bad = GeneratorSpec::fixture(GeneratorKind::ErdosRenyiDirected);
        assert!(matches!(bad.generate(), Err(GeneratorError::MissingField(_, "nodes"))));
        assert!(GeneratorSpec::fixture(GeneratorKind::ExplicitFile).generate().is_err());
    }

    #[test]
    fn empty_graph_vocabulary_knows_edge() {
        let spec = GeneratorSpec::erdos_renyi(4, 0.0, 0);
        let vocab = spec.vocabulary(&spec.generate().unwrap()).unwrap();
        assert_eq!(vocab.arity(EDGE), Some(2));
    }

    #[test]
    fn explicit_file() {
        let dir = std::env::temp_dir().join(format!("relvc-gen-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.txt");
        std::fs::write(&path, smokers_fixture().to_text()).unwrap();
        let spec = GeneratorSpec {
            path: Some(path),
            ..GeneratorSpec::fixture(GeneratorKind::ExplicitFile)
        };
        assert_eq!(spec.generate().unwrap(), smokers_fixture());
        std::fs::remove_dir_all(dir).ok();
    }
}
