#![allow(dead_code)]

use proptest::prelude::*;
use relvc::hypothesis::Hypothesis;
use relvc::logic::{parse_theory, GroundAtom, RelationalExample, Vocabulary};

pub const FORMULAS: [&str; 8] = [
    "exists X Y : edge(X, Y)",
    "forall X : sm(X)",
    "exists X : sm(X) & ~edge(X, X)",
    "forall X Y : edge(X, Y) -> edge(Y, X)",
    "exists X : forall Y : edge(X, Y) | sm(Y)",
    "forall X : sm(X) -> exists Y : edge(X, Y)",
    "~(exists X : sm(X))",
    "exists X Y : edge(X, Y) & edge(Y, X) & ~sm(X)",
];

pub fn vocab() -> Vocabulary {
    Vocabulary::new([("sm", 1), ("edge", 2)], Vec::<String>::new()).unwrap()
}

pub fn theory(text: &str, k: usize) -> Hypothesis {
    Hypothesis::from_theory(parse_theory(text, &vocab()).unwrap(), k).unwrap()
}

pub fn build(size: usize, smokers: &[bool], edges: &[bool]) -> RelationalExample {
    let names: Vec<String> = (0..size).map(|i| format!("c{i}")).collect();
    let mut atoms = Vec::new();
    for (i, a) in names.iter().enumerate() {
        if smokers[i] {
            atoms.push(GroundAtom::of("sm", &[a]));
        }
        for (j, b) in names.iter().enumerate() {
            if edges[i * size + j] {
                atoms.push(GroundAtom::of("edge", &[a, b]));
            }
        }
    }
    RelationalExample::new(atoms, names).unwrap()
}

/// Random examples over `sm/1` and `edge/2` with `lo..=hi` constants.
pub fn example(lo: usize, hi: usize) -> impl Strategy<Value = RelationalExample> {
    (lo..=hi).prop_flat_map(|size| {
        (
            proptest::collection::vec(any::<bool>(), size),
            proptest::collection::vec(proptest::bool::weighted(0.35), size * size),
        )
            .prop_map(move |(s, e)| build(size, &s, &e))
    })
}

/// Sorted positions of a random nonempty subset of `0..size`.
pub fn subset_of(size: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence((0..size).collect::<Vec<_>>(), 1..=size)
}
