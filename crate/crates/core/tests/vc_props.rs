mod common;

use std::collections::BTreeSet;

use common::{example, theory, FORMULAS};
use proptest::prelude::*;
use relvc::hypothesis::{fragment_points, threshold_class, vc_dimension, Hypothesis, HypothesisClass, Statistic};
use relvc::logic::RelationalExample;

fn shatters(members: &[Hypothesis], points: &[&RelationalExample]) -> bool {
    let labels: BTreeSet<Vec<bool>> = members
        .iter()
        .map(|h| points.iter().map(|p| h.evaluate(p)).collect())
        .collect();
    labels.len() == 1usize << points.len()
}

/// Largest shattered subset by exhaustive search over every subset.
fn brute_force_vc(members: &[Hypothesis], universe: &[RelationalExample]) -> usize {
    let n = universe.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let pts: Vec<&RelationalExample> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &universe[i]).collect();
            shatters(members, &pts).then_some(pts.len())
        })
        .max()
        .unwrap_or(0)
}

fn class_strategy() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..FORMULAS.len(), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_brute_force(ex in example(3, 5), picks in class_strategy(), negate in any::<u8>()) {
        let members: Vec<Hypothesis> = picks
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                let h = theory(FORMULAS[f], 2);
                if negate >> i & 1 == 1 { h.complement() } else { h }
            })
            .collect();
        let universe = fragment_points(&ex, 2, 1000).unwrap();
        prop_assume!(universe.len() <= 10);
        let r = vc_dimension(&HypothesisClass::explicit(members.clone()), &universe).unwrap();
        prop_assert!(r.exact);
        prop_assert_eq!(r.dimension, brute_force_vc(&members, &universe));
        let witness: Vec<&RelationalExample> = r.witness.iter().map(|&i| &universe[i]).collect();
        prop_assert_eq!(witness.len(), r.dimension);
        prop_assert!(shatters(&members, &witness));
        prop_assert!(r.dimension <= r.upper_bound);
    }

    #[test]
    fn subclasses_and_subuniverses_shatter_less(ex in example(3, 5), picks in class_strategy(), drop in 0usize..10) {
        let members: Vec<Hypothesis> = picks.iter().map(|&f| theory(FORMULAS[f], 2)).collect();
        let universe = fragment_points(&ex, 2, 1000).unwrap();
        let full = vc_dimension(&HypothesisClass::explicit(members.clone()), &universe).unwrap().dimension;
        let sub = vc_dimension(&HypothesisClass::explicit(members[..members.len().div_ceil(2)].to_vec()), &universe)
            .unwrap()
            .dimension;
        prop_assert!(sub <= full);
        let mut fewer = universe.clone();
        fewer.remove(drop % fewer.len());
        prop_assume!(!fewer.is_empty());
        let smaller = vc_dimension(&HypothesisClass::explicit(members), &fewer).unwrap().dimension;
        prop_assert!(smaller <= full);
    }

    #[test]
    fn thresholds_have_dimension_one(ex in example(2, 6)) {
        let universe = fragment_points(&ex, 2, 1000).unwrap();
        let r = vc_dimension(&threshold_class(Statistic::atom_count(Some("edge"))), &universe).unwrap();
        prop_assert!(r.exact);
        // any single point splits at its own count and at the sentinel; no pair can
        prop_assert_eq!(r.dimension, 1);
    }
}
