//! Statistics of first-order theories over relational structures whose
//! domain is sampled uniformly without replacement.
//!
//! The crate covers the whole pipeline: a small function-free logic with
//! closed-world model checking ([`logic`]), the sampling processes
//! ([`sampling`]), hypothesis classes and VC dimension ([`hypothesis`]),
//! exact and Monte Carlo estimators of fragment-satisfaction probabilities
//! ([`estimators`]), closed-form generalization bounds ([`bounds`]), seeded
//! graph generators ([`generators`]) and an experiment harness that checks
//! the bounds empirically ([`experiments`]).

pub mod bounds;
pub mod combinatorics;
pub mod estimators;
pub mod experiments;
pub mod generators;
pub mod hypothesis;
pub mod logic;
pub mod numerics;
pub mod sampling;
