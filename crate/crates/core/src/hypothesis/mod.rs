//! `{0,1}`-valued functions on size-`k` relational examples and classes of
//! them: theory-backed hypotheses, integer-threshold families, reduction to
//! one representative per `k`-equivalence class, and VC dimension by
//! exhaustive shattering search.

mod equivalence;
mod vc;

pub use equivalence::{fragment_points, reduce_by_equivalence, Signature, DEFAULT_REDUCTION_CAP};
pub use vc::{vc_dimension, vc_dimension_with, VcCaps, VcResult};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::logic::{evaluate_theory, parse_theory, LogicError, RelationalExample, Theory, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypothesisError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("k must be positive")]
    ZeroK,
    #[error("k = {k} exceeds the domain size {domain}")]
    KTooLarge { k: usize, domain: usize },
    #[error("{what} of {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: u128,
    },
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("class description: {0}")]
    Description(String),
    #[error("the hypothesis class is empty")]
    EmptyClass,
}

type Evaluator = dyn Fn(&RelationalExample) -> bool + Send + Sync;

/// A labelled total function from relational examples to `{0,1}`.
#[derive(Clone)]
pub struct Hypothesis {
    label: String,
    eval: Arc<Evaluator>,
}

impl Hypothesis {
    pub fn new(label: impl Into<String>, eval: impl Fn(&RelationalExample) -> bool + Send + Sync + 'static) -> Self {
        Hypothesis {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn constant(value: bool) -> Self {
        Hypothesis::new(if value { "const:1" } else { "const:0" }, move |_| value)
    }

    /// `f_Φ`: 1 iff the example satisfies every formula of `theory`.
    pub fn from_theory(theory: Theory, k: usize) -> Result<Self, HypothesisError> {
        if k == 0 {
            return Err(HypothesisError::ZeroK);
        }
        for f in theory.formulas() {
            f.check_closed()?;
        }
        let label = if theory.formulas().is_empty() {
            "theory[]".to_string()
        } else {
            format!("theory[{theory}]")
        };
        Ok(Hypothesis::new(label, move |ex| evaluate_theory(&theory, ex)))
    }

    /// Pointwise complement.
    pub fn complement(&self) -> Self {
        let inner = self.eval.clone();
        Hypothesis {
            label: format!("not[{}]", self.label),
            eval: Arc::new(move |ex| !inner(ex)),
        }
    }

    pub fn evaluate(&self, ex: &RelationalExample) -> bool {
        (self.eval)(ex)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Hypothesis").field(&self.label).finish()
    }
}

type StatisticFn = dyn Fn(&RelationalExample) -> i64 + Send + Sync;

/// An integer-valued function of a fragment.
#[derive(Clone)]
pub struct Statistic {
    name: String,
    f: Arc<StatisticFn>,
}

impl Statistic {
    pub fn new(name: impl Into<String>, f: impl Fn(&RelationalExample) -> i64 + Send + Sync + 'static) -> Self {
        Statistic {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// Number of atoms with predicate `pred`, or of all atoms.
    pub fn atom_count(pred: Option<&str>) -> Self {
        match pred {
            Some(p) => {
                let p = p.to_string();
                Statistic::new(format!("atom-count:{p}"), move |ex| ex.count_atoms(Some(&p)) as i64)
            }
            None => Statistic::new("atom-count", |ex| ex.count_atoms(None) as i64),
        }
    }

    /// Built-in statistics by name: `atom-count` and `atom-count:<pred>`.
    pub fn builtin(name: &str) -> Result<Self, HypothesisError> {
        match name.split_once(':') {
            None if name == "atom-count" => Ok(Statistic::atom_count(None)),
            Some(("atom-count", pred)) if !pred.is_empty() => Ok(Statistic::atom_count(Some(pred))),
            _ => Err(HypothesisError::UnknownStatistic(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, ex: &RelationalExample) -> i64 {
        (self.f)(ex)
    }

    /// `Γ ↦ 1 iff statistic(Γ) ≥ t`.
    pub fn threshold(&self, t: i64) -> Hypothesis {
        let f = self.f.clone();
        Hypothesis::new(format!("{} >= {t}", self.name), move |ex| f(ex) >= t)
    }
}

impl fmt::Debug for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Statistic").field(&self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum HypothesisClass {
    Explicit(Vec<Hypothesis>),
    /// `{ Γ ↦ statistic(Γ) ≥ t : t ∈ ℤ }`, realized lazily.
    Threshold(Statistic),
}

/// The family of upper thresholds on an integer statistic.
pub fn threshold_class(statistic: Statistic) -> HypothesisClass {
    HypothesisClass::Threshold(statistic)
}

impl HypothesisClass {
    pub fn explicit(members: Vec<Hypothesis>) -> Self {
        HypothesisClass::Explicit(members)
    }

    /// A finite member list realizing every behavior of the class on
    /// `points`. For thresholds: one member per observed statistic value plus
    /// a sentinel above the maximum (the constant-0 behavior), which is exact
    /// because the statistic is integer-valued.
    pub fn effective_members(&self, points: &[RelationalExample]) -> Vec<Hypothesis> {
        match self {
            HypothesisClass::Explicit(members) => members.clone(),
            HypothesisClass::Threshold(stat) => {
                let values: Vec<i64> = points.iter().map(|p| stat.value(p)).collect();
                Self::threshold_members(stat, &values)
            }
        }
    }

    pub(crate) fn threshold_members(stat: &Statistic, values: &[i64]) -> Vec<Hypothesis> {
        let mut distinct = values.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let sentinel = distinct.last().map_or(0, |m| m.saturating_add(1));
        distinct.push(sentinel);
        distinct.into_iter().map(|t| stat.threshold(t)).collect()
    }

    pub fn describe(&self) -> String {
        match self {
            HypothesisClass::Explicit(m) => format!("explicit class of {} hypotheses", m.len()),
            HypothesisClass::Threshold(s) => format!("threshold {}", s.name()),
        }
    }

    /// Parses a class description: either a single line `threshold <statistic>`
    /// or one theory per line (formulas separated by `;`). `#` starts a
    /// comment.
    pub fn parse_description(text: &str, vocab: &Vocabulary, k: usize) -> Result<Self, HypothesisError> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        if let Some(first) = lines.first() {
            if let Some(rest) = first.strip_prefix("threshold") {
                if lines.len() > 1 {
                    return Err(HypothesisError::Description(
                        "a threshold class takes exactly one line".into(),
                    ));
                }
                return Ok(threshold_class(Statistic::builtin(rest.trim())?));
            }
        }
        if lines.is_empty() {
            return Err(HypothesisError::EmptyClass);
        }
        let members = lines
            .iter()
            .map(|l| Hypothesis::from_theory(parse_theory(l, vocab)?, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HypothesisClass::Explicit(members))
    }
}
