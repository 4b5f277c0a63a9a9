use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::generators::GeneratorSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    QExact,
    QMc,
    SampleBlocks,
    DistributionEquality,
    ExpectationIdentity,
    HoeffdingBlocks,
    TailVerify,
    ExpectedVerify,
    VarianceContrast,
    Vc,
    BoundEval,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::QExact,
        ExperimentKind::QMc,
        ExperimentKind::SampleBlocks,
        ExperimentKind::DistributionEquality,
        ExperimentKind::ExpectationIdentity,
        ExperimentKind::HoeffdingBlocks,
        ExperimentKind::TailVerify,
        ExperimentKind::ExpectedVerify,
        ExperimentKind::VarianceContrast,
        ExperimentKind::Vc,
        ExperimentKind::BoundEval,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::QExact => "q-exact",
            ExperimentKind::QMc => "q-mc",
            ExperimentKind::SampleBlocks => "sample-blocks",
            ExperimentKind::DistributionEquality => "distribution-equality",
            ExperimentKind::ExpectationIdentity => "expectation-identity",
            ExperimentKind::HoeffdingBlocks => "hoeffding-blocks",
            ExperimentKind::TailVerify => "tail-verify",
            ExperimentKind::ExpectedVerify => "expected-verify",
            ExperimentKind::VarianceContrast => "variance-contrast",
            ExperimentKind::Vc => "vc",
            ExperimentKind::BoundEval => "bound-eval",
        }
    }

    /// Process exit code for a failing verdict of this experiment.
    pub fn failure_exit_code(self) -> i32 {
        10 + Self::ALL.iter().position(|&k| k == self).expect("listed") as i32
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ExperimentError::Config(format!("unknown experiment `{s}`")))
    }
}

/// An exact number written as `a/b`, a decimal such as `0.05`, or a TOML
/// number (read through its shortest decimal form).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Number(f64),
    Text(String),
}

impl RationalInput {
    pub fn to_rational(&self) -> Result<BigRational, ExperimentError> {
        match self {
            RationalInput::Number(x) if x.is_finite() => parse_rational(&format!("{x}")),
            RationalInput::Number(x) => Err(ExperimentError::Config(format!("{x} is not a finite number"))),
            RationalInput::Text(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational, ExperimentError> {
    let bad = || ExperimentError::Config(format!("cannot read `{text}` as an exact number"));
    let s = text.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = if scale >= 0 {
        num_traits::pow(ten, scale as usize)
    } else {
        BigRational::one() / num_traits::pow(ten, (-scale) as usize)
    };
    let value = BigRational::from_integer(num) * factor;
    Ok(if neg { -value } else { value })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

/// Where the hypothesis or class comes from. `formula` is a single theory
/// (formulas joined by `;`); `description` and `file` hold a class
/// description, either `threshold <statistic>` or one theory per line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Block vectors per repetition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<RationalInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<Vec<RationalInput>>,
    /// Canonical global domain size for exact process enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aleph_size: Option<usize>,
    /// Several `[aleph_size, n, k]` instances for exact process enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<[usize; 3]>>,
    /// Replace the uniform injection by the order-preserving one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ablation: bool,
    /// VC dimension to use instead of the computed one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aleph_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_dimension: Option<usize>,
    /// `fragments` (size-k fragments of the global example) or `omega`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default)]
    pub class: ClassSection,
    #[serde(default)]
    pub params: Params,
}

pub const DEFAULT_TRIALS: u64 = 1000;

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment: ExperimentSection {
                name: kind,
                seed: 0,
                trials: None,
            },
            generator: None,
            class: ClassSection::default(),
            params: Params::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    /// Reads a config file; relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = self.generator.as_mut().and_then(|g| g.path.as_mut()) {
            fix(p);
        }
        if let Some(p) = self.class.file.as_mut() {
            fix(p);
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn kind(&self) -> ExperimentKind {
        self.experiment.name
    }

    pub fn seed(&self) -> u64 {
        self.experiment.seed
    }

    pub fn trials(&self) -> u64 {
        self.experiment.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub(crate) fn require<T: Copy>(&self, value: Option<T>, name: &str) -> Result<T, ExperimentError> {
        value.ok_or_else(|| ExperimentError::Config(format!("{} needs params.{name}", self.kind())))
    }

    pub(crate) fn generator(&self) -> Result<&GeneratorSpec, ExperimentError> {
        self.generator
            .as_ref()
            .ok_or_else(|| ExperimentError::Config(format!("{} needs a [generator] section", self.kind())))
    }

    /// The ε grid: `params.epsilon_grid`, else `params.epsilon`, else
    /// `1/20, 2/20, …, 1`.
    pub fn epsilon_grid(&self) -> Result<Vec<BigRational>, ExperimentError> {
        let grid: Vec<BigRational> = match (&self.params.epsilon_grid, &self.params.epsilon) {
            (Some(g), _) => g.iter().map(RationalInput::to_rational).collect::<Result<_, _>>()?,
            (None, Some(e)) => vec![e.to_rational()?],
            (None, None) => (1..=20).map(|i| BigRational::new(i.into(), 20.into())).collect(),
        };
        if grid.is_empty() {
            return Err(ExperimentError::Config("the epsilon grid is empty".into()));
        }
        if let Some(bad) = grid.iter().find(|e| e.is_negative()) {
            return Err(ExperimentError::Config(format!("negative epsilon {bad}")));
        }
        Ok(grid)
    }
}
