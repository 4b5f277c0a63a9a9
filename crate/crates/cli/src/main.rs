use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use relvc::experiments::{self, ExperimentConfig, ExperimentKind, RationalInput, RunReport};
use relvc::generators::{GeneratorKind, GeneratorSpec};

/// Exact and Monte Carlo statistics of first-order theories on sampled
/// relational examples, and empirical checks of their generalization bounds.
#[derive(Debug, Parser)]
#[command(name = "relvc", version)]
struct Cli {
    /// Base seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trial count; overrides the config file.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// TOML experiment config (sections experiment, generator, class, params).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact Q: the fraction of size-k fragments satisfying a theory.
    QExact {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Monte Carlo Q over uniformly drawn size-k fragments.
    QMc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Draw a training domain and block vectors from it.
    SampleBlocks {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Number of block vectors.
        #[arg(long)]
        q: Option<u64>,
        /// Use the order-preserving injection instead of a uniform one.
        #[arg(long)]
        ablation: bool,
    },
    /// VC dimension of a class on the size-k fragments of an example.
    Vc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        k: Option<usize>,
        /// Shatter Ω(L, k) instead of the example's fragments.
        #[arg(long)]
        omega: bool,
    },
    /// Evaluate the closed-form bounds.
    Bound {
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        epsilon: Option<String>,
        /// Block vectors for the Hoeffding bound.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run a named experiment; parameters come from --config.
    Experiment {
        /// One of: q-exact, q-mc, sample-blocks, distribution-equality,
        /// expectation-identity, hoeffding-blocks, tail-verify,
        /// expected-verify, variance-contrast, vc, bound-eval.
        name: Option<String>,
    },
}

/// Where the global example comes from.
#[derive(Debug, Args)]
struct Source {
    /// Example file in the text format (`domain: ...` plus one atom per line).
    #[arg(long, conflicts_with = "generator")]
    example: Option<PathBuf>,
    #[arg(long, value_enum)]
    generator: Option<GeneratorArg>,
    #[arg(long)]
    nodes: Option<usize>,
    /// Edge or broadcast probability.
    #[arg(long)]
    probability: Option<f64>,
    /// Generator seed (defaults to --seed).
    #[arg(long)]
    graph_seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GeneratorArg {
    ErdosRenyi,
    Broadcaster,
    Smokers,
    SmokersProbability,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// A theory; formulas separated by `;`.
    #[arg(long, conflicts_with_all = ["class_file", "threshold"])]
    formula: Option<String>,
    /// Class description file: `threshold <statistic>` or one theory per line.
    #[arg(long, conflicts_with = "threshold")]
    class_file: Option<PathBuf>,
    /// Threshold class on a statistic such as `atom-count:edge`.
    #[arg(long)]
    threshold: Option<String>,
}

impl Source {
    fn apply(&self, cfg: &mut ExperimentConfig, seed: u64) {
        if let Some(path) = &self.example {
            cfg.generator = Some(GeneratorSpec {
                path: Some(path.clone()),
                ..GeneratorSpec::fixture(GeneratorKind::ExplicitFile)
            });
        } else if let Some(g) = self.generator {
            let kind = match g {
                GeneratorArg::ErdosRenyi => GeneratorKind::ErdosRenyiDirected,
                GeneratorArg::Broadcaster => GeneratorKind::Broadcaster,
                GeneratorArg::Smokers => GeneratorKind::SmokersFixture,
                GeneratorArg::SmokersProbability => GeneratorKind::SmokersProbabilityFixture,
            };
            cfg.generator = Some(GeneratorSpec {
                kind,
                nodes: self.nodes,
                probability: self.probability,
                seed: self.graph_seed.unwrap_or(seed),
                path: None,
            });
        } else if let Some(spec) = cfg.generator.as_mut() {
            spec.nodes = self.nodes.or(spec.nodes);
            spec.probability = self.probability.or(spec.probability);
            if let Some(s) = self.graph_seed {
                spec.seed = s;
            }
        }
    }
}

impl ClassArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        let set = self.formula.is_some() || self.class_file.is_some() || self.threshold.is_some();
        if !set {
            return;
        }
        cfg.class = Default::default();
        cfg.class.formula = self.formula.clone();
        cfg.class.file = self.class_file.clone();
        cfg.class.description = self.threshold.as_ref().map(|t| format!("threshold {t}"));
    }
}

fn base_config(cli: &Cli, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => ExperimentConfig::new(kind),
    };
    cfg.experiment.name = kind;
    if let Some(seed) = cli.seed {
        cfg.experiment.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.experiment.trials = Some(trials);
    }
    Ok(cfg)
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig> {
    let seed = cli.seed.unwrap_or(0);
    let cfg = match &cli.command {
        Command::QExact { source, class, k } | Command::QMc { source, class, k } => {
            let kind = if matches!(cli.command, Command::QExact { .. }) {
                ExperimentKind::QExact
            } else {
                ExperimentKind::QMc
            };
            let mut cfg = base_config(cli, kind)?;
            source.apply(&mut cfg, seed);
            class.apply(&mut cfg);
            cfg.params.k = k.or(cfg.params.k);
            cfg
        }
        Command::SampleBlocks {
            source,
            class,
            n,
            k,
            q,
            ablation,
        } => {
            let mut cfg = base_config(cli, ExperimentKind::SampleBlocks)?;
            source.apply(&mut cfg, seed);
            class.apply(&mut cfg);
            cfg.params.n = n.or(cfg.params.n);
            cfg.params.k = k.or(cfg.params.k);
            cfg.params.q = q.or(cfg.params.q);
            cfg.params.ablation |= ablation;
            cfg
        }
        Command::Vc {
            source,
            class,
            k,
            omega,
        } => {
            let mut cfg = base_config(cli, ExperimentKind::Vc)?;
            source.apply(&mut cfg, seed);
            class.apply(&mut cfg);
            cfg.params.k = k.or(cfg.params.k);
            if *omega {
                cfg.params.universe = Some("omega".into());
            }
            cfg
        }
        Command::Bound {
            d,
            n,
            k,
            epsilon,
            q,
            c,
            b,
            lambda,
        } => {
            let mut cfg = base_config(cli, ExperimentKind::BoundEval)?;
            let p = &mut cfg.params;
            p.d = Some(*d);
            p.n = Some(*n as usize);
            p.k = Some(*k as usize);
            p.epsilon = epsilon.clone().map(RationalInput::Text).or(p.epsilon.take());
            p.q = q.or(p.q);
            p.c = c.or(p.c);
            p.b = b.or(p.b);
            p.lambda = lambda.or(p.lambda);
            cfg
        }
        Command::Experiment { name } => {
            let kind = match (name, &cli.config) {
                (Some(name), _) => name.parse::<ExperimentKind>()?,
                (None, Some(path)) => ExperimentConfig::load(path)?.kind(),
                (None, None) => bail!("give an experiment name or --config"),
            };
            base_config(cli, kind)?
        }
    };
    Ok(cfg)
}

fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Plot => report.to_plot_data(),
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let cfg = build_config(cli)?;
    let report = experiments::run(&cfg)?;
    let text = render(&report, cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    for v in &report.verdicts {
        eprintln!("{:<14} {}  {}", v.label(), v.name, v.detail);
    }
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    Ok(report.failure_exit_code().unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
