use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::config::{ExperimentConfig, ExperimentKind};
use super::report::{GridPoint, MetricValue, RunReport, Verdict};
use super::ExperimentError;
use crate::bounds::{self, BoundInputs, BoundValue};
use crate::combinatorics::{binomial, colex_rank, ColexRanker, Combinations};
use crate::estimators::{
    block_estimate, exact_q, expectation_identity_check, mc_q_parallel, rational_to_f64, ReducedClass,
    DEFAULT_EXACT_CAP,
};
use crate::generators::{GeneratorKind, GeneratorSpec, EDGE};
use crate::hypothesis::{fragment_points, vc_dimension_with, Hypothesis, HypothesisClass, Signature, VcCaps};
use crate::logic::{enumerate_omega, parse_theory, RelationalExample, Vocabulary, DEFAULT_OMEGA_CAP};
use crate::numerics::{least_squares, mean_variance};
use crate::sampling::{
    enumerate_process_distribution, sample_block_vectors_with, sample_positions, total_variation, BlockProcess,
    BlockScratch, InjectionMode, Process, SeededRng, DEFAULT_ENUMERATION_CAP,
};

const DEFAULT_VARIANCE_FORMULA: &str = "exists X Y : edge(X, Y)";

/// Runs one configured experiment.
pub fn run(config: &ExperimentConfig) -> Result<RunReport, ExperimentError> {
    let start = Instant::now();
    let mut report = RunReport::new(config);
    match config.kind() {
        ExperimentKind::QExact => q_exact(config, &mut report)?,
        ExperimentKind::QMc => q_mc(config, &mut report)?,
        ExperimentKind::SampleBlocks => sample_blocks(config, &mut report)?,
        ExperimentKind::DistributionEquality => distribution_equality(config, &mut report)?,
        ExperimentKind::ExpectationIdentity => expectation_identity(config, &mut report)?,
        ExperimentKind::HoeffdingBlocks => hoeffding_blocks(config, &mut report)?,
        ExperimentKind::TailVerify => tail_verify(config, &mut report)?,
        ExperimentKind::ExpectedVerify => expected_verify(config, &mut report)?,
        ExperimentKind::VarianceContrast => variance_contrast(config, &mut report)?,
        ExperimentKind::Vc => vc(config, &mut report)?,
        ExperimentKind::BoundEval => bound_eval(config, &mut report)?,
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn load(cfg: &ExperimentConfig) -> Result<(RelationalExample, Vocabulary), ExperimentError> {
    let spec = cfg.generator()?;
    let ex = spec.generate()?;
    let vocab = spec.vocabulary(&ex)?;
    Ok((ex, vocab))
}

fn class(cfg: &ExperimentConfig, vocab: &Vocabulary, k: usize) -> Result<HypothesisClass, ExperimentError> {
    let c = &cfg.class;
    match (&c.formula, &c.description, &c.file) {
        (Some(f), None, None) => Ok(HypothesisClass::explicit(vec![Hypothesis::from_theory(
            parse_theory(f, vocab)?,
            k,
        )?])),
        (None, Some(d), None) => Ok(HypothesisClass::parse_description(d, vocab, k)?),
        (None, None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
            Ok(HypothesisClass::parse_description(&text, vocab, k)?)
        }
        (None, None, None) => Err(ExperimentError::Config(format!(
            "{} needs a [class] section",
            cfg.kind()
        ))),
        _ => Err(ExperimentError::Config(
            "[class] takes exactly one of formula, description and file".into(),
        )),
    }
}

fn single(cfg: &ExperimentConfig, vocab: &Vocabulary, k: usize) -> Result<Hypothesis, ExperimentError> {
    match class(cfg, vocab, k)? {
        HypothesisClass::Explicit(mut m) if m.len() == 1 => Ok(m.remove(0)),
        _ => Err(ExperimentError::Config(format!(
            "{} needs a single hypothesis",
            cfg.kind()
        ))),
    }
}

/// Explicit members, or the threshold members realized on `aleph`'s
/// size-`k` fragments.
fn members(
    cfg: &ExperimentConfig,
    aleph: &RelationalExample,
    vocab: &Vocabulary,
    k: usize,
) -> Result<Vec<Hypothesis>, ExperimentError> {
    Ok(match class(cfg, vocab, k)? {
        HypothesisClass::Explicit(m) => m,
        c => c.effective_members(&fragment_points(aleph, k, DEFAULT_EXACT_CAP)?),
    })
}

fn metric_name(base: &str, h: &Hypothesis, count: usize) -> String {
    if count == 1 {
        base.to_string()
    } else {
        format!("{base}[{}]", h.label())
    }
}

/// Behavior of `f` on every size-`k` fragment of `aleph`, colex order.
fn signature_of(aleph: &RelationalExample, k: usize, f: &Hypothesis) -> Result<Signature, ExperimentError> {
    let points = fragment_points(aleph, k, DEFAULT_EXACT_CAP)?;
    Ok(Signature::from_bits(points.iter().map(|g| f.evaluate(g))))
}

fn q_exact(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let k = cfg.require(cfg.params.k, "k")?;
    let hs = members(cfg, &aleph, &vocab, k)?;
    for h in &hs {
        let q = exact_q(&aleph, k, h)?;
        report.exact(metric_name("q", h, hs.len()), &q.ratio());
    }
    Ok(())
}

fn q_mc(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let k = cfg.require(cfg.params.k, "k")?;
    let trials = cfg.trials();
    let hs = members(cfg, &aleph, &vocab, k)?;
    // two-sided Hoeffding band at confidence 1 − 1e-4
    let band = ((2.0f64 / 1e-4).ln() / (2.0 * trials as f64)).sqrt();
    report.float("hoeffding_band", band);
    report.integer("trials", trials as i64);
    for h in &hs {
        let mc = mc_q_parallel(&aleph, k, h, trials, cfg.seed())?;
        report.exact(metric_name("q_mc", h, hs.len()), &mc.ratio());
        if binomial(aleph.domain_size(), k).is_some_and(|c| c <= DEFAULT_EXACT_CAP) {
            let exact = exact_q(&aleph, k, h)?;
            report.exact(metric_name("q_exact", h, hs.len()), &exact.ratio());
            let gap = (mc.to_f64() - exact.to_f64()).abs();
            report.verdicts.push(
                Verdict::new(
                    metric_name("mc-within-band", h, hs.len()),
                    gap <= band,
                    format!("|mc − exact| = {gap} vs band {band}"),
                )
                .with_margin(band - gap),
            );
        }
    }
    Ok(())
}

fn sample_blocks(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let n = cfg.require(cfg.params.n, "n")?;
    let k = cfg.require(cfg.params.k, "k")?;
    let q = cfg.params.q.unwrap_or(1) as usize;
    let mode = if cfg.params.ablation {
        InjectionMode::OrderPreserving
    } else {
        InjectionMode::Uniform
    };
    let mut rng = SeededRng::new(cfg.seed(), 0);
    let draw = sample_block_vectors_with(aleph.domain_size(), n, k, q, mode, &mut rng)?;
    let names = |ps: &[usize]| -> Vec<String> { ps.iter().map(|&p| aleph.domain()[p].to_string()).collect() };
    report
        .artifacts
        .insert("c_upsilon".into(), json!(names(&draw.c_upsilon)));
    let vectors: Vec<Vec<Vec<String>>> = draw
        .vectors
        .iter()
        .map(|v| v.blocks.iter().map(|b| names(b)).collect())
        .collect();
    report.artifacts.insert("vectors".into(), json!(vectors));
    report.integer("blocks_per_vector", (n / k) as i64);
    report.integer("vectors", q as i64);
    let c = &cfg.class;
    if c.formula.is_some() || c.description.is_some() || c.file.is_some() {
        let h = single(cfg, &vocab, k)?;
        let est = block_estimate(&aleph, &draw.c_upsilon, &draw.vectors, &h)?;
        report.exact("block_estimate", &est.ratio());
        let upsilon = aleph.fragment_by_positions(&draw.c_upsilon);
        report.exact("q_upsilon", &exact_q(&upsilon, k, &h)?.ratio());
    }
    Ok(())
}

fn distribution_equality(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let cases = match &cfg.params.cases {
        Some(c) => c.clone(),
        None => vec![[
            cfg.require(cfg.params.aleph_size, "aleph_size")?,
            cfg.require(cfg.params.n, "n")?,
            cfg.require(cfg.params.k, "k")?,
        ]],
    };
    let mode = if cfg.params.ablation {
        report.notes.push("ablation: order-preserving injection".into());
        InjectionMode::OrderPreserving
    } else {
        InjectionMode::Uniform
    };
    for [size, n, k] in cases {
        let tag = format!("({size},{n},{k})");
        let iid = enumerate_process_distribution(size, n, k, Process::Iid, DEFAULT_ENUMERATION_CAP)?;
        let blk = enumerate_process_distribution(size, n, k, Process::Block(mode), DEFAULT_ENUMERATION_CAP)?;
        let tv = total_variation(&iid, &blk);
        report.exact(format!("tv{tag}"), &tv);
        report.integer(format!("outcomes_iid{tag}"), iid.len() as i64);
        report.integer(format!("outcomes_block{tag}"), blk.len() as i64);
        report.verdicts.push(Verdict::new(
            format!("identical-laws{tag}"),
            tv.is_zero(),
            format!("total variation {tv}"),
        ));
    }
    Ok(())
}

fn expectation_identity(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let n = cfg.require(cfg.params.n, "n")?;
    let k = cfg.require(cfg.params.k, "k")?;
    let hs = members(cfg, &aleph, &vocab, k)?;
    for h in &hs {
        let (lhs, rhs) = expectation_identity_check(&aleph, n, k, h)?;
        report.exact(metric_name("lhs", h, hs.len()), &lhs);
        report.exact(metric_name("rhs", h, hs.len()), &rhs);
        report.verdicts.push(Verdict::new(
            metric_name("lhs-equals-rhs", h, hs.len()),
            lhs == rhs,
            format!("{lhs} vs {rhs}"),
        ));
    }
    Ok(())
}

/// `|a/b − c/d| ≥ e` for non-negative integers and a rational `e`.
fn deviation_at_least(a: u128, b: u128, c: u128, d: u128, eps: &BigRational) -> bool {
    let diff = (BigInt::from(a) * BigInt::from(d) - BigInt::from(c) * BigInt::from(b)).abs();
    diff * eps.denom() >= eps.numer() * BigInt::from(b) * BigInt::from(d)
}

fn hoeffding_blocks(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let n = cfg.require(cfg.params.n, "n")?;
    let k = cfg.require(cfg.params.k, "k")?;
    let q = cfg.require(cfg.params.q, "q")?;
    let reps = cfg.trials();
    let grid = cfg.epsilon_grid()?;
    let h = single(cfg, &vocab, k)?;
    let size = aleph.domain_size();
    let sig = signature_of(&aleph, k, &h)?;
    let process = BlockProcess::new(size, n, k, InjectionMode::Uniform)?;
    let c_upsilon = sample_positions(size, n, &mut SeededRng::new(cfg.seed(), 0))?;

    let local: Vec<usize> = Combinations::new(n, k)
        .map(|s| {
            let mapped: Vec<usize> = s.iter().map(|&j| c_upsilon[j]).collect();
            colex_rank(&mapped) as usize
        })
        .collect();
    let q_hits = local.iter().filter(|&&r| sig.get(r)).count() as u128;
    let q_total = local.len() as u128;
    report.exact(
        "q_upsilon",
        &BigRational::new(BigInt::from(q_hits), BigInt::from(q_total)),
    );
    report.integer("repetitions", reps as i64);
    report.integer("q", q as i64);

    let evaluations = (q * (n / k) as u64) as u128;
    let ranker = ColexRanker::new(size, k).expect("fragment count checked");
    let hits: Vec<u64> = (0..reps)
        .into_par_iter()
        .map_init(BlockScratch::default, |scratch, r| {
            let mut rng = SeededRng::new(cfg.seed(), r + 1);
            let mut p = process.clone();
            let mut total = 0u64;
            for _ in 0..q {
                p.draw_into(&c_upsilon, &mut rng, scratch);
                total += scratch.blocks().filter(|b| sig.get(ranker.rank(b))).count() as u64;
            }
            total
        })
        .collect();
    let estimates: Vec<f64> = hits.iter().map(|&h| h as f64 / evaluations as f64).collect();
    let (mean, _) = mean_variance(&estimates);
    report.float("mean_block_estimate", mean);

    for eps in &grid {
        let count = hits
            .iter()
            .filter(|&&h| deviation_at_least(h as u128, evaluations, q_hits, q_total, eps))
            .count() as u64;
        let e = rational_to_f64(eps);
        let raw = bounds::hoeffding_block_bound(q, e)?;
        let log10 = bounds::log10_hoeffding_block_bound(q, e)?;
        report
            .grid
            .push(GridPoint::tail_check("hoeffding", eps, count, reps, raw, log10));
    }
    report.grid_verdicts("hoeffding");
    flag_vacuous(report);
    Ok(())
}

fn flag_vacuous(report: &mut RunReport) {
    let checked: Vec<&GridPoint> = report.grid.iter().filter(|g| g.pass.is_some()).collect();
    let vacuous = checked.iter().filter(|g| g.vacuous).count();
    if vacuous > 0 {
        report.notes.push(format!(
            "{vacuous} of {} checked grid points have a bound ≥ 1 and are vacuous",
            checked.len()
        ));
    }
}

struct DeviationRun {
    deviations: Vec<BigRational>,
    d: u64,
    n: usize,
    k: usize,
}

/// Sup-deviations over `trials` independent training domains, plus the VC
/// dimension used for the bounds.
fn deviation_run(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<DeviationRun, ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let n = cfg.require(cfg.params.n, "n")?;
    let k = cfg.require(cfg.params.k, "k")?;
    if n > aleph.domain_size() || k > n {
        return Err(ExperimentError::Config(format!(
            "need k ≤ n ≤ |domain|, got k = {k}, n = {n}, |domain| = {}",
            aleph.domain_size()
        )));
    }
    let class = class(cfg, &vocab, k)?;
    let reduced = ReducedClass::new(&class, &aleph, k, DEFAULT_EXACT_CAP)?;
    report.integer("representatives", reduced.len() as i64);

    let mut d = match cfg.params.d {
        Some(d) => {
            report.notes.push(format!("VC dimension set to {d} by configuration"));
            d
        }
        None => {
            let points = fragment_points(&aleph, k, DEFAULT_EXACT_CAP)?;
            let r = vc_dimension_with(&class, &points, VcCaps::default(), cfg.seed())?;
            report.integer("vc_dimension", r.dimension as i64);
            report.metric("vc_exact", MetricValue::Flag { value: r.exact });
            if !r.exact {
                report.notes.push("VC dimension is a search lower bound".into());
            }
            r.dimension as u64
        }
    };
    if d == 0 {
        report
            .notes
            .push("the class has a single behavior (d = 0); bounds are evaluated at d = 1".into());
        d = 1;
    }
    report.integer("d_used", d as i64);

    let trials = cfg.trials();
    let size = aleph.domain_size();
    let deviations = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(cfg.seed(), i);
            let c = sample_positions(size, n, &mut rng)?;
            Ok(reduced.deviation_on(&c)?.value)
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    report.integer("trials", trials as i64);
    let sum = deviations.iter().fold(BigRational::zero(), |a, b| a + b);
    report.exact(
        "mean_sup_deviation",
        &(sum / BigRational::from_integer(BigInt::from(trials))),
    );
    let max = deviations.iter().max().cloned().unwrap_or_else(BigRational::zero);
    report.exact("max_sup_deviation", &max);
    Ok(DeviationRun { deviations, d, n, k })
}

fn tail_verify(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let grid = cfg.epsilon_grid()?;
    let run = deviation_run(cfg, report)?;
    let trials = run.deviations.len() as u64;
    let (d, n, k) = (run.d, run.n as u64, run.k as u64);
    for eps in &grid {
        let count = run.deviations.iter().filter(|v| *v >= eps).count() as u64;
        let e = rational_to_f64(eps);
        let ln = bounds::ln_tail_bound(d, n, k, e)?;
        report.grid.push(GridPoint::tail_check(
            "tail",
            eps,
            count,
            trials,
            ln.exp(),
            ln / std::f64::consts::LN_10,
        ));
        let ln = bounds::ln_tail_bound_simplified(d, n, k, e)?;
        report.grid.push(GridPoint::tail_check(
            "tail-simplified",
            eps,
            count,
            trials,
            ln.exp(),
            ln / std::f64::consts::LN_10,
        ));
    }
    report.grid_verdicts("tail");
    flag_vacuous(report);
    Ok(())
}

fn expected_verify(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let run = deviation_run(cfg, report)?;
    let values: Vec<f64> = run.deviations.iter().map(rational_to_f64).collect();
    let (mean, var) = mean_variance(&values);
    let upper = mean + 3.0 * (var / values.len() as f64).sqrt();
    report.float("ci_upper", upper);
    let bound = bounds::expected_error_bound(run.d, run.n as u64, run.k as u64)?;
    report.bounds.push(BoundValue::new("expected-error", bound));
    let target = bound.min(1.0);
    let vacuous = bound >= 1.0;
    if vacuous {
        report
            .notes
            .push(format!("expected-error bound {bound} ≥ 1 is vacuous"));
    }
    report.verdicts.push(
        Verdict::new(
            "expected-sup-deviation",
            upper <= target,
            format!("mean + 3·SE = {upper} vs min(1, bound) = {target}"),
        )
        .with_margin(target - upper)
        .vacuous(vacuous),
    );
    Ok(())
}

fn variance_contrast(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let p = cfg.params.probability.unwrap_or(0.3);
    let n_grid = cfg.params.n_grid.clone().unwrap_or_else(|| vec![10, 20, 40, 80]);
    if n_grid.len() < 2 {
        return Err(ExperimentError::Config(
            "a slope needs at least two points in n_grid".into(),
        ));
    }
    let seeds = cfg.params.seeds.unwrap_or(200);
    if seeds < 2 {
        return Err(ExperimentError::Config("a variance needs at least two seeds".into()));
    }
    let max_n = *n_grid.iter().max().expect("nonempty");
    let nodes = cfg.params.aleph_nodes.unwrap_or(2 * max_n);
    let k = cfg.params.k.unwrap_or(2);
    let tol = cfg.params.slope_tolerance.unwrap_or(0.2);
    let vocab = Vocabulary::new([(EDGE, 2)], Vec::<String>::new())?;
    let formula = cfg.class.formula.as_deref().unwrap_or(DEFAULT_VARIANCE_FORMULA);
    let h = Hypothesis::from_theory(parse_theory(formula, &vocab)?, k)?;

    let mut slopes = Vec::new();
    for kind in [GeneratorKind::ErdosRenyiDirected, GeneratorKind::Broadcaster] {
        let base = GeneratorSpec {
            kind,
            ..GeneratorSpec::erdos_renyi(nodes, p, 0)
        };
        let name = serde_json::to_value(kind).expect("kind serializes");
        let name = name.as_str().expect("string");
        // per seed: Q at each n, in grid order
        let table = (0..seeds)
            .into_par_iter()
            .map(|s| {
                let seed = cfg.seed().wrapping_add(s);
                let aleph = base.with_seed(seed).generate()?;
                let mut rng = SeededRng::new(seed, 1);
                n_grid
                    .iter()
                    .map(|&n| {
                        let c = sample_positions(aleph.domain_size(), n, &mut rng)?;
                        Ok(exact_q(&aleph.fragment_by_positions(&c), k, &h)?.to_f64())
                    })
                    .collect::<Result<Vec<f64>, ExperimentError>>()
            })
            .collect::<Result<Vec<_>, ExperimentError>>()?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (j, &n) in n_grid.iter().enumerate() {
            let column: Vec<f64> = table.iter().map(|row| row[j]).collect();
            let (mean, var) = mean_variance(&column);
            report
                .grid
                .push(GridPoint::value(format!("mean:{name}"), n, n as f64, mean));
            report
                .grid
                .push(GridPoint::value(format!("variance:{name}"), n, n as f64, var));
            if var <= 0.0 {
                return Err(ExperimentError::Config(format!(
                    "zero variance for {name} at n = {n}; the log-log fit is undefined"
                )));
            }
            xs.push((n as f64).ln());
            ys.push(var.ln());
        }
        let (slope, _) = least_squares(&xs, &ys)?;
        report.float(format!("slope:{name}"), slope);
        slopes.push(slope);
    }
    let (er, bc) = (slopes[0], slopes[1]);
    let margin = bc - (er - tol);
    report.verdicts.push(
        Verdict::new(
            "broadcaster-decays-slower",
            margin >= 0.0,
            format!("slope(broadcaster) = {bc} vs slope(erdos-renyi) − {tol} = {}", er - tol),
        )
        .with_margin(margin),
    );
    Ok(())
}

fn vc(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let (aleph, vocab) = load(cfg)?;
    let k = cfg.require(cfg.params.k, "k")?;
    let class = class(cfg, &vocab, k)?;
    let universe = match cfg.params.universe.as_deref().unwrap_or("fragments") {
        "fragments" => fragment_points(&aleph, k, DEFAULT_EXACT_CAP)?,
        "omega" => enumerate_omega(&vocab, k, DEFAULT_OMEGA_CAP)?.elements().to_vec(),
        other => {
            return Err(ExperimentError::Config(format!(
                "universe must be `fragments` or `omega`, not `{other}`"
            )))
        }
    };
    let r = vc_dimension_with(&class, &universe, VcCaps::default(), cfg.seed())?;
    report.integer("universe_size", universe.len() as i64);
    report.integer("dimension", r.dimension as i64);
    report.metric("exact", MetricValue::Flag { value: r.exact });
    report.integer("upper_bound", r.upper_bound as i64);
    report.integer("distinct_points", r.distinct_points as i64);
    report.integer("distinct_members", r.distinct_members as i64);
    let witness: Vec<String> = r.witness.iter().map(|&i| universe[i].to_string()).collect();
    report.artifacts.insert("witness".into(), json!(witness));
    if let Some(expected) = cfg.params.expected_dimension {
        report.verdicts.push(Verdict::new(
            "dimension",
            r.dimension == expected,
            format!("found {} (expected {expected})", r.dimension),
        ));
    }
    Ok(())
}

fn bound_eval(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<(), ExperimentError> {
    let p = &cfg.params;
    let n = cfg.require(p.n, "n")? as u64;
    let k = cfg.require(p.k, "k")? as u64;
    let d = p.d.unwrap_or(1);
    let epsilon = p.epsilon.as_ref().map(|e| e.to_rational()).transpose()?;
    let inputs = BoundInputs {
        d,
        n,
        k,
        epsilon: epsilon.as_ref().map(rational_to_f64),
        q: p.q,
        c: p.c,
        b: p.b,
        lambda: p.lambda,
    };
    report.bounds = inputs.evaluate()?;
    let m = inputs.m()?;
    let grid = match &p.epsilon_grid {
        Some(_) => cfg.epsilon_grid()?,
        None => ExperimentConfig::new(ExperimentKind::BoundEval).epsilon_grid()?,
    };
    for eps in &grid {
        let e = rational_to_f64(eps);
        let ln10 = std::f64::consts::LN_10;
        let ln = bounds::ln_tail_bound(d, n, k, e)?;
        report.grid.push(GridPoint::bound("tail", eps, ln.exp(), ln / ln10));
        let ln = bounds::ln_tail_bound_simplified(d, n, k, e)?;
        report
            .grid
            .push(GridPoint::bound("tail-simplified", eps, ln.exp(), ln / ln10));
        let ln = bounds::ln_classical_vc_tail(d, m, e)?;
        report
            .grid
            .push(GridPoint::bound("classical-vc-tail", eps, ln.exp(), ln / ln10));
        if let Some(q) = p.q {
            report.grid.push(GridPoint::bound(
                "hoeffding-blocks",
                eps,
                bounds::hoeffding_block_bound(q, e)?,
                bounds::log10_hoeffding_block_bound(q, e)?,
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ExperimentConfig;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text).unwrap()
    }

    #[test]
    fn q_exact_on_fixture() {
        let r = run(&cfg(
            "[experiment]\nname = \"q-exact\"\n[generator]\nkind = \"smokers-probability-fixture\"\n[class]\nformula = \"forall X : sm(X)\"\n[params]\nk = 1\n",
        ))
        .unwrap();
        assert_eq!(
            r.get("q"),
            Some(&MetricValue::Exact {
                rational: "2/3".into(),
                decimal: 2.0 / 3.0
            })
        );
        assert!(r.passed());
    }

    #[test]
    fn distribution_equality_and_ablation() {
        let ok = run(&cfg(
            "[experiment]\nname = \"distribution-equality\"\n[params]\ncases = [[4, 3, 1], [5, 4, 2]]\n",
        ))
        .unwrap();
        assert!(ok.passed());
        assert_eq!(ok.verdicts.len(), 2);
        let bad = run(&cfg(
            "[experiment]\nname = \"distribution-equality\"\n[params]\naleph_size = 4\nn = 3\nk = 1\nablation = true\n",
        ))
        .unwrap();
        assert!(!bad.passed());
        assert_eq!(bad.failure_exit_code(), Some(13));
    }

    #[test]
    fn deviation_threshold_comparison() {
        let e = BigRational::new(1.into(), 10.into());
        // |3/10 − 1/5| = 1/10
        assert!(deviation_at_least(3, 10, 1, 5, &e));
        assert!(!deviation_at_least(29, 100, 1, 5, &e));
        assert!(deviation_at_least(0, 10, 0, 5, &BigRational::zero()));
    }

    #[test]
    fn single_point_grid_is_rejected() {
        let err = run(&cfg(
            "[experiment]\nname = \"variance-contrast\"\n[params]\nn_grid = [10]\n",
        ))
        .unwrap_err();
        assert!(err.to_string().contains("two points"));
    }

    #[test]
    fn constant_class_is_evaluated_at_d_one() {
        // the empty theory is the constant-1 hypothesis
        let mut c = ExperimentConfig::new(ExperimentKind::ExpectedVerify);
        c.experiment.trials = Some(50);
        c.generator = Some(GeneratorSpec::erdos_renyi(10, 0.3, 0));
        c.class.formula = Some(String::new());
        c.params.n = Some(6);
        c.params.k = Some(2);
        let r = run(&c).unwrap();
        assert!(r.passed());
        assert_eq!(r.get("vc_dimension"), Some(&MetricValue::Integer { value: 0 }));
        assert_eq!(r.get("d_used"), Some(&MetricValue::Integer { value: 1 }));
        assert!(r.notes.iter().any(|n| n.contains("d = 0")));
        assert_eq!(r.get("max_sup_deviation").and_then(MetricValue::as_f64), Some(0.0));
    }

    #[test]
    fn bound_eval_values() {
        let r = run(&cfg(
            "[experiment]\nname = \"bound-eval\"\n[params]\nd = 1\nn = 200\nk = 2\n",
        ))
        .unwrap();
        assert!((r.bounds[0].raw - 0.709_834_761_986_085_7).abs() < 1e-12);
        assert_eq!(r.grid.len(), 60);
    }
}
