//! `nodal`: JSON reports on nodal hypersurfaces and point sets.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nodal::config::{self, FuzzOptions};
use nodal::construct::{self, PipelineOptions, ScenarioCase};
use nodal::geom::DEFAULT_BUDGET;
use nodal::nodes::{self, NodalInstance};
use nodal::normality::{self, VerdictOptions};
use nodal::scalar::seeded_rng;
use nodal::{Error, FieldSpec, PointSet};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA: &str = "report-v1";

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_FACTORIAL: u8 = 10;
const EXIT_FUZZ_VIOLATIONS: u8 = 20;

#[derive(Parser)]
#[command(
    name = "nodal",
    version,
    about = "Factoriality and normality checks for nodal hypersurfaces in P^4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Field: `qq` or `fp:<p>`.
    #[arg(long)]
    field: Option<FieldSpec>,
    /// Cap on subsets visited by exhaustive searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verdict, normality report, configuration profile and per-node separators.
    Factoriality {
        instance: PathBuf,
        /// Recompute ranks over Q for rational instances.
        #[arg(long)]
        certified: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Generate an instance `x0*g + x1*f` with `(n-1)^2` listed nodes.
    Example11 {
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..=8))]
        n: u32,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Flat and curve incidences; Eisenbud-Koh and Bese checks at `--degree`.
    Config {
        points: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        /// Highest plane-curve degree to measure (plane sets only).
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Rank, defect and separability at `--degree`.
    Normality {
        points: PathBuf,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Separating forms of degree `2n - 5` for the nodes of an instance.
    Separate {
        instance: PathBuf,
        /// Only this node (default: all).
        #[arg(long)]
        label: Option<String>,
        /// Also build projection and composite certificates.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Random projections of planted sets; counts curves over the incidence budget.
    Fuzz15 {
        #[arg(long, default_value_t = 5)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Replay a synthetic septic hyperplane-split construction.
    Scenario {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        case: u8,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Serialize)]
struct RunConfig {
    command: &'static str,
    field: Option<FieldSpec>,
    seed: Option<u64>,
    degree: Option<u32>,
    inputs: Vec<PathBuf>,
    output: Option<PathBuf>,
    budget: u64,
    certified: bool,
    trials: Option<usize>,
}

impl RunConfig {
    fn new(command: &'static str, common: &Common) -> Self {
        RunConfig {
            command,
            field: common.field,
            seed: None,
            degree: None,
            inputs: Vec::new(),
            output: common.out.clone(),
            budget: common.budget,
            certified: false,
            trials: None,
        }
    }
}

struct Outcome {
    body: Value,
    exit: u8,
    summary: String,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Parse(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::InvariantViolation { .. }
            | Error::DuplicatePoint(_)
            | Error::UnknownLabel(_)
            | Error::InvalidArgument(_)
            | Error::InvalidField(_)
            | Error::FieldMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::ZeroPoint
            | Error::EmptySet
            | Error::PreconditionViolation(_),
        ) => EXIT_INPUT,
        Some(_) => EXIT_FAILURE,
        None if e.downcast_ref::<std::io::Error>().is_some() => EXIT_INPUT,
        None => EXIT_FAILURE,
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    let started = Instant::now();
    let (cfg, outcome) = match command {
        Command::Factoriality {
            instance,
            certified,
            seed,
            common,
        } => {
            let mut cfg = RunConfig::new("factoriality", &common);
            cfg.inputs.push(instance.clone());
            cfg.certified = certified;
            cfg.seed = Some(seed);
            let inst = load_instance(&instance, common.field)?;
            (
                cfg,
                cmd_factoriality(&inst, certified, seed, common.budget)?,
            )
        }
        Command::Example11 { n, seed, common } => {
            let field = common.field.unwrap_or_default_prime();
            let inst = nodes::example11(n, field, &mut seeded_rng(seed))?;
            let outcome = Outcome {
                summary: format!(
                    "generated {} nodes for n = {n}; {}",
                    inst.nodes.len(),
                    inst.notes.join("; ")
                ),
                body: serde_json::to_value(inst.to_file())?,
                exit: EXIT_OK,
            };
            // instance files are written bare, without the report envelope
            emit(&outcome.body, common.out.as_deref())?;
            eprintln!("{}", outcome.summary);
            return Ok(EXIT_OK);
        }
        Command::Config {
            points,
            degree,
            kmax,
            seed,
            common,
        } => {
            let mut cfg = RunConfig::new("config", &common);
            cfg.inputs.push(points.clone());
            cfg.degree = degree;
            cfg.seed = Some(seed);
            let set = load_points(&points, common.field)?;
            (cfg, cmd_config(&set, degree, kmax, seed, common.budget)?)
        }
        Command::Normality {
            points,
            degree,
            common,
        } => {
            let mut cfg = RunConfig::new("normality", &common);
            cfg.inputs.push(points.clone());
            cfg.degree = Some(degree);
            let set = load_points(&points, common.field)?;
            let report = normality::independent_conditions(&set, degree)?;
            let outcome = Outcome {
                summary: format!(
                    "s = {}, rank = {}, defect = {} at degree {degree}",
                    report.s, report.rank, report.defect
                ),
                body: json!({ "normality": report }),
                exit: EXIT_OK,
            };
            (cfg, outcome)
        }
        Command::Separate {
            instance,
            label,
            cross_check,
            seed,
            common,
        } => {
            let mut cfg = RunConfig::new("separate", &common);
            cfg.inputs.push(instance.clone());
            cfg.seed = Some(seed);
            let inst = load_instance(&instance, common.field)?;
            (
                cfg,
                cmd_separate(&inst, label.as_deref(), cross_check, seed, common.budget)?,
            )
        }
        Command::Fuzz15 {
            n,
            trials,
            kmax,
            seed,
            common,
        } => {
            let mut cfg = RunConfig::new("fuzz15", &common);
            cfg.seed = Some(seed);
            cfg.trials = Some(trials);
            let mut opts = FuzzOptions::new(n, trials, seed);
            opts.k_max = kmax;
            opts.budget = common.budget;
            if let Some(f) = common.field {
                opts.field = f;
            }
            cfg.field = Some(opts.field);
            let report = config::conjecture15_fuzz(opts)?;
            let outcome = Outcome {
                summary: format!(
                    "{trials} trials: {} candidate violation(s), {} resolved by re-projection",
                    report.candidate_violations, report.resolved_violations
                ),
                exit: if report.candidate_violations == 0 {
                    EXIT_OK
                } else {
                    EXIT_FUZZ_VIOLATIONS
                },
                body: json!({ "fuzz": report }),
            };
            (cfg, outcome)
        }
        Command::Scenario { case, seed, common } => {
            let mut cfg = RunConfig::new("scenario", &common);
            cfg.seed = Some(seed);
            let case = ScenarioCase::ALL[case as usize - 1];
            let report = construct::run_scenario(case, seed, common.budget.min(20_000))?;
            let outcome = Outcome {
                summary: format!(
                    "{case:?}: degree-{} separator verified on {} nodes",
                    report.certificate.degree,
                    report.certificate.evaluation_log.len() + 1
                ),
                body: json!({ "scenario": report }),
                exit: EXIT_OK,
            };
            (cfg, outcome)
        }
    };
    let mut doc = json!({
        "schema": SCHEMA,
        "config": cfg,
        "timing_ms": started.elapsed().as_millis() as u64,
        "exit_code": outcome.exit,
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, outcome.body) {
        d.extend(b);
    }
    emit(&doc, cfg.output.as_deref())?;
    eprintln!("{}", outcome.summary);
    Ok(outcome.exit)
}

trait FieldDefault {
    fn unwrap_or_default_prime(self) -> FieldSpec;
}

impl FieldDefault for Option<FieldSpec> {
    fn unwrap_or_default_prime(self) -> FieldSpec {
        self.unwrap_or_else(FieldSpec::default_prime)
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(Error::from)
        .with_context(|| format!("reading {}", path.display()))
}

/// Reduce a rational input into the requested prime field, or insist the
/// fields agree.
fn coerce_field(set: PointSet, field: Option<FieldSpec>) -> anyhow::Result<PointSet> {
    match (field, set.field()) {
        (None, _) => Ok(set),
        (Some(f), g) if f == g => Ok(set),
        (Some(FieldSpec::Prime(p)), FieldSpec::Rationals) => Ok(set.reduce_mod(p)?),
        (Some(f), g) => Err(Error::FieldMismatch {
            left: f.to_string(),
            right: g.to_string(),
        }
        .into()),
    }
}

fn load_points(path: &Path, field: Option<FieldSpec>) -> anyhow::Result<PointSet> {
    let set = PointSet::from_json(&read(path)?)?;
    coerce_field(set, field)
}

fn load_instance(path: &Path, field: Option<FieldSpec>) -> anyhow::Result<NodalInstance> {
    let inst = NodalInstance::from_json(&read(path)?)?;
    match field {
        Some(f) if f != inst.field => {
            if inst.form.is_some() {
                bail!(Error::InvalidArgument(
                    "field changes are only supported for node-only instances".into()
                ));
            }
            let nodes = coerce_field(inst.nodes, Some(f))?;
            Ok(NodalInstance::from_nodes(inst.n, nodes, inst.provenance))
        }
        _ => Ok(inst),
    }
}

fn cmd_factoriality(
    inst: &NodalInstance,
    certified: bool,
    seed: u64,
    budget: u64,
) -> anyhow::Result<Outcome> {
    let verification = nodes::verify_instance(inst)?;
    let verdict = normality::h4_rank(inst, VerdictOptions { certified, budget })?;
    // rational instances are analysed mod p unless certified
    let working = match inst.field {
        FieldSpec::Rationals if !certified => {
            inst.nodes.reduce_mod(nodal::scalar::DEFAULT_PRIME)?
        }
        _ => inst.nodes.clone(),
    };
    let normality_report = normality::independent_conditions(&working, verdict.degree)?;
    let profile = config::configuration_profile(&working, 0, budget, seed)?;
    let positions = config::node_position_bounds(inst, budget)?;
    let certificates = separators(inst, None, false, seed, budget)?;
    let exit = if verdict.factorial {
        EXIT_OK
    } else {
        EXIT_NOT_FACTORIAL
    };
    Ok(Outcome {
        summary: format!(
            "s = {}, I = {} at degree {}, h4 rank = {}: {}",
            verdict.s,
            verdict.rank,
            verdict.degree,
            verdict.h4_rank,
            if verdict.factorial {
                "factorial"
            } else {
                "not factorial"
            }
        ),
        body: json!({
            "instance": verification,
            "verdict": verdict,
            "normality": normality_report,
            "profile": profile,
            "node_positions": positions,
            "separators": certificates.0,
        }),
        exit,
    })
}

fn separators(
    inst: &NodalInstance,
    only: Option<&str>,
    cross_check: bool,
    seed: u64,
    budget: u64,
) -> anyhow::Result<(Vec<Value>, usize)> {
    let labels: Vec<String> = match only {
        Some(l) => {
            inst.nodes.index_of(l)?;
            vec![l.to_string()]
        }
        None => inst.nodes.labels().to_vec(),
    };
    let opts = PipelineOptions {
        seed,
        budget: budget.min(PipelineOptions::default().budget),
        cross_check,
    };
    let mut out = Vec::with_capacity(labels.len());
    let mut failures = 0;
    for label in &labels {
        match construct::separator_pipeline(inst, label, opts) {
            Ok(res) => out.push(json!({
                "label": label,
                "status": "certified",
                "certificate": res.certificate,
                "attempts": res.attempts,
            })),
            Err(Error::NotSeparable(_)) => {
                failures += 1;
                out.push(json!({ "label": label, "status": "not-separable" }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((out, failures))
}

fn cmd_separate(
    inst: &NodalInstance,
    label: Option<&str>,
    cross_check: bool,
    seed: u64,
    budget: u64,
) -> anyhow::Result<Outcome> {
    let (certs, failures) = separators(inst, label, cross_check, seed, budget)?;
    Ok(Outcome {
        summary: format!(
            "{} node(s): {} separated, {failures} not separable at degree {}",
            certs.len(),
            certs.len() - failures,
            2 * inst.n - 5
        ),
        body: json!({ "separators": certs }),
        exit: if failures == 0 {
            EXIT_OK
        } else {
            EXIT_NOT_FACTORIAL
        },
    })
}

fn cmd_config(
    set: &PointSet,
    degree: Option<u32>,
    kmax: u32,
    seed: u64,
    budget: u64,
) -> anyhow::Result<Outcome> {
    let profile = config::configuration_profile(set, kmax, budget, seed)?;
    let ek = degree
        .filter(|&d| d >= 2)
        .map(|d| config::eisenbud_koh_check(set, d, budget))
        .transpose()?;
    let bese = match degree {
        Some(d) if d >= 3 && set.dim() == 2 => Some(config::bese_condition(set, d, budget, seed)?),
        _ => None,
    };
    let mut summary = format!("s = {}, span rank {}", profile.s, profile.span_rank);
    if let Some(c) = &profile.max_collinear {
        summary += &format!(", max collinear {}", c.count);
    }
    if let Some(ek) = &ek {
        summary += &format!(", Eisenbud-Koh at degree {}: {}", ek.degree, ek.holds);
    }
    if let Some(b) = &bese {
        summary += &format!(", Bese at degree {}: {}", b.degree, b.holds);
    }
    Ok(Outcome {
        summary,
        body: json!({ "profile": profile, "eisenbud_koh": ek, "bese": bese }),
        exit: EXIT_OK,
    })
}
