//! Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage or
//! configuration error, 3 budget exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::containers::{build_container_family, psi_sixth, verify_container_lemma};
use crate::error::{Error, NodeBudget, Result};
use crate::experiment::{
    draw_samples, run_covering_check, run_range_experiment, run_tail_experiment, run_verify_suite,
    ExperimentConfig, ExperimentResult, GlauberParams, GraphSource, LambdaSource, Mode, Sampler,
    VerifyConfig,
};
use crate::flaws::{check_b_in_a_all_anchors, conditional_tail_exact, flaw_decomposition};
use crate::gates::Constants;
use crate::graph::{to_edge_list, Graph};
use crate::lipschitz::{count_ensemble, enumerate, ground_states, kappa, EnsembleSpec, LipschitzFn};
use crate::spectral::{exhaustive_lambda, spectral_lambda, spectrum, verify_expander_props, PropsOptions};

#[derive(Parser, Debug)]
#[command(name = "lipgraph", version, about = "Lipschitz functions on regular graphs")]
pub struct Cli {
    /// JSON config (experiment and verify).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Search-node budget for exact enumeration.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print (or write to OUT/graph.txt) the edge list of a graph.
    GenGraph {
        #[arg(long)]
        graph: String,
    },
    /// Adjacency spectrum and λ certificates.
    Spectrum {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        exhaustive: bool,
        /// Also check the expander propositions.
        #[arg(long)]
        props: bool,
    },
    /// Exact ensemble size.
    Count(EnsembleArgs),
    /// Every member of the ensemble as JSON lines.
    Enumerate(EnsembleArgs),
    /// Random members as JSON lines.
    Sample {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        glauber: bool,
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long)]
        thinning: Option<u64>,
        #[arg(long)]
        chains: Option<usize>,
    },
    /// Ground states and flaw sets of a function, or exact tails with `--tail`.
    Flaws {
        #[arg(long)]
        graph: String,
        /// `{"M":..,"values":[..]}` or `@path`.
        #[arg(long)]
        function: Option<String>,
        #[arg(long, short = 'M', default_value_t = 1)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, default_value_t = 0)]
        w0: usize,
        #[arg(long, default_value = "spectral")]
        lambda_source: String,
        /// Comma-separated t values for the exact conditional tail.
        #[arg(long, value_delimiter = ',')]
        tail: Vec<u32>,
    },
    /// Container family for `H_k(v, g)`, or the count table with `--lemma`.
    Containers {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 0)]
        v: usize,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        psi: Option<f64>,
        #[arg(long, default_value = "spectral")]
        lambda_source: String,
        #[arg(long)]
        lemma: bool,
    },
    /// Configured experiment; needs `--config`.
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
    },
    /// Consolidated pass/fail/skipped matrix.
    Verify {
        /// Replaces the configured graph list.
        #[arg(long)]
        graph: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExperimentKind {
    Range,
    Tail,
    Covering,
}

#[derive(Args, Debug)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, short = 'M', default_value_t = 1)]
    pub m: u32,
    /// One-point ensemble pinned at this vertex (the default, at 0).
    #[arg(long, conflicts_with = "k")]
    pub v0: Option<usize>,
    /// Ground-state ensemble based at `k`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long, default_value = "spectral")]
    pub lambda_source: String,
}

pub enum Outcome {
    Pass,
    Fail,
}

pub fn exit_code(r: &Result<Outcome>) -> i32 {
    match r {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(Error::BudgetExceeded { .. }) => 3,
        Err(Error::Invariant(_) | Error::NoGroundState(_)) => 1,
        Err(_) => 2,
    }
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return 2;
        }
    }
    let r = run(&cli);
    if let Err(e) = &r {
        eprintln!("error: {e}");
    }
    exit_code(&r)
}

fn parse_lambda(s: &str) -> Result<LambdaSource> {
    match s {
        "spectral" => Ok(LambdaSource::Spectral),
        "exhaustive" => Ok(LambdaSource::Exhaustive),
        x => x
            .parse()
            .map(LambdaSource::Asserted)
            .map_err(|_| Error::Config(format!("λ source `{x}` is not spectral, exhaustive or a number"))),
    }
}

fn budget(cli: &Cli) -> NodeBudget {
    cli.budget.map(NodeBudget::new).unwrap_or_default()
}

fn load(spec: &str) -> Result<Graph> {
    GraphSource::parse_arg(spec)?.load()
}

fn ensemble(g: &Graph, a: &EnsembleArgs) -> Result<EnsembleSpec> {
    match a.k {
        Some(k) => {
            let p = parse_lambda(&a.lambda_source)?.profile(g)?;
            EnsembleSpec::ground_state(g, a.m, k, p.lambda)
        }
        None => Ok(EnsembleSpec::one_point(a.v0.unwrap_or(0), a.m)),
    }
}

/// Writes to `OUT/name` when `--out` is set, else to stdout.
fn emit(out: Option<&Path>, name: &str, body: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), body)?;
        }
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn jsonl(fns: impl IntoIterator<Item = Result<LipschitzFn>>) -> Result<String> {
    let mut s = String::new();
    for f in fns {
        s += &serde_json::to_string(&f?)?;
        s.push('\n');
    }
    Ok(s)
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::GenGraph { graph } => {
            emit(out, "graph.txt", &to_edge_list(&load(graph)?))?;
            Ok(Outcome::Pass)
        }
        Command::Spectrum { graph, exhaustive, props } => {
            let g = load(graph)?;
            let spectral = spectral_lambda(&g)?;
            let ex = if *exhaustive { Some(exhaustive_lambda(&g)?) } else { None };
            let profile = ex.clone().unwrap_or_else(|| spectral.clone());
            let opts = PropsOptions { seed: cli.seed.unwrap_or(0), ..PropsOptions::default() };
            let report = props.then(|| verify_expander_props(&g, &profile, &opts));
            let ok = report.as_ref().is_none_or(|r| r.all_ok());
            let body = json!({
                "graph": g.name(),
                "spectrum": spectrum(&g)?,
                "spectral": spectral,
                "exhaustive": ex,
                "props": report,
            });
            emit(out, "spectrum.json", &pretty(&body)?)?;
            Ok(verdict(ok))
        }
        Command::Count(a) => {
            let g = load(&a.graph)?;
            let r = count_ensemble(&g, &ensemble(&g, a)?, budget(cli))?;
            emit(out, "count.json", &pretty(&r)?)?;
            Ok(Outcome::Pass)
        }
        Command::Enumerate(a) => {
            let g = load(&a.graph)?;
            let body = jsonl(enumerate(&g, &ensemble(&g, a)?, budget(cli))?)?;
            emit(out, "functions.jsonl", &body)?;
            Ok(Outcome::Pass)
        }
        Command::Sample { ensemble: a, samples, glauber, burn_in, thinning, chains } => {
            let g = load(&a.graph)?;
            let spec = ensemble(&g, a)?;
            let mode = match a.k {
                Some(k) => Mode::GroundState { k },
                None => Mode::OnePoint { v0: a.v0.unwrap_or(0) },
            };
            let mut cfg = ExperimentConfig::new(GraphSource::parse_arg(&a.graph)?, a.m, mode);
            cfg.samples = *samples;
            cfg.seed = cli.seed.unwrap_or(0);
            cfg.budget = budget(cli).limit();
            if *glauber {
                cfg.sampler = Sampler::Glauber(GlauberParams { burn_in: *burn_in, thinning: *thinning, chains: *chains });
            }
            let (fns, _) = draw_samples(&cfg, &g, &spec)?;
            emit(out, "samples.jsonl", &jsonl(fns.into_iter().map(Ok))?)?;
            Ok(Outcome::Pass)
        }
        Command::Flaws { graph, function, m, k, w0, lambda_source, tail } => {
            let g = load(graph)?;
            let lambda = parse_lambda(lambda_source)?.profile(&g)?.lambda;
            if !tail.is_empty() {
                let k = k.unwrap_or(0);
                let rows = conditional_tail_exact(&g, *m, lambda, *w0, k, tail, &Constants::default(), budget(cli))?;
                let ok = rows.iter().all(|r| r.passed());
                emit(out, "tail.json", &pretty(&rows)?)?;
                return Ok(verdict(ok));
            }
            let text = function.as_deref().ok_or_else(|| Error::Config("--function or --tail is required".into()))?;
            let text = match text.strip_prefix('@') {
                Some(p) => fs::read_to_string(p)?,
                None => text.to_string(),
            };
            let f: LipschitzFn = serde_json::from_str(&text)?;
            f.check(&g)?;
            let k = match k {
                Some(k) => *k,
                None => kappa(&g, &f, lambda)?,
            };
            let (anchors, bad) = check_b_in_a_all_anchors(&g, &f, k)?;
            let body = json!({
                "ground_states": ground_states(&g, &f, lambda)?,
                "k": k,
                "decomposition": flaw_decomposition(&g, &f, *w0, k)?,
                "anchors_with_nonempty_b": anchors,
                "nesting_violation_at": bad,
            });
            emit(out, "flaws.json", &pretty(&body)?)?;
            Ok(verdict(bad.is_none()))
        }
        Command::Containers { graph, v, g: gsize, k, psi, lambda_source, lemma } => {
            let g = load(graph)?;
            let profile = parse_lambda(lambda_source)?.profile(&g)?;
            let mut b = budget(cli);
            if *lemma {
                let rows = verify_container_lemma(&g, *v, 1..=g.n() / 2, *k, &profile, &mut b)?;
                emit(out, "container_rows.json", &pretty(&rows)?)?;
                return Ok(Outcome::Pass);
            }
            let gsize = gsize.ok_or_else(|| Error::Config("--g is required without --lemma".into()))?;
            let psi = psi.unwrap_or_else(|| psi_sixth(profile.d).max(1.0));
            let fam = build_container_family(&g, *v, gsize, *k, psi, &profile, cli.seed.unwrap_or(0), &mut b)?;
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                fam.write_jsonl(fs::File::create(dir.join("family.jsonl"))?)?;
            }
            let ok = fam.covers_all && fam.greedy_bounds_hold;
            let mut summary = serde_json::to_value(&fam)?;
            summary.as_object_mut().expect("object").remove("members");
            emit(out, "family_summary.json", &pretty(&summary)?)?;
            Ok(verdict(ok))
        }
        Command::Experiment { kind } => {
            let path = cli.config.as_deref().ok_or_else(|| Error::Config("--config is required".into()))?;
            let mut cfg = ExperimentConfig::from_path(path)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(b) = cli.budget {
                cfg.budget = b;
            }
            if let Some(o) = out {
                cfg.output_dir = Some(o.to_path_buf());
            }
            let result: ExperimentResult = match kind {
                ExperimentKind::Range => run_range_experiment(&cfg)?,
                ExperimentKind::Tail => run_tail_experiment(&cfg)?,
                ExperimentKind::Covering => run_covering_check(&cfg)?,
            };
            match &cfg.output_dir {
                Some(dir) => {
                    result.write_to(dir)?;
                    eprintln!("wrote {}", dir.display());
                }
                None => result.write_csv(std::io::stdout())?,
            }
            Ok(verdict(result.passed))
        }
        Command::Verify { graph } => {
            let mut cfg = match cli.config.as_deref() {
                Some(p) => VerifyConfig::from_json(&fs::read_to_string(p)?)?,
                None => VerifyConfig::default(),
            };
            if !graph.is_empty() {
                cfg.graphs = graph.iter().map(|s| GraphSource::parse_arg(s)).collect::<Result<_>>()?;
            }
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(b) = cli.budget {
                cfg.budget = b;
            }
            let report = run_verify_suite(&cfg)?;
            print!("{}", report.render());
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("verify.json"), pretty(&report)?)?;
            }
            Ok(verdict(report.passed()))
        }
    }
}
