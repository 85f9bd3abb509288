//! Configured experiments over sampled or enumerated Lipschitz functions,
//! their CSV/JSON outputs and the consolidated verification matrix.

mod config;
mod verify;

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{
    ExperimentConfig, GlauberParams, GraphFile, GraphSource, LambdaSource, Mode, Sampler, Schedule,
    SCHEMA_VERSION,
};
pub use verify::{run_verify_suite, VerifyConfig, VerifyReport, VerifyRow, VerifyStatus};

use crate::error::{Error, NodeBudget, Result};
use crate::flaws::{conditional_tail_exact, TailReport};
use crate::gates::{self, gate, range_probability_bound, range_threshold, tail_bound, Constants};
use crate::graph::{ball, Graph};
use crate::lipschitz::{count_ensemble, EnsembleSpec, ExactSampler, GlauberChain, LipschitzFn};
use crate::spectral::ExpanderProfile;

/// One sampled function, reduced to what the CSV keeps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub sample_id: usize,
    pub range: i64,
    pub min: i64,
    pub max: i64,
    pub probe_values: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub graph: String,
    pub profile: ExpanderProfile,
    #[serde(rename = "M")]
    pub m: u32,
    pub k: i64,
    pub v0: usize,
    pub flaw_cap: usize,
    /// `|Lip*_k|`.
    pub lhs: String,
    /// `|Lip_{v0}|`.
    pub onepoint: String,
    /// `(M+1)·|Lip_{v0}|`.
    pub rhs: String,
    pub holds: bool,
    pub lambda_le_d_over_5: bool,
    pub asserted: bool,
    pub shifted_k: i64,
    pub lhs_shifted: String,
    pub shift_invariant: bool,
}

impl CoveringReport {
    pub fn passed(&self) -> bool {
        (!self.asserted || self.holds) && self.shift_invariant
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "rows", rename_all = "kebab-case")]
pub enum Records {
    Samples { probes: Vec<usize>, samples: Vec<SampleRecord> },
    Tail(Vec<TailReport>),
    Covering(Vec<CoveringReport>),
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub records: Records,
    pub summary: Value,
    /// False when an asserted inequality failed.
    pub passed: bool,
}

impl ExperimentResult {
    pub fn csv_header(&self) -> Vec<String> {
        let cols: &[&str] = match &self.records {
            Records::Samples { probes, .. } => {
                let mut h: Vec<String> =
                    ["sample_id", "range", "min", "max", "value_at_probe_vertex"].map(String::from).to_vec();
                h.extend((1..probes.len()).map(|i| format!("value_at_probe_vertex_{i}")));
                return h;
            }
            Records::Tail(_) => &[
                "w0", "k", "t", "M", "favorable", "total", "probability", "ball_size", "bound",
                "gate_holds", "asserted", "satisfied",
            ],
            Records::Covering(_) => &[
                "graph", "n", "d", "lambda", "M", "k", "v0", "flaw_cap", "lhs", "onepoint", "rhs",
                "holds", "lambda_le_d_over_5", "asserted", "shifted_k", "lhs_shifted", "shift_invariant",
            ],
        };
        cols.iter().map(|s| s.to_string()).collect()
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        match &self.records {
            Records::Samples { samples, .. } => samples
                .iter()
                .map(|s| {
                    let mut row = vec![s.sample_id.to_string(), s.range.to_string(), s.min.to_string(), s.max.to_string()];
                    row.extend(s.probe_values.iter().map(i64::to_string));
                    row
                })
                .collect(),
            Records::Tail(rows) => rows
                .iter()
                .map(|r| {
                    vec![
                        r.w0.to_string(),
                        r.k.to_string(),
                        r.t.to_string(),
                        r.m.to_string(),
                        r.favorable.clone(),
                        r.total.clone(),
                        r.probability.to_string(),
                        r.ball_size.to_string(),
                        r.bound.to_string(),
                        r.gate.holds.to_string(),
                        r.asserted.to_string(),
                        r.satisfied.to_string(),
                    ]
                })
                .collect(),
            Records::Covering(rows) => rows
                .iter()
                .map(|r| {
                    vec![
                        r.graph.clone(),
                        r.profile.n.to_string(),
                        r.profile.d.to_string(),
                        r.profile.lambda.to_string(),
                        r.m.to_string(),
                        r.k.to_string(),
                        r.v0.to_string(),
                        r.flaw_cap.to_string(),
                        r.lhs.clone(),
                        r.onepoint.clone(),
                        r.rhs.clone(),
                        r.holds.to_string(),
                        r.lambda_le_d_over_5.to_string(),
                        r.asserted.to_string(),
                        r.shifted_k.to_string(),
                        r.lhs_shifted.clone(),
                        r.shift_invariant.to_string(),
                    ]
                })
                .collect(),
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.csv_header())?;
        for row in self.csv_rows() {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// `results.csv` and `summary.json`; the wall-clock time goes only into
    /// the summary's `metadata` field.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write_csv(fs::File::create(dir.join("results.csv"))?)?;
        let mut summary = self.summary.clone();
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        summary["metadata"] = json!({ "written_at_unix": secs });
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
        Ok(())
    }
}

fn provenance(cfg: &ExperimentConfig) -> Value {
    json!({
        "config_sha256": cfg.hash(),
        "seed": cfg.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
    })
}

/// The expander profile when the graph is regular; `None` otherwise unless a
/// ground-state quantity needs it.
fn resolve_profile(cfg: &ExperimentConfig, g: &Graph) -> Result<Option<ExpanderProfile>> {
    match g.regular_degree() {
        Some(_) => cfg.lambda_source.profile(g).map(Some),
        None if matches!(cfg.mode, Mode::GroundState { .. }) => Err(Error::NotRegular),
        None => Ok(None),
    }
}

/// Draws `cfg.samples` members of `spec`. Glauber chains run in parallel on
/// separate seed streams and are concatenated in stream order, so the output
/// does not depend on the thread count.
pub fn draw_samples(cfg: &ExperimentConfig, g: &Graph, spec: &EnsembleSpec) -> Result<(Vec<LipschitzFn>, Value)> {
    match cfg.sampler {
        Sampler::Exact => {
            let mut s = ExactSampler::new(g, spec, cfg.seed, cfg.node_budget())?;
            let fns = (0..cfg.samples).map(|_| s.draw()).collect::<Result<Vec<_>>>()?;
            Ok((fns, json!({ "sampler": "exact", "ensemble_size": s.ensemble_size().to_string() })))
        }
        Sampler::Glauber(params) => {
            let sched = params.schedule(g.n(), cfg.m);
            let per = |j: usize| cfg.samples / sched.chains + usize::from(j < cfg.samples % sched.chains);
            let chunks = (0..sched.chains)
                .into_par_iter()
                .map(|j| {
                    let mut chain = GlauberChain::with_stream(g, spec, cfg.seed, j as u64)?;
                    chain.run(sched.burn_in);
                    let mut out = Vec::with_capacity(per(j));
                    for _ in 0..per(j) {
                        chain.run(sched.thinning);
                        out.push(chain.state());
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?;
            let info = json!({ "sampler": "glauber", "schedule": sched, "heuristic": true });
            Ok((chunks.into_iter().flatten().collect(), info))
        }
    }
}

fn mean_var(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    if n == 0.0 {
        return (0.0, 0.0);
    }
    let mean = xs.clone().sum::<f64>() / n;
    let var = if n > 1.0 { xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

/// Empirical `P(R ≥ r)` for `r = 1..=max R`.
pub fn range_tail_curve(ranges: &[i64]) -> Vec<(i64, f64)> {
    let top = ranges.iter().copied().max().unwrap_or(0);
    let n = ranges.len() as f64;
    (1..=top).map(|r| (r, ranges.iter().filter(|&&x| x >= r).count() as f64 / n)).collect()
}

/// Samples the configured ensemble and records ranges and probe values.
/// Theorem-level thresholds are shown next to the data only when the
/// hypothesis gate holds; nothing is asserted.
pub fn run_range_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let g = cfg.load_graph()?;
    let profile = resolve_profile(cfg, &g)?;
    let spec = cfg.ensemble(&g, profile.as_ref())?;
    let probes = cfg.probe_vertices();
    let (fns, sampler) = draw_samples(cfg, &g, &spec)?;
    let samples: Vec<SampleRecord> = fns
        .iter()
        .enumerate()
        .map(|(i, f)| SampleRecord {
            sample_id: i,
            range: f.range(),
            min: f.min_value(),
            max: f.max_value(),
            probe_values: probes.iter().map(|&p| f.value(p)).collect(),
        })
        .collect();

    let ranges: Vec<i64> = samples.iter().map(|s| s.range).collect();
    let (mean_range, var_range) = mean_var(ranges.iter().map(|&r| r as f64));
    let curve: Vec<Value> = range_tail_curve(&ranges).into_iter().map(|(r, p)| json!({"r": r, "p_ge": p})).collect();
    let scale = profile.as_ref().and_then(|p| gates::variance_scale(p.d, p.lambda, cfg.m));
    let probe_stats: Vec<Value> = probes
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (mean, var) = mean_var(samples.iter().map(|s| s.probe_values[i] as f64));
            json!({"vertex": v, "mean": mean, "variance": var, "variance_ratio": scale.map(|s| var / s)})
        })
        .collect();
    let theorem = profile.as_ref().map(|p| range_theorem_row(p, cfg.m, &cfg.constants, &ranges));

    let summary = json!({
        "experiment": "range",
        "graph": g.name(),
        "n": g.n(),
        "profile": profile,
        "M": cfg.m,
        "samples": samples.len(),
        "sampling": sampler,
        "aggregates": {
            "mean_range": mean_range,
            "range_variance": var_range,
            "range_tail": curve,
            "probes": probe_stats,
            "variance_scale": scale,
        },
        "theorem": theorem,
        "provenance": provenance(cfg),
    });
    Ok(ExperimentResult { records: Records::Samples { probes, samples }, summary, passed: true })
}

fn range_theorem_row(p: &ExpanderProfile, m: u32, k: &Constants, ranges: &[i64]) -> Value {
    let gt = gate(p.n, p.d, p.lambda, m, k);
    let threshold = if gt.holds { range_threshold(p.n, p.d, p.lambda, m, k) } else { None };
    let empirical = threshold
        .map(|t| ranges.iter().filter(|&&r| r as f64 >= t).count() as f64 / ranges.len().max(1) as f64);
    json!({
        "gate": gt,
        "threshold": threshold,
        "empirical_p_ge_threshold": empirical,
        "probability_bound": range_probability_bound(p.n, k),
        "asserted": false,
    })
}

/// Tail of `f(w0)` above the ground-state window for `t` in `cfg.t_values`,
/// with `w0` the first probe. The exact sampler counts the ensemble
/// exhaustively; Glauber gives estimates that are never asserted.
pub fn run_tail_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let Mode::GroundState { k } = cfg.mode else {
        return Err(Error::Config("the tail experiment needs ground-state mode".into()));
    };
    let g = cfg.load_graph()?;
    let profile = resolve_profile(cfg, &g)?.ok_or(Error::NotRegular)?;
    let w0 = cfg.probe_vertices()[0];
    let (rows, method) = match cfg.sampler {
        Sampler::Exact => (
            conditional_tail_exact(&g, cfg.m, profile.lambda, w0, k, &cfg.t_values, &cfg.constants, cfg.node_budget())?,
            json!({"sampler": "exact"}),
        ),
        Sampler::Glauber(_) => {
            let spec = cfg.ensemble(&g, Some(&profile))?;
            let (fns, info) = draw_samples(cfg, &g, &spec)?;
            (empirical_tail(&g, &profile, cfg, w0, k, &fns)?, info)
        }
    };
    let monotone = rows.windows(2).all(|w| w[0].t > w[1].t || w[1].probability <= w[0].probability);
    let passed = rows.iter().all(TailReport::passed);
    let summary = json!({
        "experiment": "tail",
        "graph": g.name(),
        "profile": profile,
        "M": cfg.m,
        "k": k,
        "w0": w0,
        "sampling": method,
        "rows": rows,
        "nonincreasing_in_t": monotone,
        "passed": passed,
        "provenance": provenance(cfg),
    });
    Ok(ExperimentResult { records: Records::Tail(rows), summary, passed })
}

fn empirical_tail(
    g: &Graph,
    profile: &ExpanderProfile,
    cfg: &ExperimentConfig,
    w0: usize,
    k: i64,
    fns: &[LipschitzFn],
) -> Result<Vec<TailReport>> {
    let gt = gate(profile.n, profile.d, profile.lambda, cfg.m, &cfg.constants);
    let mut out = Vec::new();
    for &t in &cfg.t_values {
        if t < 2 {
            return Err(Error::Precondition(format!("t = {t} must be at least 2")));
        }
        let floor = k + t as i64 * cfg.m as i64 + 1;
        let favorable = fns.iter().filter(|f| f.value(w0) > floor).count();
        let probability = favorable as f64 / fns.len() as f64;
        let ball_size = ball(g, w0, t as usize - 1)?.len();
        let bound = tail_bound(ball_size, cfg.m);
        out.push(TailReport {
            w0,
            k,
            t,
            m: cfg.m,
            favorable: favorable.to_string(),
            total: fns.len().to_string(),
            probability,
            ball_size,
            bound,
            gate: gt.clone(),
            asserted: false,
            satisfied: probability <= bound + 1e-12,
        });
    }
    Ok(out)
}

/// Counts `|Lip*_k|` and `|Lip_{v0}|` exactly and compares with the
/// `(M+1)`-fold covering bound, asserted only when `λ ≤ d/5`.
pub fn covering_report(g: &Graph, profile: &ExpanderProfile, m: u32, k: i64, v0: usize, budget: &NodeBudget) -> Result<CoveringReport> {
    let ground = EnsembleSpec::ground_state(g, m, k, profile.lambda)?;
    let lhs = count_ensemble(g, &ground, budget.clone())?.count;
    let onepoint = count_ensemble(g, &EnsembleSpec::one_point(v0, m), budget.clone())?.count;
    let rhs = &onepoint * (m as u64 + 1);
    let shifted_k = k + 7;
    let shifted = EnsembleSpec::ground_state(g, m, shifted_k, profile.lambda)?;
    let lhs_shifted = count_ensemble(g, &shifted, budget.clone())?.count;
    let flaw_cap = match ground.ensemble {
        crate::lipschitz::Ensemble::GroundState { flaw_cap, .. } => flaw_cap,
        crate::lipschitz::Ensemble::OnePoint { .. } => unreachable!(),
    };
    let lambda_le_d_over_5 = profile.lambda <= profile.d as f64 / 5.0 + 1e-12;
    Ok(CoveringReport {
        graph: g.name().to_string(),
        profile: profile.clone(),
        m,
        k,
        v0,
        flaw_cap,
        holds: lhs <= rhs,
        lhs: lhs.to_string(),
        onepoint: onepoint.to_string(),
        rhs: rhs.to_string(),
        lambda_le_d_over_5,
        // the covering argument assumes a positive Lipschitz constant
        asserted: lambda_le_d_over_5 && m > 0,
        shifted_k,
        shift_invariant: lhs_shifted == lhs,
        lhs_shifted: lhs_shifted.to_string(),
    })
}

/// [`covering_report`] for the configured graph, `k` (ground-state mode,
/// else 0) and `v0` (one-point mode, else 0).
pub fn run_covering_check(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let g = cfg.load_graph()?;
    let profile = cfg.lambda_source.profile(&g)?;
    let (k, v0) = match cfg.mode {
        Mode::OnePoint { v0 } => (0, v0),
        Mode::GroundState { k } => (k, 0),
    };
    let report = covering_report(&g, &profile, cfg.m, k, v0, &cfg.node_budget())?;
    let passed = report.passed();
    let summary = json!({
        "experiment": "covering",
        "report": report,
        "passed": passed,
        "provenance": provenance(cfg),
    });
    Ok(ExperimentResult { records: Records::Covering(vec![report]), summary, passed })
}
