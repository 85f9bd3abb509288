use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{check_schema, GraphSource, SCHEMA_VERSION};
use super::covering_report;
use crate::containers::{build_container_family, s_bound_check, verify_container_lemma, SBoundStatus};
use crate::entropy::{fuzz_entropy_properties, random_pmf, shearer_check, CoverWeights};
use crate::error::{Error, NodeBudget, Result};
use crate::flaws::{
    boundary_ordering_of, check_b_in_a_all_anchors, check_boundary_ordering, conditional_tail_exact,
    verify_ground_state_lemma,
};
use crate::containers::{cover_linkage_holds, mutual_cover};
use crate::gates::Constants;
use crate::graph::ops::{adjacency_lists, for_each_connected_set, Grow};
use crate::graph::{closure, count_rooted_connected_sets, is_mutual_cover, GenSpec, Graph, VertexSet};
use crate::lipschitz::{kappa, EnsembleSpec, GlauberChain};
use crate::seed::stream_rng;
use crate::spectral::{
    diameter, exhaustive_lambda, spectral_lambda, verify_expander_props, ExpanderProfile, PropStatus,
    PropsOptions, EXHAUSTIVE_CAP,
};

fn default_graphs() -> Vec<GraphSource> {
    vec![
        GraphSource::Spec(GenSpec::Complete { n: 6 }),
        GraphSource::Spec(GenSpec::Cycle { n: 4 }),
        GraphSource::Spec(GenSpec::Hypercube { dim: 3 }),
        GraphSource::Spec(GenSpec::RandomRegular { n: 10, d: 3, seed: 1 }),
    ]
}

fn one() -> u32 {
    1
}

fn default_samples() -> usize {
    200
}

fn default_fuzz() -> usize {
    100
}

fn default_budget() -> u64 {
    NodeBudget::DEFAULT
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    #[serde(default = "default_graphs")]
    pub graphs: Vec<GraphSource>,
    #[serde(rename = "M", default = "one")]
    pub m: u32,
    #[serde(default)]
    pub seed: u64,
    /// Glauber samples per graph for the flaw-nesting check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Random cases for the ordering and entropy fuzzers.
    #[serde(default = "default_fuzz")]
    pub fuzz_cases: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub constants: Constants,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl VerifyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: VerifyConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        check_schema(cfg.schema_version)?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub graph: String,
    pub check: String,
    pub status: VerifyStatus,
    /// For skipped rows, the hypothesis that did not hold.
    pub detail: String,
    pub witness: Option<Value>,
    pub reproduce: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != VerifyStatus::Fail)
    }

    pub fn count(&self, status: VerifyStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    /// Fixed-width text table.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let status = match r.status {
                VerifyStatus::Pass => "pass",
                VerifyStatus::Fail => "FAIL",
                VerifyStatus::Skipped => "skipped",
            };
            out += &format!("{:<28} {:<26} {:<8} {}\n", r.graph, r.check, status, r.detail);
            if let Some(w) = &r.witness {
                if r.status == VerifyStatus::Fail {
                    out += &format!("    witness: {w}\n");
                }
            }
            if let Some(cmd) = &r.reproduce {
                out += &format!("    reproduce: {cmd}\n");
            }
        }
        out
    }
}

struct Rows<'a> {
    graph: String,
    arg: String,
    seed: u64,
    rows: &'a mut Vec<VerifyRow>,
}

impl Rows<'_> {
    fn push(&mut self, check: &str, status: VerifyStatus, detail: impl Into<String>, witness: Option<Value>) {
        let reproduce = (status == VerifyStatus::Fail)
            .then(|| format!("lipgraph verify --graph '{}' --seed {}", self.arg, self.seed));
        self.rows.push(VerifyRow {
            graph: self.graph.clone(),
            check: check.into(),
            status,
            detail: detail.into(),
            witness,
            reproduce,
        });
    }

    fn pass_fail(&mut self, check: &str, ok: bool, detail: impl Into<String>, witness: Option<Value>) {
        let status = if ok { VerifyStatus::Pass } else { VerifyStatus::Fail };
        self.push(check, status, detail, witness);
    }

    /// Budget exhaustion becomes a skipped row; other errors propagate.
    fn run<T>(&mut self, check: &str, r: Result<T>, then: impl FnOnce(&mut Self, T)) -> Result<()> {
        match r {
            Ok(v) => then(self, v),
            Err(Error::BudgetExceeded { budget }) => {
                self.push(check, VerifyStatus::Skipped, format!("desk scale: node budget {budget} exceeded"), None)
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

/// Runs every available check on every configured graph and returns the
/// consolidated matrix.
pub fn run_verify_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut rows = Vec::new();
    for src in &cfg.graphs {
        let g = src.load()?;
        let mut r = Rows { graph: g.name().to_string(), arg: src.to_arg(), seed: cfg.seed, rows: &mut rows };
        verify_graph(&g, cfg, &mut r)?;
    }
    let mut r = Rows { graph: "-".into(), arg: String::new(), seed: cfg.seed, rows: &mut rows };
    verify_entropy(cfg, &mut r)?;
    Ok(VerifyReport { rows })
}

fn verify_graph(g: &Graph, cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let Some(d) = g.regular_degree() else {
        r.push("all", VerifyStatus::Skipped, "hypothesis: graph is d-regular", None);
        return Ok(());
    };
    if d == 0 || g.n() < 2 {
        r.push("all", VerifyStatus::Skipped, "hypothesis: connected graph with d >= 1", None);
        return Ok(());
    }
    let m = cfg.m;
    let spectral = spectral_lambda(g)?;
    let profile = if g.n() <= EXHAUSTIVE_CAP {
        let ex = exhaustive_lambda(g)?;
        let ok = ex.lambda <= spectral.lambda + 1e-9;
        r.pass_fail(
            "lambda-certificate",
            ok,
            format!("exhaustive {:.6} <= spectral {:.6}", ex.lambda, spectral.lambda),
            (!ok).then(|| json!({"exhaustive": ex.lambda, "spectral": spectral.lambda})),
        );
        ex
    } else {
        r.push("lambda-certificate", VerifyStatus::Pass, format!("spectral {:.6}", spectral.lambda), None);
        spectral
    };

    let props = verify_expander_props(g, &profile, &PropsOptions { seed: cfg.seed, ..PropsOptions::default() });
    for c in props.checks {
        let status = match c.status {
            PropStatus::Pass | PropStatus::Sampled => VerifyStatus::Pass,
            PropStatus::Fail => VerifyStatus::Fail,
            PropStatus::Skipped => VerifyStatus::Skipped,
        };
        r.push(&format!("expander-{}", c.name), status, c.detail, c.witness);
    }

    check_rooted_sets(g, d, cfg, r)?;
    check_cover_linkage(g, &profile, cfg, r)?;

    let lemma = verify_ground_state_lemma(g, m, profile.lambda, 0, NodeBudget::new(cfg.budget));
    r.run("ground-state-existence", lemma, |r, rep| {
        let detail = format!("{} functions, worst flaw ratio {}", rep.instances_checked, rep.stats["max_flaw_ratio"]);
        let witness = rep.failures.first().map(|f| json!({"values": f}));
        r.pass_fail("ground-state-existence", rep.passed(), detail, witness);
    })?;

    check_flaw_nesting(g, &profile, cfg, r)?;
    check_orderings(g, cfg, r)?;
    check_containers(g, &profile, cfg, r)?;

    let cov = covering_report(g, &profile, m, 0, 0, &NodeBudget::new(cfg.budget));
    r.run("covering", cov, |r, rep| {
        let detail = format!("|Lip*_0| = {} vs (M+1)|Lip_v0| = {}", rep.lhs, rep.rhs);
        if !rep.shift_invariant {
            r.pass_fail("covering", false, "count changed under k-shift", Some(json!(rep)));
        } else if !rep.lambda_le_d_over_5 {
            r.push("covering", VerifyStatus::Skipped, format!("hypothesis: λ = {:.4} <= d/5; {detail}", profile.lambda), None);
        } else {
            r.pass_fail("covering", rep.holds, detail, (!rep.holds).then(|| json!(rep)));
        }
    })?;

    let ts: Vec<u32> = (2..=(diameter(g) as u32 + 1).clamp(2, 5)).collect();
    let tail = conditional_tail_exact(g, m, profile.lambda, 0, 0, &ts, &cfg.constants, NodeBudget::new(cfg.budget));
    r.run("tail", tail, |r, rows| {
        let monotone = rows.windows(2).all(|w| w[1].probability <= w[0].probability);
        let gate = &rows[0].gate;
        if !monotone {
            r.pass_fail("tail", false, "tail probability increased with t", Some(json!(rows)));
        } else if !gate.holds {
            let mut why = Vec::new();
            if !gate.lambda_le_d_over_5 {
                why.push(format!("λ = {:.4} <= d/5", profile.lambda));
            }
            if !gate.d_over_5_le_cn {
                why.push("d/5 <= c·n".to_string());
            }
            if !gate.m_ok {
                why.push(format!("M <= {:.4}", gate.m_limit));
            }
            r.push("tail", VerifyStatus::Skipped, format!("hypothesis: {}", why.join(", ")), None);
        } else {
            let bad = rows.iter().find(|x| !x.passed());
            r.pass_fail("tail", bad.is_none(), format!("t in {ts:?}, probabilities within bound"), bad.map(|b| json!(b)));
        }
    })
}

/// At most `(eΔ)^{m-1}` connected `m`-sets contain a fixed vertex.
fn check_rooted_sets(g: &Graph, d: usize, cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let mut budget = NodeBudget::new(cfg.budget);
    let mut worst: Option<(usize, u64, f64)> = None;
    for size in 1..=g.n().min(6) {
        let count = match count_rooted_connected_sets(g, 0, size, &mut budget) {
            Ok(c) => c,
            Err(e) => return r.run("rooted-connected-sets", Err::<(), _>(e), |_, _| ()),
        };
        let bound = (std::f64::consts::E * d as f64).powi(size as i32 - 1);
        if count as f64 > bound && worst.is_none() {
            worst = Some((size, count, bound));
        }
    }
    let witness = worst.map(|(size, count, bound)| json!({"size": size, "count": count, "bound": bound}));
    r.pass_fail("rooted-connected-sets", worst.is_none(), "sizes 1..6 at vertex 0", witness);
    Ok(())
}

/// Mutual covers of connected sets through vertex 0 (up to 4 vertices) are 3-linked.
fn check_cover_linkage(g: &Graph, p: &ExpanderProfile, cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let mut sets = Vec::new();
    let mut budget = NodeBudget::new(cfg.budget);
    let res = for_each_connected_set(&adjacency_lists(g), 0, &mut budget, |x| {
        sets.push(x.clone());
        if x.len() >= 4 { Grow::Prune } else { Grow::Continue }
    });
    if let Err(e) = res {
        return r.run("cover-linkage", Err::<(), _>(e), |_, _| ());
    }
    let mut bad = None;
    for (i, x) in sets.iter().enumerate() {
        let y = mutual_cover(g, x, p, cfg.seed.wrapping_add(i as u64))?.cover;
        if !is_mutual_cover(g, x, &y) || !cover_linkage_holds(g, x, &y, 1) {
            bad = Some(json!({"X": x, "Y": y}));
            break;
        }
    }
    r.pass_fail("cover-linkage", bad.is_none(), format!("{} connected sets", sets.len()), bad);
    Ok(())
}

fn check_flaw_nesting(g: &Graph, p: &ExpanderProfile, cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let spec = EnsembleSpec::one_point(0, cfg.m);
    let mut chain = GlauberChain::with_stream(g, &spec, cfg.seed, 1)?;
    chain.run(100 * g.n() as u64 * cfg.m as u64);
    let (mut anchors, mut failure) = (0usize, None);
    for _ in 0..cfg.samples {
        chain.run(g.n() as u64);
        let f = chain.state();
        let k = match kappa(g, &f, p.lambda) {
            Ok(k) => k,
            Err(Error::NoGroundState(_)) | Err(Error::Invariant(_)) => continue,
            Err(e) => return Err(e),
        };
        let (checked, bad) = check_b_in_a_all_anchors(g, &f, k)?;
        anchors += checked;
        if let Some(w0) = bad {
            failure = Some(json!({"values": f.values(), "k": k, "w0": w0}));
            break;
        }
    }
    if failure.is_none() && anchors == 0 {
        r.push("flaw-nesting", VerifyStatus::Skipped, "hypothesis: some sample has a nonempty B", None);
    } else {
        r.pass_fail("flaw-nesting", failure.is_none(), format!("{anchors} anchors with nonempty B"), failure);
    }
    Ok(())
}

fn check_orderings(g: &Graph, cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let mut rng = stream_rng(cfg.seed, 2);
    let (mut tested, mut failure) = (0, None);
    for _ in 0..cfg.fuzz_cases {
        let s = random_connected_set(g, &mut rng);
        if closure(g, &s).len() == g.n() {
            continue;
        }
        let order = boundary_ordering_of(g, &s)?;
        tested += 1;
        let check = check_boundary_ordering(g, &s, &order);
        if !check.ok() {
            failure = Some(json!({"S": s, "order": order, "check": check}));
            break;
        }
    }
    if tested == 0 {
        r.push("boundary-ordering", VerifyStatus::Skipped, "hypothesis: some S has S⁺ ≠ V", None);
    } else {
        r.pass_fail("boundary-ordering", failure.is_none(), format!("{tested} random connected S"), failure);
    }
    Ok(())
}

/// Grows a connected set from a random vertex to a random size.
pub(crate) fn random_connected_set<R: Rng>(g: &Graph, rng: &mut R) -> VertexSet {
    let n = g.n();
    let target = rng.random_range(1..=n.div_ceil(2));
    let mut s = VertexSet::singleton(n, rng.random_range(0..n));
    while s.len() < target {
        let frontier = crate::graph::outer_boundary(g, &s).to_vec();
        if frontier.is_empty() {
            break;
        }
        s.insert(frontier[rng.random_range(0..frontier.len())]);
    }
    s
}

fn check_containers(g: &Graph, p: &ExpanderProfile, cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let psi = (p.d as f64 / 6.0).max(1.0);
    let mut budget = NodeBudget::new(cfg.budget);
    let (mut families, mut covered, mut greedy, mut pairs) = (0, true, true, Vec::new());
    let mut first_bad = None;
    for gs in 1..=g.n() {
        let fam = match build_container_family(g, 0, gs, 1, psi, p, cfg.seed, &mut budget) {
            Ok(f) => f,
            Err(e) => return r.run("container-family", Err::<(), _>(e), |_, _| ()),
        };
        if fam.sets == 0 {
            continue;
        }
        families += 1;
        if (!fam.covers_all || !fam.greedy_bounds_hold) && first_bad.is_none() {
            first_bad = Some(json!({"g": gs, "covers_all": fam.covers_all, "greedy_bounds_hold": fam.greedy_bounds_hold}));
        }
        covered &= fam.covers_all;
        greedy &= fam.greedy_bounds_hold;
        pairs.extend(fam.members);
    }
    r.pass_fail(
        "container-family",
        covered && greedy,
        format!("{families} families at v=0, k=1, ψ={psi:.3}; {} pairs", pairs.len()),
        first_bad,
    );

    let reports: Vec<_> = pairs.iter().map(|pair| (pair, s_bound_check(pair, p, None))).collect();
    let failed = reports.iter().find(|(_, s)| s.status == SBoundStatus::Fail);
    let checked = reports.iter().filter(|(_, s)| s.status == SBoundStatus::Pass).count();
    if let Some((pair, s)) = failed {
        r.pass_fail("s-bound", false, "|S| above bound", Some(json!({"pair": pair, "report": s})));
    } else if checked == 0 {
        let why = reports
            .first()
            .and_then(|(_, s)| s.reason.clone())
            .unwrap_or_else(|| "no approximating pairs".into());
        r.push("s-bound", VerifyStatus::Skipped, format!("hypothesis: {why}"), None);
    } else {
        r.pass_fail("s-bound", true, format!("{checked} pairs in range, {} skipped", reports.len() - checked), None);
    }

    let rows = verify_container_lemma(g, 0, 1..=g.n() / 2, 1, p, &mut budget);
    r.run("container-count", rows, |r, rows| {
        r.push(
            "container-count",
            VerifyStatus::Skipped,
            "hypothesis: explicit universal constant (bound is reported, not asserted)",
            Some(json!(rows)),
        );
    })
}

fn verify_entropy(cfg: &VerifyConfig, r: &mut Rows) -> Result<()> {
    let (trials, failures) = fuzz_entropy_properties(&[2, 3, 2], cfg.fuzz_cases, cfg.seed)?;
    r.pass_fail("entropy-properties", failures == 0, format!("{trials} random pmfs on 3 coordinates"), None);

    let cw = CoverWeights {
        sets: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        weights: vec![0.5; 3],
        order: vec![(0, 1), (0, 2), (1, 2)],
    };
    let mut rng = stream_rng(cfg.seed, 3);
    let mut failure = None;
    for _ in 0..cfg.fuzz_cases {
        let p = random_pmf(&mut rng, &[2, 2, 3]);
        let rep = shearer_check(&p, &cw)?;
        if !rep.pass {
            failure = Some(json!({"pmf": p, "report": rep}));
            break;
        }
    }
    r.pass_fail("shearer", failure.is_none(), format!("{} pmfs, pairwise cover, chain order", cfg.fuzz_cases), failure);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_has_no_failures() {
        let report = run_verify_suite(&VerifyConfig::default()).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert!(report.count(VerifyStatus::Pass) > 20);
        for row in &report.rows {
            if row.status == VerifyStatus::Skipped {
                assert!(row.detail.starts_with("hypothesis:") || row.detail.starts_with("desk scale:"), "{row:?}");
            }
        }
    }

    #[test]
    fn config_defaults_and_rejection() {
        let cfg = VerifyConfig::from_json(r#"{"graphs":["petersen"]}"#);
        assert!(cfg.is_err());
        let cfg = VerifyConfig::from_json(r#"{"graphs":[{"family":"petersen"}],"M":2}"#).unwrap();
        assert_eq!(cfg.m, 2);
        assert_eq!(cfg.samples, 200);
        assert!(VerifyConfig::from_json(r#"{"nope":1}"#).is_err());
    }

    #[test]
    fn irregular_graphs_are_skipped_with_reason() {
        let cfg = VerifyConfig {
            graphs: vec![GraphSource::Spec(GenSpec::Path { n: 4 })],
            fuzz_cases: 5,
            ..VerifyConfig::default()
        };
        let report = run_verify_suite(&cfg).unwrap();
        assert_eq!(report.rows[0].status, VerifyStatus::Skipped);
        assert!(report.rows[0].detail.contains("regular"));
    }
}
