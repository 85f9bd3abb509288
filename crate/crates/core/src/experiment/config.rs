use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, NodeBudget, Result};
use crate::gates::Constants;
use crate::graph::{generate, read_edge_list, GenSpec, Graph};
use crate::lipschitz::EnsembleSpec;
use crate::spectral::{exhaustive_lambda, spectral_lambda, ExpanderProfile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub file: PathBuf,
}

/// A generated family or an edge-list file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    File(GraphFile),
    Spec(GenSpec),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::File(f) => read_edge_list(&f.file),
            GraphSource::Spec(s) => generate(s),
        }
    }

    /// Shorthand or JSON spec, or a path to an existing edge-list file.
    pub fn parse_arg(s: &str) -> Result<GraphSource> {
        if !s.trim_start().starts_with('{') && Path::new(s).is_file() {
            return Ok(GraphSource::File(GraphFile { file: s.into() }));
        }
        Ok(GraphSource::Spec(s.parse()?))
    }

    /// Argument form accepted by `--graph`.
    pub fn to_arg(&self) -> String {
        match self {
            GraphSource::File(f) => f.file.display().to_string(),
            GraphSource::Spec(s) => serde_json::to_string(s).expect("spec serializes"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Mode {
    OnePoint { v0: usize },
    GroundState { k: i64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSource {
    #[default]
    Spectral,
    Exhaustive,
    Asserted(f64),
}

impl LambdaSource {
    pub fn profile(&self, g: &Graph) -> Result<ExpanderProfile> {
        match *self {
            LambdaSource::Spectral => spectral_lambda(g),
            LambdaSource::Exhaustive => exhaustive_lambda(g),
            LambdaSource::Asserted(l) => ExpanderProfile::asserted(g, l),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlauberParams {
    /// Defaults to `100·n·M` (a heuristic, not a mixing-time bound).
    #[serde(default)]
    pub burn_in: Option<u64>,
    /// Defaults to `n`.
    #[serde(default)]
    pub thinning: Option<u64>,
    /// Independent chains, each on its own seed stream.
    #[serde(default)]
    pub chains: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    #[default]
    Exact,
    Glauber(GlauberParams),
}

/// Resolved Glauber schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub burn_in: u64,
    pub thinning: u64,
    pub chains: usize,
}

impl GlauberParams {
    pub fn schedule(&self, n: usize, m: u32) -> Schedule {
        Schedule {
            burn_in: self.burn_in.unwrap_or(100 * n as u64 * m.max(1) as u64),
            thinning: self.thinning.unwrap_or(n as u64).max(1),
            chains: self.chains.unwrap_or(4).max(1),
        }
    }
}

fn default_samples() -> usize {
    1000
}

fn default_t_values() -> Vec<u32> {
    vec![2, 3, 4]
}

fn default_budget() -> u64 {
    NodeBudget::DEFAULT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub graph: GraphSource,
    #[serde(rename = "M")]
    pub m: u32,
    pub mode: Mode,
    #[serde(default)]
    pub lambda_source: LambdaSource,
    #[serde(default)]
    pub sampler: Sampler,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Vertices whose values are recorded per sample; empty means the
    /// one-point vertex (or vertex 0).
    #[serde(default)]
    pub probes: Vec<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default = "default_t_values")]
    pub t_values: Vec<u32>,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        check_schema(cfg.schema_version)?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn new(graph: GraphSource, m: u32, mode: Mode) -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            graph,
            m,
            mode,
            lambda_source: LambdaSource::default(),
            sampler: Sampler::default(),
            samples: default_samples(),
            seed: 0,
            probes: Vec::new(),
            output_dir: None,
            constants: Constants::default(),
            t_values: default_t_values(),
            budget: default_budget(),
        }
    }

    /// Hex sha256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn probe_vertices(&self) -> Vec<usize> {
        if !self.probes.is_empty() {
            return self.probes.clone();
        }
        match self.mode {
            Mode::OnePoint { v0 } => vec![v0],
            Mode::GroundState { .. } => vec![0],
        }
    }

    pub fn node_budget(&self) -> NodeBudget {
        NodeBudget::new(self.budget)
    }

    /// Loads the graph and checks every vertex the config refers to.
    pub fn load_graph(&self) -> Result<Graph> {
        let g = self.graph.load()?;
        if let Mode::OnePoint { v0 } = self.mode {
            g.check_vertex(v0)?;
        }
        for &p in &self.probes {
            g.check_vertex(p)?;
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        Ok(g)
    }

    /// The sampled ensemble; ground-state mode needs the expander profile.
    pub fn ensemble(&self, g: &Graph, profile: Option<&ExpanderProfile>) -> Result<EnsembleSpec> {
        match self.mode {
            Mode::OnePoint { v0 } => Ok(EnsembleSpec::one_point(v0, self.m)),
            Mode::GroundState { k } => {
                let p = profile.ok_or(Error::NotRegular)?;
                EnsembleSpec::ground_state(g, self.m, k, p.lambda)
            }
        }
    }
}

pub(crate) fn check_schema(version: u32) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "schema_version {version} is not supported (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_and_full() {
        let cfg = ExperimentConfig::from_json(
            r#"{"schema_version":1,"graph":{"family":"cycle","n":4},"M":1,"mode":{"one-point":{"v0":0}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.sampler, Sampler::Exact);
        assert_eq!(cfg.samples, 1000);
        assert_eq!(cfg.probe_vertices(), vec![0]);

        let cfg = ExperimentConfig::from_json(
            r#"{"schema_version":1,"graph":{"file":"g.txt"},"M":2,
                "mode":{"ground-state":{"k":3}},"lambda_source":{"asserted":1.5},
                "sampler":{"glauber":{"thinning":7}},"samples":5,"seed":9,
                "probes":[1,2],"constants":{"C_prime":2},"t_values":[2],"budget":10}"#,
        )
        .unwrap();
        assert_eq!(cfg.lambda_source, LambdaSource::Asserted(1.5));
        let Sampler::Glauber(p) = cfg.sampler else { panic!() };
        assert_eq!(p.schedule(10, 2), Schedule { burn_in: 2000, thinning: 7, chains: 4 });
        assert_eq!(cfg.graph, GraphSource::File(GraphFile { file: "g.txt".into() }));
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        let base = r#""graph":{"family":"cycle","n":4},"M":1,"mode":{"one-point":{"v0":0}}"#;
        assert!(ExperimentConfig::from_json(&format!(r#"{{"schema_version":1,{base},"extra":1}}"#)).is_err());
        assert!(ExperimentConfig::from_json(&format!(r#"{{"schema_version":2,{base}}}"#)).is_err());
        assert!(ExperimentConfig::from_json(
            r#"{"schema_version":1,"graph":{"file":"x","n":3},"M":1,"mode":{"one-point":{"v0":0}}}"#
        )
        .is_err());
    }

    #[test]
    fn vertex_validation() {
        let mut cfg = ExperimentConfig::new(GraphSource::Spec(GenSpec::Cycle { n: 4 }), 1, Mode::OnePoint { v0: 4 });
        assert!(matches!(cfg.load_graph(), Err(Error::InvalidVertex { .. })));
        cfg.mode = Mode::OnePoint { v0: 0 };
        cfg.probes = vec![9];
        assert!(cfg.load_graph().is_err());
        cfg.probes = vec![3];
        assert!(cfg.load_graph().is_ok());
    }

    #[test]
    fn hash_is_stable() {
        let cfg = ExperimentConfig::new(GraphSource::Spec(GenSpec::Complete { n: 6 }), 1, Mode::GroundState { k: 0 });
        assert_eq!(cfg.hash(), cfg.clone().hash());
        let mut other = cfg.clone();
        other.seed = 1;
        assert_ne!(cfg.hash(), other.hash());
        assert_eq!(cfg.hash().len(), 64);
    }
}
