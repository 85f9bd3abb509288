use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Default number of configuration-model attempts before giving up.
pub const DEFAULT_REJECTION_CAP: usize = 1000;

/// Graph family and its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GenSpec {
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Hypercube { dim: usize },
    /// Discrete torus with the given side lengths.
    Torus { sides: Vec<usize> },
    RandomRegular { n: usize, d: usize, seed: u64 },
    /// `levels`-level tree where the root has `d` children and every other
    /// internal vertex has `d - 1`, with all last-level leaves joined to one apex.
    WiredTree { levels: usize, d: usize },
    Petersen,
}

impl GenSpec {
    pub fn label(&self) -> String {
        match self {
            GenSpec::Cycle { n } => format!("C{n}"),
            GenSpec::Path { n } => format!("P{n}"),
            GenSpec::Complete { n } => format!("K{n}"),
            GenSpec::CompleteBipartite { a, b } => format!("K{a},{b}"),
            GenSpec::Hypercube { dim } => format!("Q{dim}"),
            GenSpec::Torus { sides } => {
                let s: Vec<String> = sides.iter().map(usize::to_string).collect();
                format!("torus({})", s.join("x"))
            }
            GenSpec::RandomRegular { n, d, seed } => format!("rr(n={n},d={d},seed={seed})"),
            GenSpec::WiredTree { levels, d } => format!("T({levels},{d})"),
            GenSpec::Petersen => "Petersen".to_string(),
        }
    }
}

/// Shorthand used on the command line: `cycle:5`, `path:4`, `complete:6`,
/// `kbip:2:3`, `hypercube:3`, `torus:3x4`, `rr:10:3:7` (n, d, seed),
/// `wired-tree:3:3` (levels, d) and `petersen`. JSON is accepted too.
impl std::str::FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenSpec> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Config(format!("graph spec: {e}")));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("unrecognized graph spec `{s}`"));
        let num = |i: usize| -> Result<usize> {
            parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad)
        };
        let arity = |k: usize| if parts.len() == k + 1 { Ok(()) } else { Err(bad()) };
        let spec = match parts[0] {
            "cycle" => {
                arity(1)?;
                GenSpec::Cycle { n: num(1)? }
            }
            "path" => {
                arity(1)?;
                GenSpec::Path { n: num(1)? }
            }
            "complete" => {
                arity(1)?;
                GenSpec::Complete { n: num(1)? }
            }
            "kbip" => {
                arity(2)?;
                GenSpec::CompleteBipartite { a: num(1)?, b: num(2)? }
            }
            "hypercube" => {
                arity(1)?;
                GenSpec::Hypercube { dim: num(1)? }
            }
            "torus" => {
                arity(1)?;
                let sides = parts[1]
                    .split('x')
                    .map(|t| t.parse().map_err(|_| bad()))
                    .collect::<Result<Vec<usize>>>()?;
                GenSpec::Torus { sides }
            }
            "rr" => {
                if parts.len() != 3 && parts.len() != 4 {
                    return Err(bad());
                }
                let seed = if parts.len() == 4 { num(3)? as u64 } else { 0 };
                GenSpec::RandomRegular { n: num(1)?, d: num(2)?, seed }
            }
            "wired-tree" => {
                arity(2)?;
                GenSpec::WiredTree { levels: num(1)?, d: num(2)? }
            }
            "petersen" => {
                arity(0)?;
                GenSpec::Petersen
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    generate_with_cap(spec, DEFAULT_REJECTION_CAP)
}

/// Like [`generate`], with an explicit configuration-model attempt cap.
pub fn generate_with_cap(spec: &GenSpec, cap: usize) -> Result<Graph> {
    let name = spec.label();
    let infeasible = |msg: &str| Err(Error::InfeasibleParameters(format!("{name}: {msg}")));
    match *spec {
        GenSpec::Cycle { n } => {
            if n < 3 {
                return infeasible("cycle needs n >= 3");
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), name)
        }
        GenSpec::Path { n } => {
            if n < 1 {
                return infeasible("path needs n >= 1");
            }
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)), name)
        }
        GenSpec::Complete { n } => {
            if n < 1 {
                return infeasible("complete graph needs n >= 1");
            }
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, edges, name)
        }
        GenSpec::CompleteBipartite { a, b } => {
            if a < 1 || b < 1 {
                return infeasible("both sides must be nonempty");
            }
            let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
            Graph::from_edges(a + b, edges, name)
        }
        GenSpec::Hypercube { dim } => {
            if dim > 20 {
                return infeasible("dimension above 20 is not supported");
            }
            let n = 1usize << dim;
            let edges = (0..n).flat_map(|u| {
                (0..dim).map(move |b| (u, u ^ (1 << b))).filter(|&(u, v)| u < v)
            });
            Graph::from_edges(n, edges, name)
        }
        GenSpec::Torus { ref sides } => torus(sides, name),
        GenSpec::RandomRegular { n, d, seed } => random_regular(n, d, seed, cap, name),
        GenSpec::WiredTree { levels, d } => wired_tree(levels, d, name),
        GenSpec::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner), name)
        }
    }
}

fn torus(sides: &[usize], name: String) -> Result<Graph> {
    if sides.is_empty() || sides.iter().any(|&s| s < 2) {
        return Err(Error::InfeasibleParameters(format!("{name}: every side must be >= 2")));
    }
    let n: usize = sides.iter().product();
    let mut strides = vec![1usize; sides.len()];
    for i in 1..sides.len() {
        strides[i] = strides[i - 1] * sides[i - 1];
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for (axis, &side) in sides.iter().enumerate() {
            let coord = u / strides[axis] % side;
            let next = (coord + 1) % side;
            let v = u - coord * strides[axis] + next * strides[axis];
            let e = (u.min(v), u.max(v));
            edges.push(e);
        }
    }
    // side 2 wraps onto the same neighbor twice
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, edges, name)
}

fn wired_tree(levels: usize, d: usize, name: String) -> Result<Graph> {
    if levels < 1 || d < 2 {
        return Err(Error::InfeasibleParameters(format!("{name}: needs levels >= 1 and d >= 2")));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for level in 0..levels {
        let children = if level == 0 { d } else { d - 1 };
        let mut next_frontier = Vec::with_capacity(frontier.len() * children);
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((parent, next_id));
                next_frontier.push(next_id);
                next_id += 1;
            }
        }
        frontier = next_frontier;
    }
    let apex = next_id;
    edges.extend(frontier.iter().map(|&leaf| (leaf, apex)));
    Graph::from_edges(apex + 1, edges, name)
}

fn random_regular(n: usize, d: usize, seed: u64, cap: usize, name: String) -> Result<Graph> {
    if n == 0 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InfeasibleParameters(format!(
            "{name}: random-regular needs d < n and n*d even"
        )));
    }
    if d == 0 && n > 1 {
        return Err(Error::InfeasibleParameters(format!("{name}: d = 0 cannot be connected")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut last_reason = String::from("no attempt made");
    for _ in 0..cap {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|&(u, v)| u == v) {
            last_reason = "loop".into();
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            last_reason = "multi-edge".into();
            continue;
        }
        match Graph::from_edges(n, edges, name.clone()) {
            Ok(g) => return Ok(g),
            Err(_) => last_reason = "disconnected".into(),
        }
    }
    Err(Error::GenerationFailed { attempts: cap, reason: last_reason })
}
