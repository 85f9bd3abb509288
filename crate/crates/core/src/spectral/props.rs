use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{diameter, ExpanderProfile, EXHAUSTIVE_CAP};
use crate::graph::{ball, neighborhood, Graph, VertexSet};

const SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PropStatus {
    Pass,
    Fail,
    Skipped,
    /// No violation among randomly sampled subsets; not a proof.
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropCheck {
    pub name: String,
    pub status: PropStatus,
    pub instances: u64,
    pub detail: String,
    pub witness: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropsReport {
    pub graph: String,
    pub profile: ExpanderProfile,
    pub checks: Vec<PropCheck>,
}

impl PropsReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != PropStatus::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct PropsOptions {
    /// Above this many vertices subsets are sampled instead of swept.
    pub exhaustive_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for PropsOptions {
    fn default() -> Self {
        PropsOptions { exhaustive_cap: EXHAUSTIVE_CAP, samples: 4096, seed: 0 }
    }
}

/// Subsets to test: all nonempty ones at small `n`, otherwise a seeded sample
/// with a uniformly random size followed by a uniformly random subset of that size.
fn subset_family(n: usize, opts: &PropsOptions) -> (Vec<VertexSet>, bool) {
    if n <= opts.exhaustive_cap.min(24) {
        let all = (1u64..(1u64 << n)).map(|m| VertexSet::from_mask(n, m)).collect();
        (all, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let sets = (0..opts.samples)
            .map(|_| {
                let size = rng.random_range(1..=n);
                VertexSet::from_ids(n, sample(&mut rng, n, size))
            })
            .collect();
        (sets, false)
    }
}

fn sweep_status(exhaustive: bool) -> PropStatus {
    if exhaustive {
        PropStatus::Pass
    } else {
        PropStatus::Sampled
    }
}

/// Checks connectivity, vertex expansion, volume growth and the diameter bound
/// implied by `(n, d, λ)`. Failures are report entries carrying a witness.
pub fn verify_expander_props(g: &Graph, p: &ExpanderProfile, opts: &PropsOptions) -> PropsReport {
    let n = g.n();
    let (d, lambda, nf) = (p.d as f64, p.lambda, n as f64);
    let (subsets, exhaustive) = subset_family(n, opts);
    let label = if exhaustive { "all" } else { "sampled" };
    let mut checks = Vec::new();

    // every A, B with |A||B| > (λn/d)² are joined by an edge; the largest B
    // avoiding A's neighborhood is V ∖ N(A)
    let limit = (lambda * nf / d).powi(2);
    let witness = subsets.par_iter().find_first(|a| {
        let far = neighborhood(g, a).complement();
        !far.is_empty() && (a.len() * far.len()) as f64 > limit * (1.0 + SLACK) + SLACK
    });
    checks.push(match witness {
        Some(a) => PropCheck {
            name: "connectivity".into(),
            status: PropStatus::Fail,
            instances: subsets.len() as u64,
            detail: format!("no edge between A and B with |A||B| > {limit:.6}"),
            witness: Some(json!({"A": a, "B": neighborhood(g, a).complement()})),
        },
        None => PropCheck {
            name: "connectivity".into(),
            status: sweep_status(exhaustive),
            instances: subsets.len() as u64,
            detail: format!("{label} nonempty A checked against B = V \\ N(A)"),
            witness: None,
        },
    });

    if lambda > 0.0 {
        let witness = subsets.par_iter().find_first(|a| {
            let na = neighborhood(g, a).len() as f64;
            let lhs = na / a.len() as f64;
            let rhs = (d / lambda * (1.0 - na / nf)).powi(2);
            lhs < rhs - SLACK * rhs.max(1.0)
        });
        checks.push(PropCheck {
            name: "vertex-expansion".into(),
            status: if witness.is_some() { PropStatus::Fail } else { sweep_status(exhaustive) },
            instances: subsets.len() as u64,
            detail: format!("{label} nonempty A: |N(A)|/|A| >= ((d/λ)(1 - |N(A)|/n))^2"),
            witness: witness.map(|a| json!({"A": a, "N(A)": neighborhood(g, a)})),
        });
    } else {
        checks.push(PropCheck {
            name: "vertex-expansion".into(),
            status: PropStatus::Skipped,
            instances: 0,
            detail: "hypothesis: λ > 0".into(),
            witness: None,
        });
    }

    let diam = diameter(g);
    let mut growth_witness = None;
    let mut growth_instances = 0u64;
    'outer: for v in 0..n {
        for t in 0..=diam {
            growth_instances += 1;
            let size = ball(g, v, t).expect("valid vertex").len() as f64;
            let growth = if lambda > 0.0 { (d / (2.0 * lambda)).powi(2 * t as i32) } else { f64::INFINITY };
            let need = (nf / 2.0).min(growth);
            if size < need - SLACK * need.max(1.0) {
                growth_witness = Some(json!({"v": v, "t": t, "ball": size, "required": need}));
                break 'outer;
            }
        }
    }
    checks.push(PropCheck {
        name: "volume-growth".into(),
        status: if growth_witness.is_some() { PropStatus::Fail } else { PropStatus::Pass },
        instances: growth_instances,
        detail: format!("|B(v,t)| >= min(n/2, (d/2λ)^(2t)) for all v and t <= {diam}"),
        witness: growth_witness,
    });

    if lambda < d / 2.0 {
        let bound = nf.log2() / (d / (2.0 * lambda)).log2();
        let ok = diam as f64 <= bound + SLACK;
        checks.push(PropCheck {
            name: "diameter".into(),
            status: if ok { PropStatus::Pass } else { PropStatus::Fail },
            instances: 1,
            detail: format!("diam = {diam}, bound log n / log(d/2λ) = {bound:.6}"),
            witness: (!ok).then(|| json!({"diameter": diam, "bound": bound})),
        });
    } else {
        checks.push(PropCheck {
            name: "diameter".into(),
            status: PropStatus::Skipped,
            instances: 0,
            detail: format!("hypothesis: λ < d/2 (λ = {lambda:.6}, d/2 = {})", d / 2.0),
            witness: None,
        });
    }

    PropsReport { graph: g.name().to_string(), profile: p.clone(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GenSpec};
    use crate::spectral::{exhaustive_lambda, spectral_lambda, CertMethod};

    #[test]
    fn k6_passes_and_diameter_is_checked() {
        let g = generate(&GenSpec::Complete { n: 6 }).unwrap();
        let p = spectral_lambda(&g).unwrap();
        let r = verify_expander_props(&g, &p, &PropsOptions::default());
        assert!(r.all_ok(), "{r:#?}");
        let diam = r.checks.iter().find(|c| c.name == "diameter").unwrap();
        assert_eq!(diam.status, PropStatus::Pass);
        // |B(v,1)| = 6 >= min{3, 6.25}; log 6 / log 2.5 ≈ 1.955
        assert!((6f64.log2() / 2.5f64.log2() - 1.955).abs() < 1e-3);
    }

    #[test]
    fn lambda_equal_degree_skips_diameter() {
        let g = generate(&GenSpec::Hypercube { dim: 3 }).unwrap();
        let p = spectral_lambda(&g).unwrap();
        let r = verify_expander_props(&g, &p, &PropsOptions::default());
        let diam = r.checks.iter().find(|c| c.name == "diameter").unwrap();
        assert_eq!(diam.status, PropStatus::Skipped);
        assert!(r.all_ok());
    }

    #[test]
    fn too_small_lambda_is_caught() {
        let g = generate(&GenSpec::Cycle { n: 8 }).unwrap();
        let bogus = ExpanderProfile { n: 8, d: 2, lambda: 0.2, method: CertMethod::Asserted };
        let r = verify_expander_props(&g, &bogus, &PropsOptions::default());
        assert!(!r.all_ok());
        let fail = r.checks.iter().find(|c| c.status == PropStatus::Fail).unwrap();
        assert!(fail.witness.is_some());
    }

    #[test]
    fn sampled_mode_labels_results() {
        let g = generate(&GenSpec::Hypercube { dim: 4 }).unwrap();
        let p = spectral_lambda(&g).unwrap();
        let opts = PropsOptions { exhaustive_cap: 10, samples: 300, seed: 9 };
        let r = verify_expander_props(&g, &p, &opts);
        assert_eq!(r.checks[0].status, PropStatus::Sampled);
    }

    #[test]
    fn exhaustive_certificate_passes_on_petersen() {
        let g = generate(&GenSpec::Petersen).unwrap();
        let p = exhaustive_lambda(&g).unwrap();
        assert!(p.lambda <= 2.0 + 1e-9);
        let r = verify_expander_props(&g, &p, &PropsOptions::default());
        assert!(r.all_ok(), "{r:#?}");
    }
}
