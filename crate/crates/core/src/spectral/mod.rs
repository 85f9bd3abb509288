//! λ-expander certificates: spectral (via the expander mixing lemma) and
//! exhaustive (the smallest λ satisfying the discrepancy inequality over all
//! vertex-subset pairs).

mod props;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use props::{verify_expander_props, PropCheck, PropStatus, PropsOptions, PropsReport};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default vertex cap for exhaustive subset sweeps.
pub const EXHAUSTIVE_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMethod {
    Spectral,
    Exhaustive,
    Asserted,
}

/// `(n, d, λ)` for a d-regular graph, with the way λ was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderProfile {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub method: CertMethod,
}

impl ExpanderProfile {
    /// Wraps a caller-supplied λ after checking regularity and `0 <= λ <= d`.
    pub fn asserted(g: &Graph, lambda: f64) -> Result<Self> {
        let d = g.require_regular()?;
        if !(lambda >= 0.0 && lambda <= d as f64 + 1e-9) {
            return Err(Error::Precondition(format!("asserted λ={lambda} must lie in [0, d={d}]")));
        }
        Ok(ExpanderProfile { n: g.n(), d, lambda, method: CertMethod::Asserted })
    }

    /// `(2λ/d) n`, the flaw allowance of a ground state.
    pub fn flaw_threshold(&self) -> f64 {
        2.0 * self.lambda / self.d as f64 * self.n as f64
    }
}

/// Adjacency spectrum, eigenvalues sorted in decreasing order.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `max ‖A x − μ x‖∞` over the returned eigenpairs.
    pub max_residual: f64,
}

pub fn spectrum(g: &Graph) -> Result<Spectrum> {
    let n = g.n();
    let a = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = a
        .clone()
        .try_symmetric_eigen(1e-14, 10_000)
        .ok_or_else(|| Error::Eigensolver("symmetric eigensolver did not converge".into()))?;
    let mut max_residual = 0.0f64;
    for (i, &mu) in eig.eigenvalues.iter().enumerate() {
        let x = eig.eigenvectors.column(i);
        let r: nalgebra::DVector<f64> = &a * x - x * mu;
        max_residual = max_residual.max(r.amax());
    }
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum { eigenvalues, max_residual })
}

/// `λ = max(|λ₂|, |λ_n|)` of the adjacency matrix of a regular graph.
pub fn spectral_lambda(g: &Graph) -> Result<ExpanderProfile> {
    let d = g.require_regular()?;
    let spec = spectrum(g)?;
    let tol = 1e-7 * (d.max(1) as f64);
    if spec.max_residual > tol {
        return Err(Error::Eigensolver(format!(
            "residual {:.3e} exceeds {:.1e}",
            spec.max_residual, tol
        )));
    }
    // drop one copy of the Perron eigenvalue d
    let lambda = spec.eigenvalues[1..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(ExpanderProfile { n: g.n(), d, lambda, method: CertMethod::Spectral })
}

/// Exhaustive λ together with the pair `(S, T)` attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveCertificate {
    pub profile: ExpanderProfile,
    pub binding_s: VertexSet,
    pub binding_t: VertexSet,
}

pub fn exhaustive_lambda(g: &Graph) -> Result<ExpanderProfile> {
    exhaustive_lambda_with_cap(g, EXHAUSTIVE_CAP).map(|c| c.profile)
}

/// Smallest λ with `|e(S,T) − (d/n)|S||T|| ≤ λ √(|S||T|)` for all nonempty `S, T`.
///
/// For a fixed `S`, `e(S,T) = Σ_{w∈T} d_S(w)`, so over all `T` of a given size
/// the extreme values of `e(S,T)` come from the largest and smallest `d_S`
/// values. That reduces the sweep to all `S` with a sort per `S`; every
/// comparison is done on the exact squared ratio
/// `(e·n − d·s·t)² / (n²·s·t)`.
pub fn exhaustive_lambda_with_cap(g: &Graph, cap: usize) -> Result<ExhaustiveCertificate> {
    let d = g.require_regular()?;
    let n = g.n();
    if n > cap || n > 30 {
        return Err(Error::CapExceeded { n, cap: cap.min(30) });
    }
    let adj = g.adjacency_masks().expect("n <= 30");

    #[derive(Clone, Copy)]
    struct Best {
        num: u128,
        den: u128,
        s: u64,
        t: u64,
    }
    let better = |a: Best, b: Best| if a.num * b.den >= b.num * a.den { a } else { b };

    let best = (1u64..(1u64 << n))
        .into_par_iter()
        .map(|s_mask| {
            let s = s_mask.count_ones() as i128;
            let mut deg: Vec<(u32, usize)> =
                (0..n).map(|w| ((adj[w] & s_mask).count_ones(), w)).collect();
            deg.sort_unstable();
            let mut best = Best { num: 0, den: 1, s: s_mask, t: 1 };
            let (mut low_sum, mut high_sum) = (0i128, 0i128);
            let (mut low_mask, mut high_mask) = (0u64, 0u64);
            for t in 1..=n {
                let (lo_deg, lo_w) = deg[t - 1];
                let (hi_deg, hi_w) = deg[n - t];
                low_sum += lo_deg as i128;
                high_sum += hi_deg as i128;
                low_mask |= 1 << lo_w;
                high_mask |= 1 << hi_w;
                let ti = t as i128;
                let den = (n as u128).pow(2) * (s * ti) as u128;
                for (e, mask) in [(low_sum, low_mask), (high_sum, high_mask)] {
                    let diff = e * n as i128 - d as i128 * s * ti;
                    let cand = Best { num: (diff * diff) as u128, den, s: s_mask, t: mask };
                    best = better(best, cand);
                }
            }
            best
        })
        .reduce(|| Best { num: 0, den: 1, s: 1, t: 1 }, better);

    let lambda = (best.num as f64 / best.den as f64).sqrt();
    Ok(ExhaustiveCertificate {
        profile: ExpanderProfile { n, d, lambda, method: CertMethod::Exhaustive },
        binding_s: VertexSet::from_mask(n, best.s),
        binding_t: VertexSet::from_mask(n, best.t),
    })
}

/// `e(S, T)`: edges with one endpoint in each set, counted twice inside `S ∩ T`.
pub fn edges_between(g: &Graph, s: &VertexSet, t: &VertexSet) -> usize {
    s.iter().map(|u| g.degree_into(u, t)).sum()
}

/// Exact diameter by BFS from every vertex.
pub fn diameter(g: &Graph) -> usize {
    (0..g.n())
        .into_par_iter()
        .map(|v| g.distances_from(v).into_iter().max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GenSpec};

    fn gen(spec: GenSpec) -> Graph {
        generate(&spec).unwrap()
    }

    #[test]
    fn spectral_values() {
        let k6 = spectral_lambda(&gen(GenSpec::Complete { n: 6 })).unwrap();
        assert!((k6.lambda - 1.0).abs() < 1e-9);
        let c4 = spectral_lambda(&gen(GenSpec::Cycle { n: 4 })).unwrap();
        assert!((c4.lambda - 2.0).abs() < 1e-9);
        let q3 = spectral_lambda(&gen(GenSpec::Hypercube { dim: 3 })).unwrap();
        assert!((q3.lambda - 3.0).abs() < 1e-9);
        let pet = spectral_lambda(&gen(GenSpec::Petersen)).unwrap();
        assert!((pet.lambda - 2.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_rejects_irregular() {
        let p3 = gen(GenSpec::Path { n: 3 });
        assert!(matches!(spectral_lambda(&p3), Err(Error::NotRegular)));
        assert!(matches!(exhaustive_lambda(&p3), Err(Error::NotRegular)));
    }

    #[test]
    fn exhaustive_k3() {
        let cert = exhaustive_lambda_with_cap(&gen(GenSpec::Complete { n: 3 }), 14).unwrap();
        assert!((cert.profile.lambda - 2.0 / 3.0).abs() < 1e-12);
        // binding pair S = T = {v}
        assert_eq!(cert.binding_s.len(), 1);
        assert_eq!(cert.binding_s, cert.binding_t);
    }

    #[test]
    fn exhaustive_cap() {
        let q4 = gen(GenSpec::Hypercube { dim: 4 });
        assert!(matches!(exhaustive_lambda(&q4), Err(Error::CapExceeded { .. })));
        assert!(exhaustive_lambda_with_cap(&q4, 16).is_ok());
    }

    #[test]
    fn full_sets_never_bind() {
        let g = gen(GenSpec::Petersen);
        let v = g.vertex_set();
        let e = edges_between(&g, &v, &v);
        assert_eq!(e, 2 * g.edge_count());
        assert_eq!(e, 3 * g.n());
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&gen(GenSpec::Cycle { n: 6 })), 3);
        assert_eq!(diameter(&gen(GenSpec::Complete { n: 5 })), 1);
        assert_eq!(diameter(&gen(GenSpec::Hypercube { dim: 4 })), 4);
    }

    #[test]
    fn asserted_profile_bounds() {
        let g = gen(GenSpec::Complete { n: 6 });
        assert!(ExpanderProfile::asserted(&g, 6.0).is_err());
        let p = ExpanderProfile::asserted(&g, 1.0).unwrap();
        assert!((p.flaw_threshold() - 2.4).abs() < 1e-12);
    }
}
