//! Graph containers on expanders: enumeration of `H_k(v,g)`, mutual covers,
//! ψ-approximating pairs and the counting bounds built on them.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, NodeBudget, Result};
use crate::graph::ops::{adjacency_lists, for_each_connected_set, Grow};
use crate::graph::{graph_power, is_k_linked, is_mutual_cover, neighborhood, Graph, VertexSet};
use crate::seed::stream_rng;
use crate::spectral::ExpanderProfile;

const SLACK: f64 = 1e-9;

/// `H_k(v,g)`: k-linked sets `X ∋ v` with `|N(X)| = g`.
pub fn enumerate_h(
    g: &Graph,
    v: usize,
    gsize: usize,
    k: usize,
    budget: &mut NodeBudget,
) -> Result<Vec<VertexSet>> {
    g.check_vertex(v)?;
    if k == 0 {
        return Err(Error::Precondition("linkage k must be positive".into()));
    }
    if gsize > g.n() {
        return Ok(Vec::new());
    }
    let adj = if k == 1 { adjacency_lists(g) } else { adjacency_lists(&graph_power(g, k)) };
    let mut out = Vec::new();
    // N(X) only grows with X, so a set whose neighborhood is already too big
    // has no useful supersets
    for_each_connected_set(&adj, v, budget, |x| {
        let size = neighborhood(g, x).len();
        if size == gsize {
            out.push(x.clone());
        }
        if size > gsize {
            Grow::Prune
        } else {
            Grow::Continue
        }
    })?;
    out.sort_by_cached_key(VertexSet::to_vec);
    Ok(out)
}

/// A mutual cover produced by the sampling construction.
#[derive(Clone, Debug, Serialize)]
pub struct MutualCover {
    pub cover: VertexSet,
    /// `(7 log(4λ/√d)/d)·|N(X)|`.
    pub size_bound: f64,
    pub within_bound: bool,
    pub attempts: usize,
}

pub const COVER_RETRIES: usize = 64;

/// Mutual cover `V ⊆ N(X)` of `X`: a random `Y ⊆ N(X) ∖ Q₀` plus one
/// neighbor for each vertex of `X` left uncovered by `Y`. Resamples up to
/// [`COVER_RETRIES`] times looking for a cover within the size bound, and
/// otherwise returns the smallest one seen.
pub fn mutual_cover(g: &Graph, x: &VertexSet, profile: &ExpanderProfile, seed: u64) -> Result<MutualCover> {
    mutual_cover_with_retries(g, x, profile, seed, COVER_RETRIES)
}

pub fn mutual_cover_with_retries(
    g: &Graph,
    x: &VertexSet,
    profile: &ExpanderProfile,
    seed: u64,
    retries: usize,
) -> Result<MutualCover> {
    if x.is_empty() {
        return Err(Error::Precondition("X must be nonempty".into()));
    }
    let d = profile.d as f64;
    let ratio = 4.0 * profile.lambda / d.sqrt();
    let ell = ratio.powi(4);
    let nx = neighborhood(g, x);
    let q0 = VertexSet::from_ids(g.n(), nx.iter().filter(|&u| g.degree_into(u, x) as f64 >= ell));
    let p = (ell.ln() / d).clamp(0.0, 1.0);
    let size_bound = 7.0 * ratio.log2() / d * nx.len() as f64;
    let pool = nx.difference(&q0).to_vec();

    let mut best: Option<VertexSet> = None;
    let mut attempts = 0;
    for attempt in 0..retries.max(1) {
        attempts = attempt + 1;
        let mut rng = stream_rng(seed, attempt as u64);
        let mut cover = VertexSet::from_ids(g.n(), pool.iter().copied().filter(|_| rng.random_bool(p)));
        let mut reached = neighborhood(g, &cover);
        for u in x.iter() {
            if !reached.contains(u) {
                let w = *g.neighbors(u).iter().min().expect("X lies in a connected graph with n > 1");
                cover.insert(w);
                for &z in g.neighbors(w) {
                    reached.insert(z);
                }
            }
        }
        let done = cover.len() as f64 <= size_bound + SLACK;
        if best.as_ref().is_none_or(|b| cover.len() < b.len()) {
            best = Some(cover);
        }
        if done {
            break;
        }
    }
    let cover = best.expect("at least one attempt");
    debug_assert!(is_mutual_cover(g, x, &cover));
    Ok(MutualCover { within_bound: cover.len() as f64 <= size_bound + SLACK, cover, size_bound, attempts })
}

/// `(S, F)` with `F ⊆ N(X)`, `S ⊇ X`, `d_{V∖F}(u) ≤ ψ` on `S`, `d_S(v) ≤ ψ` off `F`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ApproxPair {
    #[serde(rename = "S")]
    pub s: VertexSet,
    #[serde(rename = "F")]
    pub f: VertexSet,
    pub psi: OrderedPsi,
}

/// ψ stored by bit pattern so pairs can be ordered and deduplicated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct OrderedPsi(u64);

impl From<f64> for OrderedPsi {
    fn from(x: f64) -> Self {
        OrderedPsi(x.to_bits())
    }
}

impl From<OrderedPsi> for f64 {
    fn from(p: OrderedPsi) -> f64 {
        f64::from_bits(p.0)
    }
}

impl ApproxPair {
    pub fn psi(&self) -> f64 {
        self.psi.into()
    }
}

/// The approximating conditions individually.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxCheck {
    pub f_in_neighborhood: bool,
    pub s_contains_x: bool,
    pub s_few_outside_f: bool,
    pub outside_f_few_in_s: bool,
}

impl ApproxCheck {
    pub fn ok(&self) -> bool {
        self.f_in_neighborhood && self.s_contains_x && self.s_few_outside_f && self.outside_f_few_in_s
    }
}

pub fn check_psi_approx(g: &Graph, x: &VertexSet, pair: &ApproxPair) -> ApproxCheck {
    let psi = pair.psi();
    let not_f = pair.f.complement();
    let s_few_outside_f = pair.s.iter().all(|u| g.degree_into(u, &not_f) as f64 <= psi + SLACK);
    let outside_f_few_in_s = not_f.iter().all(|v| g.degree_into(v, &pair.s) as f64 <= psi + SLACK);
    ApproxCheck {
        f_in_neighborhood: pair.f.is_subset(&neighborhood(g, x)),
        s_contains_x: x.is_subset(&pair.s),
        s_few_outside_f,
        outside_f_few_in_s,
    }
}

pub fn is_psi_approx(g: &Graph, x: &VertexSet, pair: &ApproxPair) -> bool {
    check_psi_approx(g, x, pair).ok()
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxOutcome {
    pub pair: ApproxPair,
    pub h: VertexSet,
    pub u: VertexSet,
    /// `|H| ≤ g/ψ` and `|U| ≤ 2g/ψ`.
    pub greedy_bounds_hold: bool,
}

/// Greedy refinement of a mutual cover `V ⊆ N(X)` into a ψ-approximating pair.
pub fn psi_approx_pair(g: &Graph, cover: &VertexSet, x: &VertexSet, psi: f64) -> Result<ApproxOutcome> {
    let d = g.require_regular()? as f64;
    if !(1.0..=d / 2.0).contains(&psi) {
        return Err(Error::Precondition(format!("ψ = {psi} must lie in [1, d/2 = {}]", d / 2.0)));
    }
    let q = neighborhood(g, x);
    if !cover.is_subset(&q) || !is_mutual_cover(g, x, cover) {
        return Err(Error::Precondition("cover must lie in N(X) and mutually cover X".into()));
    }
    let gsize = q.len() as f64;

    let mut h = g.empty_set();
    let mut f_prime = cover.clone();
    while let Some(v) = x.iter().find(|&v| g.degree_into(v, &q.difference(&f_prime)) as f64 > psi) {
        h.insert(v);
        f_prime.union_with(&neighborhood(g, &VertexSet::singleton(g.n(), v)));
    }

    let s_prime =
        VertexSet::from_ids(g.n(), (0..g.n()).filter(|&v| g.degree_into(v, &f_prime) as f64 >= d - psi));
    let outside_q = q.complement();
    let mut u = g.empty_set();
    let mut s = s_prime.clone();
    while let Some(v) = outside_q.iter().find(|&v| g.degree_into(v, &s) as f64 > psi) {
        u.insert(v);
        s = s.difference(&neighborhood(g, &VertexSet::singleton(g.n(), v)));
    }

    let mut f = f_prime;
    for v in 0..g.n() {
        if g.degree_into(v, &s) as f64 > psi {
            f.insert(v);
        }
    }
    let pair = ApproxPair { s, f, psi: psi.into() };
    let check = check_psi_approx(g, x, &pair);
    if !check.ok() {
        return Err(Error::Invariant(format!("greedy pair fails the approximating conditions: {check:?}")));
    }
    let greedy_bounds_hold =
        h.len() as f64 <= gsize / psi + SLACK && u.len() as f64 <= 2.0 * gsize / psi + SLACK;
    Ok(ApproxOutcome { pair, h, u, greedy_bounds_hold })
}

/// ψ = d/6, the choice used for bounding `|H_k(v,g)|`.
pub fn psi_sixth(d: usize) -> f64 {
    d as f64 / 6.0
}

/// ψ = d^{3/2}/(20λ), clamped into `[1, d/2]`.
pub fn psi_tail_preset(d: usize, lambda: f64) -> f64 {
    let d = d as f64;
    (d.powf(1.5) / (20.0 * lambda)).clamp(1.0, d / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyKey {
    pub v: usize,
    pub g: usize,
    pub k: usize,
    pub psi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainerFamily {
    pub key: FamilyKey,
    pub members: Vec<ApproxPair>,
    /// `|H_k(v,g)|`.
    pub sets: usize,
    pub distinct_covers: usize,
    pub covers_within_bound: usize,
    pub max_h: usize,
    pub max_u: usize,
    pub greedy_bounds_hold: bool,
    /// Every enumerated `X` has an approximating member.
    pub covers_all: bool,
    /// `exp((k log(4λ/√d) log d / d + log d / ψ)·g)`, i.e. the family bound with unit constant.
    pub bound_unit: f64,
    /// `ln |family|` divided by the bound's exponent.
    pub empirical_constant: f64,
}

impl ContainerFamily {
    /// One pair per line: `{"S": [...], "F": [...], "psi": ψ}`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for p in &self.members {
            serde_json::to_writer(&mut w, p)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<ApproxPair>> {
        let mut out = Vec::new();
        for line in r.lines() {
            let line = line?;
            if !line.trim().is_empty() {
                out.push(serde_json::from_str(&line)?);
            }
        }
        Ok(out)
    }
}

/// Covers every member of `H_k(v,g)` by a mutual cover, refines each to a
/// ψ-approximating pair and deduplicates.
#[allow(clippy::too_many_arguments)]
pub fn build_container_family(
    g: &Graph,
    v: usize,
    gsize: usize,
    k: usize,
    psi: f64,
    profile: &ExpanderProfile,
    seed: u64,
    budget: &mut NodeBudget,
) -> Result<ContainerFamily> {
    let sets = enumerate_h(g, v, gsize, k, budget)?;
    build_family_from(g, &sets, FamilyKey { v, g: gsize, k, psi }, profile, seed)
}

/// [`build_container_family`] over caller-supplied witnesses.
pub fn build_family_from(
    g: &Graph,
    sets: &[VertexSet],
    key: FamilyKey,
    profile: &ExpanderProfile,
    seed: u64,
) -> Result<ContainerFamily> {
    let mut members = BTreeSet::new();
    let mut covers = BTreeSet::new();
    let (mut within, mut max_h, mut max_u, mut greedy_ok) = (0, 0, 0, true);
    for (i, x) in sets.iter().enumerate() {
        let mc = mutual_cover(g, x, profile, seed.wrapping_add(i as u64))?;
        within += mc.within_bound as usize;
        let out = psi_approx_pair(g, &mc.cover, x, key.psi)?;
        covers.insert(mc.cover);
        max_h = max_h.max(out.h.len());
        max_u = max_u.max(out.u.len());
        greedy_ok &= out.greedy_bounds_hold;
        members.insert(out.pair);
    }
    let members: Vec<ApproxPair> = members.into_iter().collect();
    let covers_all = sets.iter().all(|x| members.iter().any(|p| is_psi_approx(g, x, p)));
    let d = profile.d as f64;
    let exponent = (key.k as f64 * (4.0 * profile.lambda / d.sqrt()).log2() * d.log2() / d
        + d.log2() / key.psi)
        * key.g as f64;
    Ok(ContainerFamily {
        bound_unit: exponent.exp(),
        empirical_constant: empirical_constant(members.len(), exponent),
        key,
        sets: sets.len(),
        distinct_covers: covers.len(),
        covers_within_bound: within,
        max_h,
        max_u,
        greedy_bounds_hold: greedy_ok,
        covers_all,
        members,
    })
}

fn empirical_constant(count: usize, exponent: f64) -> f64 {
    if count <= 1 {
        0.0
    } else if exponent > 0.0 {
        (count as f64).ln() / exponent
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SBoundStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct SBoundReport {
    pub status: SBoundStatus,
    pub s_size: usize,
    pub f_size: usize,
    pub denominator: f64,
    pub bound: Option<f64>,
    pub reason: Option<String>,
}

/// `|S| ≤ (λ/(d(1 − |F|/n) − ψ))²·|F|`, skipped when the denominator is not
/// positive or `|F|` exceeds `fsize_cap`.
pub fn s_bound_check(pair: &ApproxPair, profile: &ExpanderProfile, fsize_cap: Option<usize>) -> SBoundReport {
    let (d, nf) = (profile.d as f64, profile.n as f64);
    let (s_size, f_size) = (pair.s.len(), pair.f.len());
    let denominator = d * (1.0 - f_size as f64 / nf) - pair.psi();
    let skipped = |reason: String| SBoundReport {
        status: SBoundStatus::Skipped,
        s_size,
        f_size,
        denominator,
        bound: None,
        reason: Some(reason),
    };
    if let Some(cap) = fsize_cap {
        if f_size > cap {
            return skipped(format!("|F| = {f_size} exceeds cap {cap}"));
        }
    }
    if denominator <= 0.0 {
        return skipped(format!("d(1 - |F|/n) - ψ = {denominator:.6} <= 0"));
    }
    let bound = (profile.lambda / denominator).powi(2) * f_size as f64;
    let status = if s_size as f64 <= bound * (1.0 + SLACK) + SLACK { SBoundStatus::Pass } else { SBoundStatus::Fail };
    SBoundReport { status, s_size, f_size, denominator, bound: Some(bound), reason: None }
}

/// One row of the `|H_k(v,g)|` comparison.
#[derive(Clone, Debug, Serialize)]
pub struct ContainerRow {
    pub g: usize,
    #[serde(rename = "|H|")]
    pub h_count: u64,
    /// `(e·d^k)^{(2λ/d)² g}`.
    pub bound_naive: f64,
    /// `exp((g/d)·max{k log(4λ/√d) log d, λ²/d})`, the lemma bound with unit constant.
    pub bound_lemma: f64,
    /// `ln |H|` divided by the lemma bound's exponent.
    pub empirical_constant: f64,
    pub status: String,
}

pub fn verify_container_lemma(
    g: &Graph,
    v: usize,
    gsizes: impl IntoIterator<Item = usize>,
    k: usize,
    profile: &ExpanderProfile,
    budget: &mut NodeBudget,
) -> Result<Vec<ContainerRow>> {
    let (d, n, lambda) = (profile.d as f64, profile.n, profile.lambda);
    let mut rows = Vec::new();
    for gs in gsizes {
        let gf = gs as f64;
        let count = enumerate_h(g, v, gs, k, budget)?.len() as u64;
        let bound_naive = (std::f64::consts::E * d.powi(k as i32)).powf((2.0 * lambda / d).powi(2) * gf);
        let exponent = gf / d
            * (k as f64 * (4.0 * lambda / d.sqrt()).log2() * d.log2()).max(lambda * lambda / d);
        let status = if (gs as f64) < d {
            "skipped:g<d".to_string()
        } else if 2 * gs > n {
            "skipped:g>n/2".to_string()
        } else if count as f64 <= bound_naive {
            "below-naive".to_string()
        } else {
            "above-naive".to_string()
        };
        rows.push(ContainerRow {
            g: gs,
            h_count: count,
            bound_naive,
            bound_lemma: exponent.exp(),
            empirical_constant: empirical_constant(count as usize, exponent),
            status,
        });
    }
    Ok(rows)
}

/// Whether every mutual cover here of a k-linked `X` is (k+2)-linked.
pub fn cover_linkage_holds(g: &Graph, x: &VertexSet, cover: &VertexSet, k: usize) -> bool {
    !is_k_linked(g, x, k) || is_k_linked(g, cover, k + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GenSpec};
    use crate::spectral::spectral_lambda;

    fn gen(spec: GenSpec) -> Graph {
        generate(&spec).unwrap()
    }

    fn h(g: &Graph, v: usize, gs: usize, k: usize) -> Vec<Vec<usize>> {
        enumerate_h(g, v, gs, k, &mut NodeBudget::default()).unwrap().iter().map(VertexSet::to_vec).collect()
    }

    #[test]
    fn h_on_c5() {
        let c5 = gen(GenSpec::Cycle { n: 5 });
        assert_eq!(h(&c5, 0, 2, 1), vec![vec![0]]);
        // arcs {0,1} and {4,0} have |N| = 4; the 3-arc through 0 reaches all 5
        assert_eq!(h(&c5, 0, 4, 1), vec![vec![0, 1], vec![0, 4]]);
        assert_eq!(h(&c5, 0, 5, 1).len(), 3 + 4 + 1);
        assert!(h(&c5, 0, 6, 1).is_empty());
    }

    #[test]
    fn h_matches_brute_force() {
        let g = gen(GenSpec::Petersen);
        for k in 1..=2 {
            for gs in 0..=10 {
                let mut want = Vec::new();
                for mask in 1u64..(1 << 10) {
                    let x = VertexSet::from_mask(10, mask);
                    if x.contains(0) && is_k_linked(&g, &x, k) && neighborhood(&g, &x).len() == gs {
                        want.push(x.to_vec());
                    }
                }
                want.sort();
                assert_eq!(h(&g, 0, gs, k), want, "k={k} g={gs}");
            }
        }
    }

    #[test]
    fn mutual_cover_of_singleton() {
        let g = gen(GenSpec::Complete { n: 6 });
        let p = spectral_lambda(&g).unwrap();
        let x = VertexSet::singleton(6, 2);
        let mc = mutual_cover(&g, &x, &p, 0).unwrap();
        assert!(is_mutual_cover(&g, &x, &mc.cover));
        assert!(mc.cover.is_subset(&neighborhood(&g, &x)));
        // log2(4/√5) ≈ 0.8390, so the bound is 7·0.839/5·5 ≈ 5.87
        assert!((mc.size_bound - 7.0 * (4.0 / 5f64.sqrt()).log2()).abs() < 1e-9);
    }

    #[test]
    fn covers_on_random_regular() {
        let g = gen(GenSpec::RandomRegular { n: 12, d: 4, seed: 2 });
        let p = spectral_lambda(&g).unwrap();
        let sets = enumerate_h(&g, 0, 8, 1, &mut NodeBudget::default()).unwrap();
        assert!(!sets.is_empty());
        for (i, x) in sets.iter().enumerate() {
            let mc = mutual_cover(&g, x, &p, i as u64).unwrap();
            assert!(is_mutual_cover(&g, x, &mc.cover));
            assert!(cover_linkage_holds(&g, x, &mc.cover, 1));
        }
    }

    #[test]
    fn trivial_pair_validates() {
        let g = gen(GenSpec::Petersen);
        let x = VertexSet::from_ids(10, [0, 1]);
        let pair = ApproxPair { s: x.clone(), f: neighborhood(&g, &x), psi: 0.0.into() };
        // X's neighbors all lie in F, and vertices outside F see no vertex of X
        assert!(is_psi_approx(&g, &x, &pair));
        let bad = ApproxPair { s: x.clone(), f: g.vertex_set(), psi: 1.0.into() };
        assert!(!check_psi_approx(&g, &x, &bad).f_in_neighborhood);
    }

    #[test]
    fn greedy_pair_validates() {
        let g = gen(GenSpec::Hypercube { dim: 4 });
        let p = spectral_lambda(&g).unwrap();
        let x = VertexSet::singleton(16, 5);
        let mc = mutual_cover(&g, &x, &p, 3).unwrap();
        let out = psi_approx_pair(&g, &mc.cover, &x, 1.0).unwrap();
        assert!(out.pair.s.contains(5));
        assert!(out.greedy_bounds_hold);
        assert!(psi_approx_pair(&g, &mc.cover, &x, 3.0).is_err());
        assert!(psi_approx_pair(&g, &x, &x, 1.0).is_err());
    }

    #[test]
    fn family_covers_everything() {
        let g = gen(GenSpec::Petersen);
        let p = spectral_lambda(&g).unwrap();
        for gs in 3..=8 {
            let fam = build_container_family(&g, 0, gs, 1, 1.0, &p, 1, &mut NodeBudget::default()).unwrap();
            assert!(fam.covers_all, "g={gs}");
            assert!(fam.greedy_bounds_hold);
            assert!(fam.members.len() <= fam.sets);
        }
        let empty = build_container_family(&g, 0, 1, 1, 1.0, &p, 1, &mut NodeBudget::default()).unwrap();
        assert!(empty.members.is_empty() && empty.covers_all);
    }

    #[test]
    fn s_bound_examples() {
        let g = gen(GenSpec::Complete { n: 6 });
        let p = spectral_lambda(&g).unwrap();
        let pair = ApproxPair {
            s: VertexSet::singleton(6, 0),
            f: neighborhood(&g, &VertexSet::singleton(6, 0)),
            psi: 1.0.into(),
        };
        assert_eq!(s_bound_check(&pair, &p, None).status, SBoundStatus::Skipped);
        let empty = ApproxPair { s: g.empty_set(), f: g.empty_set(), psi: 1.0.into() };
        assert_eq!(s_bound_check(&empty, &p, None).status, SBoundStatus::Pass);
    }

    #[test]
    fn jsonl_round_trip() {
        let g = gen(GenSpec::Petersen);
        let p = spectral_lambda(&g).unwrap();
        let fam = build_container_family(&g, 0, 6, 1, 1.0, &p, 1, &mut NodeBudget::default()).unwrap();
        let mut buf = Vec::new();
        fam.write_jsonl(&mut buf).unwrap();
        let first = String::from_utf8(buf.clone()).unwrap();
        assert!(first.starts_with("{\"S\":["));
        let back = ContainerFamily::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back.len(), fam.members.len());
        for (a, b) in back.iter().zip(&fam.members) {
            assert_eq!(a.s.to_vec(), b.s.to_vec());
            assert_eq!(a.psi(), b.psi());
        }
    }

    #[test]
    fn container_rows() {
        let g = gen(GenSpec::Petersen);
        let p = spectral_lambda(&g).unwrap();
        let rows = verify_container_lemma(&g, 0, 1..=6, 1, &p, &mut NodeBudget::default()).unwrap();
        assert_eq!(rows[0].status, "skipped:g<d");
        assert_eq!(rows[5].status, "skipped:g>n/2");
        assert!(rows.windows(2).all(|w| w[0].bound_naive <= w[1].bound_naive));
        assert!(rows.windows(2).all(|w| w[0].bound_lemma <= w[1].bound_lemma));
    }
}
