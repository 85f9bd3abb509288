//! Superlevel-set structure of Lipschitz functions above a ground state.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, NodeBudget, Result};
use crate::gates::{gate, tail_bound, Constants, Gate};
use crate::graph::{ball, closure, k_linked_components, outer_boundary, Graph, VertexSet};
use crate::lipschitz::{enumerate_onepoint, flaw_count, Counter, EnsembleSpec, FlawCap, LipschitzFn};

/// `A`: 2-linked component of `{f ≥ k+M+1}` containing `w0`.
/// `B`: 4-linked component of `{f ≥ k+2M+2}` containing `w0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlawDecomposition {
    pub w0: usize,
    pub k: i64,
    #[serde(rename = "M")]
    pub m: u32,
    pub a: VertexSet,
    pub b: VertexSet,
    pub thresholds: (i64, i64),
}

fn component_at(g: &Graph, f: &LipschitzFn, level: i64, linkage: usize, w0: usize) -> VertexSet {
    if f.value(w0) < level {
        return g.empty_set();
    }
    let sup = VertexSet::from_ids(g.n(), (0..g.n()).filter(|&v| f.value(v) >= level));
    k_linked_components(g, &sup, linkage)
        .into_iter()
        .find(|c| c.contains(w0))
        .expect("w0 lies in its superlevel set")
}

pub fn flaw_decomposition(g: &Graph, f: &LipschitzFn, w0: usize, k: i64) -> Result<FlawDecomposition> {
    g.check_vertex(w0)?;
    if f.values().len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: f.values().len() });
    }
    let m = f.m() as i64;
    let thresholds = (k + m + 1, k + 2 * m + 2);
    Ok(FlawDecomposition {
        w0,
        k,
        m: f.m(),
        a: component_at(g, f, thresholds.0, 2, w0),
        b: component_at(g, f, thresholds.1, 4, w0),
        thresholds,
    })
}

/// `B⁺ ⊆ A`.
pub fn check_b_in_a_interior(g: &Graph, dec: &FlawDecomposition) -> Result<bool> {
    if dec.b.is_empty() {
        return Err(Error::Precondition("B is empty".into()));
    }
    Ok(closure(g, &dec.b).is_subset(&dec.a))
}

/// Checks `B⁺ ⊆ A` at every anchor with nonempty `B`; returns the number of
/// anchors checked and the first failing one.
pub fn check_b_in_a_all_anchors(g: &Graph, f: &LipschitzFn, k: i64) -> Result<(usize, Option<usize>)> {
    let mut checked = 0;
    for w0 in 0..g.n() {
        let dec = flaw_decomposition(g, f, w0, k)?;
        if dec.b.is_empty() {
            continue;
        }
        checked += 1;
        if !check_b_in_a_interior(g, &dec)? {
            return Ok((checked, Some(w0)));
        }
    }
    Ok((checked, None))
}

/// `{lemma, instances_checked, failures, stats}`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instances_checked: u64,
    pub failures: Vec<Vec<i64>>,
    pub stats: serde_json::Value,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every member of `Lip_{v0}(G;M)` has a ground state. Reports the worst
/// minimum flaw count as a fraction of `(2λ/d)n`.
pub fn verify_ground_state_lemma(
    g: &Graph,
    m: u32,
    lambda: f64,
    v0: usize,
    budget: NodeBudget,
) -> Result<LemmaReport> {
    let cap = FlawCap::new(g, lambda)?;
    let mut checked = 0u64;
    let mut failures = Vec::new();
    let mut worst = 0usize;
    let mut iter = enumerate_onepoint(g, v0, m, budget)?;
    for f in iter.by_ref() {
        let f = f?;
        checked += 1;
        let best = (f.min_value() - m as i64..=f.max_value())
            .map(|k| flaw_count(f.values(), k, m))
            .min()
            .unwrap_or(0);
        worst = worst.max(best);
        if best > cap.cap() {
            failures.push(f.values().to_vec());
        }
    }
    let ratio = if cap.threshold > 0.0 {
        worst as f64 / cap.threshold
    } else if worst == 0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(LemmaReport {
        lemma: "ground-state-existence".into(),
        instances_checked: checked,
        failures,
        stats: json!({
            "threshold": cap.threshold,
            "cap": cap.cap(),
            "worst_min_flaws": worst,
            "max_flaw_ratio": ratio,
            "nodes_explored": iter.nodes_explored(),
        }),
    })
}

/// Ordering of `S⁺`: a vertex of `S` within distance 2 of `V ∖ S⁺`, then the
/// rest of `S` by BFS layers of `G⁴[S]`, then `∂S` by id.
///
/// `S` is taken to be the interior of `S⁺`, the largest set with closure
/// `S⁺`; it is 4-linked whenever some 4-linked set has closure `S⁺`.
pub fn boundary_ordering(g: &Graph, s_plus: &VertexSet) -> Result<Vec<usize>> {
    let s = crate::graph::interior(g, s_plus);
    if closure(g, &s) != *s_plus {
        return Err(Error::Precondition("set is not the closure of any vertex set".into()));
    }
    boundary_ordering_of(g, &s)
}

/// [`boundary_ordering`] for `S⁺` given through `S` itself.
pub fn boundary_ordering_of(g: &Graph, s: &VertexSet) -> Result<Vec<usize>> {
    let s_plus = closure(g, s);
    let outside = s_plus.complement();
    if outside.is_empty() {
        return Err(Error::Precondition("S⁺ = V leaves no vertex outside".into()));
    }
    if s.is_empty() {
        return Err(Error::Precondition("S is empty".into()));
    }
    let near = crate::graph::ball_of_set(g, &outside, 2);
    let start = s
        .iter()
        .find(|&v| near.contains(v))
        .ok_or_else(|| Error::Precondition("no vertex of S within distance 2 of V ∖ S⁺".into()))?;
    let mut order = vec![start];
    let mut seen = VertexSet::singleton(g.n(), start);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for w in ball(g, u, 4)?.intersection(s).difference(&seen).to_vec() {
            seen.insert(w);
            order.push(w);
        }
    }
    if order.len() != s.len() {
        return Err(Error::Precondition("S is not 4-linked".into()));
    }
    order.extend(outer_boundary(g, s).iter());
    Ok(order)
}

/// Which of the three ordering properties hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingCheck {
    pub permutation: bool,
    pub first_near_outside: bool,
    pub s_before_boundary: bool,
    pub predecessor_within_4: bool,
}

impl OrderingCheck {
    pub fn ok(&self) -> bool {
        self.permutation && self.first_near_outside && self.s_before_boundary && self.predecessor_within_4
    }
}

pub fn check_boundary_ordering(g: &Graph, s: &VertexSet, order: &[usize]) -> OrderingCheck {
    let s_plus = closure(g, s);
    let as_set = VertexSet::from_ids(g.n(), order.iter().copied());
    let permutation = as_set == s_plus && order.len() == s_plus.len();
    let first_near_outside = order.first().is_some_and(|&v| {
        let dist = g.distances_from(v);
        s_plus.complement().iter().any(|w| dist[w] <= 2)
    });
    let s_before_boundary = order
        .iter()
        .position(|&v| !s.contains(v))
        .is_none_or(|p| order[p..].iter().all(|&v| !s.contains(v)));
    let predecessor_within_4 = (1..order.len()).all(|i| {
        let dist = g.distances_from(order[i]);
        order[..i].iter().any(|&u| dist[u] <= 4)
    });
    OrderingCheck { permutation, first_near_outside, s_before_boundary, predecessor_within_4 }
}

#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    pub w0: usize,
    pub k: i64,
    pub t: u32,
    #[serde(rename = "M")]
    pub m: u32,
    /// Members with `f(w0) > k + tM + 1`.
    pub favorable: String,
    pub total: String,
    pub probability: f64,
    pub ball_size: usize,
    pub bound: f64,
    pub gate: Gate,
    /// The inequality is asserted only when the gate holds.
    pub asserted: bool,
    pub satisfied: bool,
}

impl TailReport {
    pub fn passed(&self) -> bool {
        !self.asserted || self.satisfied
    }
}

/// Exact `P(f(w0) > k + tM + 1)` for `f` uniform on `Lip*_k` by exhaustive
/// counting, for each `t` in `ts`.
#[allow(clippy::too_many_arguments)]
pub fn conditional_tail_exact(
    g: &Graph,
    m: u32,
    lambda: f64,
    w0: usize,
    k: i64,
    ts: &[u32],
    constants: &Constants,
    budget: NodeBudget,
) -> Result<Vec<TailReport>> {
    g.check_vertex(w0)?;
    let d = g.require_regular()?;
    let spec = EnsembleSpec::ground_state(g, m, k, lambda)?;
    let mut counter = Counter::new(g, &spec, budget.clone())?;
    let total = counter.count()?;
    if total.is_zero() {
        return Err(Error::EmptyEnsemble);
    }
    let gate = gate(g.n(), d, lambda, m, constants);
    let mut out = Vec::with_capacity(ts.len());
    let mut remaining = NodeBudget::new(budget.limit().saturating_sub(counter.nodes_explored()));
    for &t in ts {
        if t < 2 {
            return Err(Error::Precondition(format!("t = {t} must be at least 2")));
        }
        let floor = k + t as i64 * m as i64 + 2;
        let mut c = Counter::new(g, &spec, remaining.clone())?.restrict(g, w0, floor, i64::MAX)?;
        let favorable = c.count()?;
        remaining = NodeBudget::new(remaining.limit().saturating_sub(c.nodes_explored()));
        let probability = ratio(&favorable, &total);
        let ball_size = ball(g, w0, t as usize - 1)?.len();
        let bound = tail_bound(ball_size, m);
        let satisfied = probability <= bound + 1e-12;
        out.push(TailReport {
            w0,
            k,
            t,
            m,
            favorable: favorable.to_string(),
            total: total.to_string(),
            probability,
            ball_size,
            bound,
            gate: gate.clone(),
            asserted: gate.holds,
            satisfied,
        });
    }
    Ok(out)
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    // scale down both so the quotient stays accurate for huge counts
    let shift = b.bits().saturating_sub(60);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GenSpec};
    use crate::lipschitz::{glauber_chain, GlauberChain};
    use crate::spectral::spectral_lambda;

    fn gen(spec: GenSpec) -> Graph {
        generate(&spec).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let c4 = gen(GenSpec::Cycle { n: 4 });
        let f = LipschitzFn::new(&c4, vec![0, 1, 2, 1], 1).unwrap();
        let dec = flaw_decomposition(&c4, &f, 2, 0).unwrap();
        assert_eq!(dec.a.to_vec(), vec![2]);
        assert!(dec.b.is_empty());
        assert!(check_b_in_a_interior(&c4, &dec).is_err());

        let p5 = gen(GenSpec::Path { n: 5 });
        let f = LipschitzFn::new(&p5, vec![0, 1, 2, 3, 4], 1).unwrap();
        let dec = flaw_decomposition(&p5, &f, 4, 0).unwrap();
        assert_eq!(dec.a.to_vec(), vec![2, 3, 4]);
        assert_eq!(dec.b.to_vec(), vec![4]);
        assert!(check_b_in_a_interior(&p5, &dec).unwrap());

        let dec = flaw_decomposition(&p5, &f, 1, 0).unwrap();
        assert!(dec.a.is_empty() && dec.b.is_empty());
    }

    #[test]
    fn decomposition_is_shift_equivariant() {
        let p5 = gen(GenSpec::Path { n: 5 });
        let f = LipschitzFn::new(&p5, vec![0, 1, 2, 3, 4], 1).unwrap();
        let a = flaw_decomposition(&p5, &f, 4, 0).unwrap();
        let b = flaw_decomposition(&p5, &f.shifted(3), 4, 3).unwrap();
        assert_eq!((a.a, a.b), (b.a, b.b));
    }

    #[test]
    fn b_inside_a_on_glauber_samples() {
        let g = gen(GenSpec::RandomRegular { n: 10, d: 3, seed: 4 });
        let spec = EnsembleSpec::one_point(0, 1);
        let mut chain = GlauberChain::new(&g, &spec, 8).unwrap();
        let mut nonempty = 0;
        for _ in 0..300 {
            chain.run(50);
            let f = chain.state();
            let k = f.min_value() - 1;
            let (checked, fail) = check_b_in_a_all_anchors(&g, &f, k).unwrap();
            assert_eq!(fail, None, "{f:?}");
            nonempty += checked;
        }
        assert!(nonempty > 0);
        let _ = glauber_chain(&g, &spec, 0, 10).unwrap();
    }

    #[test]
    fn ground_state_lemma_on_k6() {
        let g = gen(GenSpec::Complete { n: 6 });
        let r = verify_ground_state_lemma(&g, 1, 1.0, 0, NodeBudget::default()).unwrap();
        assert_eq!(r.instances_checked, 63);
        assert!(r.passed());
        assert!(r.stats["max_flaw_ratio"].as_f64().unwrap() <= 1.0);
    }

    #[test]
    fn ordering_singleton_and_pair() {
        let c8 = gen(GenSpec::Cycle { n: 8 });
        let s = VertexSet::singleton(8, 3);
        let order = boundary_ordering_of(&c8, &s).unwrap();
        assert_eq!(order, vec![3, 2, 4]);
        assert!(check_boundary_ordering(&c8, &s, &order).ok());
        assert_eq!(boundary_ordering(&c8, &closure(&c8, &s)).unwrap(), order);

        let pair = VertexSet::from_ids(8, [1, 4]);
        let order = boundary_ordering_of(&c8, &pair).unwrap();
        assert_eq!(&order[..2], &[1, 4]);
        assert!(check_boundary_ordering(&c8, &pair, &order).ok());
    }

    #[test]
    fn ordering_rejects_full_closure() {
        let k4 = gen(GenSpec::Complete { n: 4 });
        assert!(boundary_ordering_of(&k4, &VertexSet::singleton(4, 0)).is_err());
    }

    #[test]
    fn validator_catches_bad_orders() {
        let c8 = gen(GenSpec::Cycle { n: 8 });
        let s = VertexSet::from_ids(8, [3, 4]);
        let chk = check_boundary_ordering(&c8, &s, &[3, 2, 4, 5]);
        assert!(!chk.s_before_boundary);
        let chk = check_boundary_ordering(&c8, &s, &[3, 4, 2]);
        assert!(!chk.permutation);
    }

    #[test]
    fn k6_tail() {
        let g = gen(GenSpec::Complete { n: 6 });
        let lambda = spectral_lambda(&g).unwrap().lambda;
        let reps = conditional_tail_exact(&g, 1, lambda, 0, 0, &[2, 3, 4], &Constants::default(), NodeBudget::default())
            .unwrap();
        assert_eq!(reps[0].total, "106");
        // on K6 every value lies within 1 of every other, and at most 2 flaws are allowed
        assert_eq!(reps[0].favorable, "0");
        assert!(reps.windows(2).all(|w| w[1].probability <= w[0].probability));
        assert!(reps.iter().all(TailReport::passed));
        assert_eq!(reps[0].ball_size, 6);
    }

    #[test]
    fn tail_on_cycle_is_monotone() {
        let g = gen(GenSpec::Cycle { n: 6 });
        let reps =
            conditional_tail_exact(&g, 1, 1.0, 0, 0, &[2, 3, 4, 5, 6], &Constants::default(), NodeBudget::default())
                .unwrap();
        assert!(reps[0].probability > 0.0);
        assert!(reps.windows(2).all(|w| w[1].probability <= w[0].probability));
        // box top is k + M + nM = 7
        assert!(reps[3].probability > 0.0);
        assert_eq!(reps[4].probability, 0.0);
        assert!(!reps[0].asserted);
    }
}
