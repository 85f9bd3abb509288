use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{Ensemble, EnsembleSpec, LipschitzFn};
use crate::error::{Error, NodeBudget, Result};
use crate::graph::Graph;
use crate::seed::{stream_rng, uniform_below};

/// Vertex order and per-position constraints shared by the enumerator, the
/// counter and the sampler. Values are indexed by position, not vertex id.
#[derive(Clone, Debug)]
struct Plan {
    order: Vec<usize>,
    /// Positions of neighbors placed earlier.
    earlier: Vec<Vec<usize>>,
    /// For each position `p`, the positions `< p` with a neighbor at `>= p`.
    frontier: Vec<Vec<usize>>,
    m: i64,
    /// Per-position inclusive bounds (box, pin and floors folded in).
    bounds: Vec<(i64, i64)>,
    window: Option<(i64, i64)>,
    flaw_cap: usize,
}

impl Plan {
    fn new(g: &Graph, spec: &EnsembleSpec) -> Result<Plan> {
        spec.validate_for(g)?;
        let n = g.n();
        let m = spec.m as i64;
        let (root, window, flaw_cap, bounds) = match spec.ensemble {
            Ensemble::OnePoint { v0 } => (v0, None, usize::MAX, vec![(i64::MIN, i64::MAX); n]),
            Ensemble::GroundState { k, flaw_cap, .. } => {
                let slack = n as i64 * m;
                (0, Some((k, k + m)), flaw_cap, vec![(k - slack, k + m + slack); n])
            }
        };
        let order = g.bfs_order(root);
        let mut pos_of = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos_of[v] = p;
        }
        let earlier: Vec<Vec<usize>> = order
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                let mut e: Vec<usize> =
                    g.neighbors(v).iter().map(|&w| pos_of[w]).filter(|&q| q < p).collect();
                e.sort_unstable();
                e
            })
            .collect();
        // last position at which each vertex is still needed
        let last_use: Vec<usize> = order
            .iter()
            .enumerate()
            .map(|(p, &v)| g.neighbors(v).iter().map(|&w| pos_of[w]).fold(p, usize::max))
            .collect();
        let frontier =
            (0..=n).map(|p| (0..p).filter(|&q| last_use[q] >= p).collect()).collect();
        let mut plan = Plan { order, earlier, frontier, m, bounds, window, flaw_cap };
        if let Ensemble::OnePoint { .. } = spec.ensemble {
            plan.bounds[0] = (0, 0);
        }
        Ok(plan)
    }

    fn n(&self) -> usize {
        self.order.len()
    }

    fn restrict(&mut self, g: &Graph, v: usize, lo: i64, hi: i64) -> Result<()> {
        g.check_vertex(v)?;
        let p = self.order.iter().position(|&w| w == v).expect("vertex in order");
        let b = &mut self.bounds[p];
        *b = (b.0.max(lo), b.1.min(hi));
        Ok(())
    }

    fn interval(&self, p: usize, vals: &[i64]) -> (i64, i64) {
        let (mut lo, mut hi) = self.bounds[p];
        for &q in &self.earlier[p] {
            lo = lo.max(vals[q] - self.m);
            hi = hi.min(vals[q] + self.m);
        }
        (lo, hi)
    }

    fn is_flaw(&self, x: i64) -> bool {
        match self.window {
            Some((a, b)) => x < a || x > b,
            None => false,
        }
    }

    fn to_fn(&self, vals: &[i64]) -> LipschitzFn {
        let mut values = vec![0; self.n()];
        for (p, &v) in self.order.iter().enumerate() {
            values[v] = vals[p];
        }
        LipschitzFn::from_parts(values, self.m as u32)
    }
}

/// Depth-first stream of every member of an ensemble, each exactly once, in
/// lexicographic order of the value vector read along the BFS vertex order.
pub struct LipIter {
    plan: Plan,
    vals: Vec<i64>,
    hi: Vec<i64>,
    flaws: Vec<usize>,
    started: bool,
    done: bool,
    budget: NodeBudget,
}

impl LipIter {
    fn new(plan: Plan, budget: NodeBudget) -> Self {
        let n = plan.n();
        LipIter {
            plan,
            vals: vec![0; n],
            hi: vec![0; n],
            flaws: vec![0; n],
            started: false,
            done: false,
            budget,
        }
    }

    pub fn nodes_explored(&self) -> u64 {
        self.budget.used()
    }
}

impl Iterator for LipIter {
    type Item = Result<LipschitzFn>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.plan.n();
        let (mut p, mut fresh) = if self.started { (n - 1, false) } else { (0, true) };
        self.started = true;
        loop {
            if fresh {
                if let Err(e) = self.budget.tick() {
                    self.done = true;
                    return Some(Err(e));
                }
                let (lo, hi) = self.plan.interval(p, &self.vals);
                self.vals[p] = lo.saturating_sub(1);
                self.hi[p] = hi;
            }
            let base = if p == 0 { 0 } else { self.flaws[p - 1] };
            let mut found = false;
            while self.vals[p] < self.hi[p] {
                self.vals[p] += 1;
                let f = base + self.plan.is_flaw(self.vals[p]) as usize;
                if f <= self.plan.flaw_cap {
                    self.flaws[p] = f;
                    found = true;
                    break;
                }
            }
            if found {
                if p + 1 == n {
                    return Some(Ok(self.plan.to_fn(&self.vals)));
                }
                p += 1;
                fresh = true;
            } else {
                if p == 0 {
                    self.done = true;
                    return None;
                }
                p -= 1;
                fresh = false;
            }
        }
    }
}

/// Same DFS as [`LipIter`] without materializing functions: subtrees are
/// memoized on (position, flaw count, frontier values).
pub struct Counter {
    plan: Plan,
    memo: HashMap<(usize, usize, Vec<i64>), BigUint>,
    budget: NodeBudget,
}

impl Counter {
    pub fn new(g: &Graph, spec: &EnsembleSpec, budget: NodeBudget) -> Result<Self> {
        Ok(Counter { plan: Plan::new(g, spec)?, memo: HashMap::new(), budget })
    }

    /// Restricts the ensemble to functions with `lo <= f(v) <= hi`.
    pub fn restrict(mut self, g: &Graph, v: usize, lo: i64, hi: i64) -> Result<Self> {
        self.plan.restrict(g, v, lo, hi)?;
        self.memo.clear();
        Ok(self)
    }

    pub fn count(&mut self) -> Result<BigUint> {
        let mut vals = vec![0; self.plan.n()];
        self.completions(0, 0, &mut vals)
    }

    pub fn nodes_explored(&self) -> u64 {
        self.budget.used()
    }

    fn completions(&mut self, p: usize, flaws: usize, vals: &mut [i64]) -> Result<BigUint> {
        if p == self.plan.n() {
            return Ok(BigUint::one());
        }
        let key = (p, flaws, self.plan.frontier[p].iter().map(|&q| vals[q]).collect::<Vec<_>>());
        if let Some(c) = self.memo.get(&key) {
            return Ok(c.clone());
        }
        self.budget.tick()?;
        let (lo, hi) = self.plan.interval(p, vals);
        let mut total = BigUint::zero();
        for x in lo..=hi {
            let f = flaws + self.plan.is_flaw(x) as usize;
            if f > self.plan.flaw_cap {
                continue;
            }
            vals[p] = x;
            total += self.completions(p + 1, f, vals)?;
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }
}

fn serialize_biguint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "serialize_biguint")]
    pub count: BigUint,
    pub nodes_explored: u64,
    pub spec: EnsembleSpec,
}

pub fn count_ensemble(g: &Graph, spec: &EnsembleSpec, budget: NodeBudget) -> Result<CountResult> {
    let mut c = Counter::new(g, spec, budget)?;
    let count = c.count()?;
    Ok(CountResult { count, nodes_explored: c.nodes_explored(), spec: spec.clone() })
}

pub fn count_onepoint(g: &Graph, v0: usize, m: u32, budget: NodeBudget) -> Result<CountResult> {
    count_ensemble(g, &EnsembleSpec::one_point(v0, m), budget)
}

pub fn count_groundstate(
    g: &Graph,
    k: i64,
    m: u32,
    lambda: f64,
    budget: NodeBudget,
) -> Result<CountResult> {
    count_ensemble(g, &EnsembleSpec::ground_state(g, m, k, lambda)?, budget)
}

pub fn enumerate(g: &Graph, spec: &EnsembleSpec, budget: NodeBudget) -> Result<LipIter> {
    Ok(LipIter::new(Plan::new(g, spec)?, budget))
}

pub fn enumerate_onepoint(g: &Graph, v0: usize, m: u32, budget: NodeBudget) -> Result<LipIter> {
    enumerate(g, &EnsembleSpec::one_point(v0, m), budget)
}

pub fn enumerate_groundstate(
    g: &Graph,
    k: i64,
    m: u32,
    lambda: f64,
    budget: NodeBudget,
) -> Result<LipIter> {
    enumerate(g, &EnsembleSpec::ground_state(g, m, k, lambda)?, budget)
}

/// Exactly uniform draws: each position takes a value with probability
/// proportional to its number of completions.
pub struct ExactSampler {
    counter: Counter,
    total: BigUint,
    rng: ChaCha8Rng,
}

impl ExactSampler {
    pub fn new(g: &Graph, spec: &EnsembleSpec, seed: u64, budget: NodeBudget) -> Result<Self> {
        let mut counter = Counter::new(g, spec, budget)?;
        let total = counter.count()?;
        if total.is_zero() {
            return Err(Error::EmptyEnsemble);
        }
        Ok(ExactSampler { counter, total, rng: stream_rng(seed, 0) })
    }

    pub fn ensemble_size(&self) -> &BigUint {
        &self.total
    }

    pub fn draw(&mut self) -> Result<LipschitzFn> {
        let n = self.counter.plan.n();
        let mut vals = vec![0; n];
        let mut flaws = 0;
        let mut r = uniform_below(&mut self.rng, &self.total);
        for p in 0..n {
            let (lo, hi) = self.counter.plan.interval(p, &vals);
            let mut chosen = None;
            for x in lo..=hi {
                let f = flaws + self.counter.plan.is_flaw(x) as usize;
                if f > self.counter.plan.flaw_cap {
                    continue;
                }
                vals[p] = x;
                let c = self.counter.completions(p + 1, f, &mut vals)?;
                if r < c {
                    chosen = Some((x, f));
                    break;
                }
                r -= c;
            }
            let (x, f) = chosen.ok_or_else(|| Error::Invariant("sampler ran out of mass".into()))?;
            vals[p] = x;
            flaws = f;
        }
        Ok(self.counter.plan.to_fn(&vals))
    }
}

/// One exactly uniform member of the ensemble.
pub fn sample_exact(
    g: &Graph,
    spec: &EnsembleSpec,
    seed: u64,
    budget: NodeBudget,
) -> Result<LipschitzFn> {
    ExactSampler::new(g, spec, seed, budget)?.draw()
}
