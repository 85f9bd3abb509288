use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{flaw_count, Ensemble, EnsembleSpec, LipschitzFn};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::stream_rng;

/// `[max_{w∈N(v)} f(w) − M, min_{w∈N(v)} f(w) + M]`.
pub fn heat_bath_interval(g: &Graph, values: &[i64], v: usize, m: u32) -> (i64, i64) {
    let m = m as i64;
    let nb = g.neighbors(v).iter().map(|&w| values[w]);
    let hi = nb.clone().min().map_or(i64::MAX, |x| x + m);
    let lo = nb.max().map_or(i64::MIN, |x| x - m);
    (lo, hi)
}

/// Single-site heat-bath chain targeting the uniform measure on an ensemble.
///
/// In one-point mode every vertex except `v0` is updated. In ground-state mode
/// all vertices are updated and a move is rejected when it would exceed the
/// flaw cap or leave the value box `[k − nM, k + M + nM]`.
pub struct GlauberChain<'g> {
    g: &'g Graph,
    spec: EnsembleSpec,
    values: Vec<i64>,
    movable: Vec<usize>,
    rng: ChaCha8Rng,
    steps: u64,
    accepted: u64,
}

impl<'g> GlauberChain<'g> {
    pub fn new(g: &'g Graph, spec: &EnsembleSpec, seed: u64) -> Result<Self> {
        Self::with_stream(g, spec, seed, 0)
    }

    /// Chain driven by stream `stream` of `seed`, for independent parallel chains.
    pub fn with_stream(g: &'g Graph, spec: &EnsembleSpec, seed: u64, stream: u64) -> Result<Self> {
        spec.validate_for(g)?;
        if spec.m == 0 {
            return Err(Error::Precondition("M must be positive".into()));
        }
        let (values, movable) = match spec.ensemble {
            Ensemble::OnePoint { v0 } => (vec![0; g.n()], (0..g.n()).filter(|&v| v != v0).collect()),
            Ensemble::GroundState { k, .. } => (vec![k; g.n()], (0..g.n()).collect()),
        };
        Ok(GlauberChain {
            g,
            spec: spec.clone(),
            values,
            movable,
            rng: stream_rng(seed, stream),
            steps: 0,
            accepted: 0,
        })
    }

    pub fn state(&self) -> LipschitzFn {
        LipschitzFn::from_parts(self.values.clone(), self.spec.m)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Fraction of steps whose proposal was not rejected.
    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            1.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }

    pub fn step(&mut self) {
        self.steps += 1;
        if self.movable.is_empty() {
            self.accepted += 1;
            return;
        }
        let v = self.movable[self.rng.random_range(0..self.movable.len())];
        let (lo, hi) = heat_bath_interval(self.g, &self.values, v, self.spec.m);
        let x = self.rng.random_range(lo..=hi);
        if admissible(&self.spec, self.g.n(), &self.values, v, x) {
            self.values[v] = x;
            self.accepted += 1;
        }
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }

    /// Runs `steps` steps, calling `hook(step, state)` after each.
    pub fn run_with<F: FnMut(u64, &[i64])>(&mut self, steps: u64, mut hook: F) {
        for _ in 0..steps {
            self.step();
            hook(self.steps, &self.values);
        }
    }
}

fn admissible(spec: &EnsembleSpec, n: usize, values: &[i64], v: usize, x: i64) -> bool {
    match spec.ensemble {
        Ensemble::OnePoint { .. } => true,
        Ensemble::GroundState { k, flaw_cap, .. } => {
            let m = spec.m as i64;
            let slack = n as i64 * m;
            if x < k - slack || x > k + m + slack {
                return false;
            }
            let is_flaw = |y: i64| y < k || y > k + m;
            let flaws = flaw_count(values, k, spec.m) - is_flaw(values[v]) as usize + is_flaw(x) as usize;
            flaws <= flaw_cap
        }
    }
}

/// Exact one-step transition probability `P(from → to)` of [`GlauberChain`].
pub fn transition_probability(
    g: &Graph,
    spec: &EnsembleSpec,
    from: &[i64],
    to: &[i64],
) -> Result<Ratio<i64>> {
    let chain = GlauberChain::new(g, spec, 0)?;
    if from.len() != g.n() || to.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: from.len().min(to.len()) });
    }
    let movable = &chain.movable;
    if movable.is_empty() {
        return Ok(Ratio::from_integer((from == to) as i64));
    }
    let pick = Ratio::new(1, movable.len() as i64);
    let move_prob = |v: usize, x: i64| -> Ratio<i64> {
        let (lo, hi) = heat_bath_interval(g, from, v, spec.m);
        if x < lo || x > hi || !admissible(spec, g.n(), from, v, x) {
            return Ratio::from_integer(0);
        }
        pick * Ratio::new(1, hi - lo + 1)
    };
    let diff: Vec<usize> = (0..g.n()).filter(|&v| from[v] != to[v]).collect();
    match diff.as_slice() {
        [] => {
            // staying put: choose a value equal to the current one, or be rejected
            let mut leave = Ratio::from_integer(0);
            for &v in movable {
                let (lo, hi) = heat_bath_interval(g, from, v, spec.m);
                for x in lo..=hi {
                    if x != from[v] {
                        leave += move_prob(v, x);
                    }
                }
            }
            Ok(Ratio::from_integer(1) - leave)
        }
        [v] if movable.contains(v) => Ok(move_prob(*v, to[*v])),
        _ => Ok(Ratio::from_integer(0)),
    }
}

/// State of a fresh chain after `steps` steps.
pub fn glauber_chain(g: &Graph, spec: &EnsembleSpec, seed: u64, steps: u64) -> Result<LipschitzFn> {
    let mut chain = GlauberChain::new(g, spec, seed)?;
    chain.run(steps);
    Ok(chain.state())
}
