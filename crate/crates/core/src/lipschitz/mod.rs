//! Integer-valued M-Lipschitz functions: validation, exact enumeration and
//! counting, exactly uniform sampling, Glauber dynamics, ranges and ground states.

mod engine;
mod glauber;
mod ground;

use serde::{Deserialize, Serialize};

pub use engine::{
    count_ensemble, count_groundstate, count_onepoint, enumerate, enumerate_groundstate,
    enumerate_onepoint, sample_exact, CountResult, Counter, ExactSampler, LipIter,
};
pub use glauber::{glauber_chain, heat_bath_interval, transition_probability, GlauberChain};
pub use ground::{flaw_count, ground_states, kappa, FlawCap};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Integer vertex labeling with Lipschitz constant `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LipschitzFn {
    #[serde(rename = "M")]
    m: u32,
    values: Vec<i64>,
}

impl LipschitzFn {
    /// Validates the edge constraint before wrapping `values`.
    pub fn new(g: &Graph, values: Vec<i64>, m: u32) -> Result<Self> {
        if values.len() != g.n() {
            return Err(Error::LengthMismatch { expected: g.n(), got: values.len() });
        }
        if let Some((u, v)) = first_violation(g, &values, m) {
            return Err(Error::NotLipschitz { m, u, v });
        }
        Ok(LipschitzFn { m, values })
    }

    pub(crate) fn from_parts(values: Vec<i64>, m: u32) -> Self {
        LipschitzFn { m, values }
    }

    pub fn constant(n: usize, c: i64, m: u32) -> Self {
        LipschitzFn { m, values: vec![c; n] }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, v: usize) -> i64 {
        self.values[v]
    }

    pub fn min_value(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max_value(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// `R(f) = max f − min f + 1`.
    pub fn range(&self) -> i64 {
        self.max_value() - self.min_value() + 1
    }

    /// `f + c`.
    pub fn shifted(&self, c: i64) -> Self {
        LipschitzFn { m: self.m, values: self.values.iter().map(|x| x + c).collect() }
    }

    /// `−f + k + M`, which exchanges the ground-state windows based at `0` and `k`.
    pub fn reflected(&self, k: i64) -> Self {
        let m = self.m as i64;
        LipschitzFn { m: self.m, values: self.values.iter().map(|x| -x + k + m).collect() }
    }

    /// Re-checks validity against `g` (e.g. after deserialization).
    pub fn check(&self, g: &Graph) -> Result<()> {
        LipschitzFn::new(g, self.values.clone(), self.m).map(|_| ())
    }
}

fn first_violation(g: &Graph, values: &[i64], m: u32) -> Option<(usize, usize)> {
    g.edges().find(|&(u, v)| (values[u] - values[v]).unsigned_abs() > m as u64)
}

/// `|f(u) − f(v)| ≤ M` on every edge.
pub fn validate(g: &Graph, values: &[i64], m: u32) -> Result<bool> {
    if values.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: values.len() });
    }
    Ok(first_violation(g, values, m).is_none())
}

pub fn range(f: &LipschitzFn) -> i64 {
    f.range()
}

/// Which finite ensemble of Lipschitz functions is meant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// Functions with `f(v0) = 0`.
    OnePoint { v0: usize },
    /// Functions with at most `flaw_cap` vertices outside `{k, …, k+M}`.
    GroundState { k: i64, flaw_cap: usize, lambda: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub ensemble: Ensemble,
    #[serde(rename = "M")]
    pub m: u32,
}

impl EnsembleSpec {
    pub fn one_point(v0: usize, m: u32) -> Self {
        EnsembleSpec { ensemble: Ensemble::OnePoint { v0 }, m }
    }

    /// Ground-state ensemble with the flaw cap `⌊(2λ/d) n⌋` of a regular graph.
    pub fn ground_state(g: &Graph, m: u32, k: i64, lambda: f64) -> Result<Self> {
        let cap = FlawCap::new(g, lambda)?;
        Ok(EnsembleSpec { ensemble: Ensemble::GroundState { k, flaw_cap: cap.cap(), lambda }, m })
    }

    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        if let Ensemble::OnePoint { v0 } = self.ensemble {
            g.check_vertex(v0)?;
        }
        Ok(())
    }

    /// Whether `f` belongs to this ensemble (assuming it is Lipschitz).
    pub fn contains(&self, f: &LipschitzFn) -> bool {
        match self.ensemble {
            Ensemble::OnePoint { v0 } => f.value(v0) == 0,
            Ensemble::GroundState { k, flaw_cap, .. } => {
                flaw_count(f.values(), k, self.m) <= flaw_cap
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GenSpec};

    #[test]
    fn validate_examples() {
        let k2 = generate(&GenSpec::Complete { n: 2 }).unwrap();
        assert!(validate(&k2, &[0, 0], 3).unwrap());
        assert!(!validate(&k2, &[0, 2], 1).unwrap());
        let c4 = generate(&GenSpec::Cycle { n: 4 }).unwrap();
        assert!(validate(&c4, &[0, 1, 2, 1], 1).unwrap());
        assert!(matches!(validate(&c4, &[0, 1], 1), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn range_examples() {
        assert_eq!(LipschitzFn::constant(5, 7, 1).range(), 1);
        assert_eq!(LipschitzFn::from_parts(vec![0, 1], 1).range(), 2);
        assert_eq!(LipschitzFn::from_parts(vec![0, 1, 2, 1], 1).range(), 3);
    }

    #[test]
    fn json_format() {
        let f = LipschitzFn::from_parts(vec![0, 1, -1], 2);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"M":2,"values":[0,1,-1]}"#);
        let back: LipschitzFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn shift_and_reflect() {
        let f = LipschitzFn::from_parts(vec![0, 1, 3], 2);
        assert_eq!(f.shifted(4).values(), &[4, 5, 7]);
        assert_eq!(f.reflected(1).values(), &[3, 2, 0]);
        assert_eq!(f.reflected(1).reflected(1), f);
    }
}
