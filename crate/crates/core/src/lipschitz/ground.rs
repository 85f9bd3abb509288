use serde::Serialize;

use super::LipschitzFn;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Absolute slack on the flaw threshold so that a λ computed in floating
/// point just below a rational value still yields the intended integer cap.
const CAP_SLACK: f64 = 1e-9;

/// `⌊(2λ/d) n⌋` together with the real threshold it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlawCap {
    pub threshold: f64,
    cap: usize,
}

impl FlawCap {
    pub fn new(g: &Graph, lambda: f64) -> Result<Self> {
        let d = g.require_regular()?;
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Precondition(format!("λ = {lambda} must be a finite non-negative real")));
        }
        Ok(FlawCap::from_threshold(2.0 * lambda / d as f64 * g.n() as f64))
    }

    pub fn from_threshold(threshold: f64) -> Self {
        let cap = (threshold + CAP_SLACK * threshold.max(1.0)).floor().max(0.0);
        FlawCap { threshold, cap: cap.min(usize::MAX as f64) as usize }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

/// Vertices with `f(v) ∉ [k, k+M]`.
pub fn flaw_count(values: &[i64], k: i64, m: u32) -> usize {
    values.iter().filter(|&&x| x < k || x > k + m as i64).count()
}

/// Every `k` with `f ∈ Lip*_k`, in increasing order.
///
/// Values of `k` below `min f − M` or above `max f` make every vertex a flaw,
/// so only that window is searched.
pub fn ground_states(g: &Graph, f: &LipschitzFn, lambda: f64) -> Result<Vec<i64>> {
    if f.values().len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: f.values().len() });
    }
    let cap = FlawCap::new(g, lambda)?.cap();
    let m = f.m() as i64;
    Ok((f.min_value() - m..=f.max_value())
        .filter(|&k| flaw_count(f.values(), k, f.m()) <= cap)
        .collect())
}

/// Smallest ground state. When `λ < d/4` all ground states lie in `[κ, κ+M]`;
/// a wider spread means the λ supplied is not a valid certificate.
pub fn kappa(g: &Graph, f: &LipschitzFn, lambda: f64) -> Result<i64> {
    let ks = ground_states(g, f, lambda)?;
    let (&lo, &hi) = match (ks.first(), ks.last()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::NoGroundState(format!("no k within [{}, {}]", f.min_value() - f.m() as i64, f.max_value()))),
    };
    let d = g.require_regular()? as f64;
    if lambda < d / 4.0 && hi - lo > f.m() as i64 {
        return Err(Error::Invariant(format!(
            "ground states span [{lo}, {hi}], wider than M = {} although λ < d/4",
            f.m()
        )));
    }
    Ok(lo)
}
