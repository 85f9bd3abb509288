//! Hypothesis gates and closed-form bounds for the tail and range results.
//! All logarithms are base 2.

use serde::{Deserialize, Serialize};

/// Unspecified universal constants, exposed as configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default = "one")]
    pub c: f64,
    #[serde(rename = "C", default = "one")]
    pub big_c: f64,
    #[serde(rename = "c_prime", default = "one")]
    pub c_prime: f64,
    #[serde(rename = "C_prime", default = "one")]
    pub big_c_prime: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: 1.0, big_c: 1.0, c_prime: 1.0, big_c_prime: 1.0 }
    }
}

/// Outcome of checking `λ ≤ d/5 ≤ c·n` and `M ≤ min{c·d^{3/2}/(λ log d), (log n)^C}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gate {
    pub lambda_le_d_over_5: bool,
    pub d_over_5_le_cn: bool,
    /// `min{c·d^{3/2}/(λ log d), (log n)^C}`; infinite when λ = 0 or d = 1.
    pub m_limit: f64,
    pub m_ok: bool,
    pub holds: bool,
    pub constants: Constants,
}

pub fn gate(n: usize, d: usize, lambda: f64, m: u32, k: &Constants) -> Gate {
    let (nf, df) = (n as f64, d as f64);
    let lambda_le_d_over_5 = lambda <= df / 5.0 + 1e-12;
    let d_over_5_le_cn = df / 5.0 <= k.c * nf + 1e-12;
    let denom = lambda * df.log2();
    let first = if denom > 0.0 { k.c * df.powf(1.5) / denom } else { f64::INFINITY };
    let second = nf.log2().max(0.0).powf(k.big_c);
    let m_limit = first.min(second);
    let m_ok = (m as f64) <= m_limit + 1e-12;
    Gate {
        lambda_le_d_over_5,
        d_over_5_le_cn,
        m_limit,
        m_ok,
        holds: lambda_le_d_over_5 && d_over_5_le_cn && m_ok,
        constants: *k,
    }
}

/// `2^{−|B(v,t−1)|/(5M)}`.
pub fn tail_bound(ball_size: usize, m: u32) -> f64 {
    (-(ball_size as f64) / (5.0 * m as f64)).exp2()
}

/// `C'·M·log log n / log(d/λ) + 2(M+1)`; `None` when a logarithm is undefined
/// or the denominator vanishes.
pub fn range_threshold(n: usize, d: usize, lambda: f64, m: u32, k: &Constants) -> Option<f64> {
    let loglog = (n as f64).log2().log2();
    let denom = (d as f64 / lambda).log2();
    if !loglog.is_finite() || !denom.is_finite() || denom <= 0.0 {
        return None;
    }
    Some(k.big_c_prime * m as f64 * loglog / denom + 2.0 * (m as f64 + 1.0))
}

/// `n^{−c'}`.
pub fn range_probability_bound(n: usize, k: &Constants) -> f64 {
    (n as f64).powf(-k.c_prime)
}

/// `(M ⌈log M / log(d/2λ)⌉)²`; `None` when it is zero or undefined.
pub fn variance_scale(d: usize, lambda: f64, m: u32) -> Option<f64> {
    let denom = (d as f64 / (2.0 * lambda)).log2();
    if !denom.is_finite() || denom <= 0.0 {
        return None;
    }
    let s = (m as f64 * ((m as f64).log2() / denom).ceil()).powi(2);
    (s > 0.0 && s.is_finite()).then_some(s)
}
