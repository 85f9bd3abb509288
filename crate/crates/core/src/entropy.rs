//! Shannon entropy (bits) of finite joint distributions, the standard
//! entropy inequalities, and Shearer's inequality with a partial order.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::seed::stream_rng;

const NORM_TOL: f64 = 1e-12;
const TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub outcome: Vec<i64>,
    pub p: f64,
}

/// Distribution of a tuple of discrete coordinates with finite supports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPmf")]
pub struct JointPmf {
    supports: Vec<Vec<i64>>,
    probs: Vec<Outcome>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPmf {
    supports: Vec<Vec<i64>>,
    probs: Vec<Outcome>,
}

impl TryFrom<RawPmf> for JointPmf {
    type Error = Error;

    fn try_from(raw: RawPmf) -> Result<Self> {
        JointPmf::new(raw.supports, raw.probs)
    }
}

impl JointPmf {
    pub fn new(supports: Vec<Vec<i64>>, probs: Vec<Outcome>) -> Result<Self> {
        let n = supports.len();
        if n == 0 {
            return Err(Error::Precondition("pmf needs at least one coordinate".into()));
        }
        let mut seen = BTreeMap::new();
        let mut total = 0.0;
        for o in &probs {
            if o.outcome.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: o.outcome.len() });
            }
            if !(o.p >= 0.0) || !o.p.is_finite() {
                return Err(Error::Precondition(format!("probability {} is not a finite nonnegative real", o.p)));
            }
            for (i, x) in o.outcome.iter().enumerate() {
                if !supports[i].contains(x) {
                    return Err(Error::Precondition(format!("value {x} outside support of coordinate {i}")));
                }
            }
            if seen.insert(o.outcome.clone(), ()).is_some() {
                return Err(Error::Precondition(format!("outcome {:?} listed twice", o.outcome)));
            }
            total += o.p;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::Precondition(format!("probabilities sum to {total}, not 1")));
        }
        Ok(JointPmf { supports, probs })
    }

    /// Uniform distribution over the listed outcomes, supports inferred.
    pub fn uniform(outcomes: Vec<Vec<i64>>) -> Result<Self> {
        let n = outcomes.first().map_or(0, Vec::len);
        let supports = (0..n)
            .map(|i| {
                let mut s: Vec<i64> = outcomes.iter().map(|o| o[i]).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let p = 1.0 / outcomes.len() as f64;
        JointPmf::new(supports, outcomes.into_iter().map(|outcome| Outcome { outcome, p }).collect())
    }

    pub fn coords(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[Vec<i64>] {
        &self.supports
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.probs
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        match coords.iter().find(|&&c| c >= self.coords()) {
            Some(&c) => Err(Error::Precondition(format!("coordinate {c} out of range"))),
            None => Ok(()),
        }
    }

    /// Marginal law of `coords`.
    pub fn marginal(&self, coords: &[usize]) -> BTreeMap<Vec<i64>, f64> {
        let mut m = BTreeMap::new();
        for o in &self.probs {
            let key: Vec<i64> = coords.iter().map(|&c| o.outcome[c]).collect();
            *m.entry(key).or_insert(0.0) += o.p;
        }
        m
    }

    /// Appends a coordinate computed from the outcome tuple.
    pub fn with_derived<F: Fn(&[i64]) -> i64>(&self, map: F) -> JointPmf {
        let probs: Vec<Outcome> = self
            .probs
            .iter()
            .map(|o| {
                let mut outcome = o.outcome.clone();
                outcome.push(map(&o.outcome));
                Outcome { outcome, p: o.p }
            })
            .collect();
        let mut support: Vec<i64> = probs.iter().map(|o| *o.outcome.last().unwrap()).collect();
        support.sort_unstable();
        support.dedup();
        let mut supports = self.supports.clone();
        supports.push(support);
        JointPmf { supports, probs }
    }
}

fn entropy_of<'a>(ps: impl Iterator<Item = &'a f64>) -> f64 {
    ps.filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// `H(X_coords)` in bits.
pub fn entropy(p: &JointPmf, coords: &[usize]) -> Result<f64> {
    if coords.is_empty() {
        return Err(Error::Precondition("entropy of an empty coordinate set".into()));
    }
    p.check_coords(coords)?;
    Ok(entropy_of(p.marginal(coords).values()))
}

/// `H(X_target | X_given) = Σ_y P(Y=y) H(X_target | Y=y)`.
pub fn conditional_entropy(p: &JointPmf, target: &[usize], given: &[usize]) -> Result<f64> {
    if target.is_empty() {
        return Err(Error::Precondition("conditional entropy of an empty target".into()));
    }
    p.check_coords(target)?;
    p.check_coords(given)?;
    let mut groups: HashMap<Vec<i64>, HashMap<Vec<i64>, f64>> = HashMap::new();
    for o in &p.probs {
        let y: Vec<i64> = given.iter().map(|&c| o.outcome[c]).collect();
        let x: Vec<i64> = target.iter().map(|&c| o.outcome[c]).collect();
        *groups.entry(y).or_default().entry(x).or_insert(0.0) += o.p;
    }
    let mut h = 0.0;
    for cond in groups.values() {
        let py: f64 = cond.values().sum();
        if py > 0.0 {
            h += py * entropy_of(cond.values().map(|q| q / py).collect::<Vec<_>>().iter());
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub property: u8,
    pub statement: &'static str,
    pub instances: u64,
    pub failures: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub coords: usize,
    pub properties: Vec<PropertyResult>,
}

impl EntropyReport {
    pub fn all_ok(&self) -> bool {
        self.properties.iter().all(|p| p.failures.is_empty())
    }

    pub fn failures(&self) -> usize {
        self.properties.iter().map(|p| p.failures.len()).sum()
    }
}

/// Caches `H(X_S)` by coordinate bitmask.
struct Cache<'a> {
    p: &'a JointPmf,
    memo: HashMap<u64, f64>,
}

impl Cache<'_> {
    fn h(&mut self, mask: u64) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        if let Some(&v) = self.memo.get(&mask) {
            return v;
        }
        let v = entropy_of(self.p.marginal(&ids(mask)).values());
        self.memo.insert(mask, v);
        v
    }

    fn cond(&mut self, a: u64, b: u64) -> f64 {
        self.h(a | b) - self.h(b)
    }
}

fn ids(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub const MAX_PROPERTY_COORDS: usize = 4;

/// Checks the seven standard entropy properties over every choice of
/// nonempty coordinate subsets `X, Y, Z`. Where `Z` must be a function of
/// `Y` (or `X`), it ranges over projections of `Y`, a constant, and the
/// parity of `Y`'s coordinates.
pub fn check_entropy_properties(p: &JointPmf) -> Result<EntropyReport> {
    let n = p.coords();
    if n > MAX_PROPERTY_COORDS {
        return Err(Error::CapExceeded { n, cap: MAX_PROPERTY_COORDS });
    }
    let subsets: Vec<u64> = (1u64..(1 << n)).collect();
    // derived coordinates: one constant, then the parity of each subset
    let mut ext = p.with_derived(|_| 0);
    for &s in &subsets {
        ext = ext.with_derived(|o| ids(s).iter().map(|&i| o[i]).sum::<i64>().rem_euclid(2));
    }
    let constant = 1u64 << n;
    let parity = |s: u64| 1u64 << (n + subsets.iter().position(|&t| t == s).unwrap() + 1);
    let mut c = Cache { p: &ext, memo: HashMap::new() };
    let mut props = Vec::new();
    let w = |x: u64| ids(x);

    let mut r = PropertyResult { property: 1, statement: "H(X) <= log|Image(X)|, equality iff uniform", instances: 0, failures: vec![] };
    for &x in &subsets {
        r.instances += 1;
        let marg = p.marginal(&ids(x));
        let support: Vec<f64> = marg.values().copied().filter(|&q| q > 0.0).collect();
        let log_image = (support.len() as f64).log2();
        let hx = c.h(x);
        let uniform = support.iter().all(|&q| (q - support[0]).abs() <= 1e-9);
        let equal = (hx - log_image).abs() <= 1e-9;
        if hx > log_image + TOL || equal != uniform {
            r.failures.push(json!({"X": w(x), "H": hx, "log_image": log_image, "uniform": uniform}));
        }
    }
    props.push(r);

    let mut r = PropertyResult { property: 2, statement: "H(X|Y) <= H(X)", instances: 0, failures: vec![] };
    for &x in &subsets {
        for &y in &subsets {
            r.instances += 1;
            if c.cond(x, y) > c.h(x) + TOL {
                r.failures.push(json!({"X": w(x), "Y": w(y)}));
            }
        }
    }
    props.push(r);

    let mut r = PropertyResult { property: 3, statement: "H(X,Y) = H(X) + H(Y|X)", instances: 0, failures: vec![] };
    for &x in &subsets {
        for &y in &subsets {
            r.instances += 1;
            // conditional entropy from its definition, not from differences
            let direct = conditional_entropy(p, &ids(y), &ids(x))?;
            if (c.h(x | y) - c.h(x) - direct).abs() > TOL {
                r.failures.push(json!({"X": w(x), "Y": w(y), "H(Y|X)": direct}));
            }
        }
    }
    props.push(r);

    let mut r = PropertyResult { property: 4, statement: "H(X1..Xk|Y) <= sum H(Xi|Y)", instances: 0, failures: vec![] };
    for &x in &subsets {
        for y in std::iter::once(0).chain(subsets.iter().copied()) {
            r.instances += 1;
            let parts: f64 = ids(x).iter().map(|&i| c.cond(1 << i, y)).sum();
            if c.cond(x, y) > parts + TOL {
                r.failures.push(json!({"X": w(x), "Y": w(y)}));
            }
        }
    }
    props.push(r);

    let mut r = PropertyResult { property: 5, statement: "Z determined by Y => H(X|Y) <= H(X|Z)", instances: 0, failures: vec![] };
    for &x in &subsets {
        for &y in &subsets {
            let maps = subsets.iter().copied().filter(|&z| z & !y == 0).chain([constant, parity(y)]);
            for z in maps {
                r.instances += 1;
                if c.cond(x, y) > c.cond(x, z) + TOL {
                    r.failures.push(json!({"X": w(x), "Y": w(y), "Z": w(z)}));
                }
            }
        }
    }
    props.push(r);

    let mut r = PropertyResult { property: 6, statement: "Z determined by X => H(X,Z|Y) = H(X|Y)", instances: 0, failures: vec![] };
    for &x in &subsets {
        for y in std::iter::once(0).chain(subsets.iter().copied()) {
            let maps = subsets.iter().copied().filter(|&z| z & !x == 0).chain([constant, parity(x)]);
            for z in maps {
                r.instances += 1;
                if (c.cond(x | z, y) - c.cond(x, y)).abs() > TOL {
                    r.failures.push(json!({"X": w(x), "Y": w(y), "Z": w(z)}));
                }
            }
        }
    }
    props.push(r);

    let mut r = PropertyResult { property: 7, statement: "H(X|Z) <= H(X|Y) + H(Y|Z)", instances: 0, failures: vec![] };
    for &x in &subsets {
        for &y in &subsets {
            for &z in &subsets {
                r.instances += 1;
                if c.cond(x, z) > c.cond(x, y) + c.cond(y, z) + TOL {
                    r.failures.push(json!({"X": w(x), "Y": w(y), "Z": w(z)}));
                }
            }
        }
    }
    props.push(r);

    Ok(EntropyReport { coords: n, properties: props })
}

/// Random pmf on the product of `supports` with i.i.d. exponential weights;
/// roughly a fifth of the outcomes get probability zero.
pub fn random_pmf<R: Rng>(rng: &mut R, support_sizes: &[usize]) -> JointPmf {
    let supports: Vec<Vec<i64>> = support_sizes.iter().map(|&s| (0..s as i64).collect()).collect();
    let mut outcomes = vec![vec![]];
    for s in &supports {
        outcomes = outcomes
            .into_iter()
            .flat_map(|o: Vec<i64>| {
                s.iter().map(move |&x| {
                    let mut o = o.clone();
                    o.push(x);
                    o
                })
            })
            .collect();
    }
    let mut weights: Vec<f64> = outcomes
        .iter()
        .map(|_| if rng.random_bool(0.2) { 0.0 } else { -(1.0 - rng.random::<f64>()).ln() })
        .collect();
    if weights.iter().all(|&w| w == 0.0) {
        weights[0] = 1.0;
    }
    let total: f64 = weights.iter().sum();
    let mut probs: Vec<Outcome> =
        outcomes.into_iter().zip(weights).map(|(outcome, w)| Outcome { outcome, p: w / total }).collect();
    // push the rounding residue onto the largest entry
    let residue = 1.0 - probs.iter().map(|o| o.p).sum::<f64>();
    let big = probs.iter_mut().max_by(|a, b| a.p.total_cmp(&b.p)).unwrap();
    big.p += residue;
    JointPmf::new(supports, probs).expect("normalized by construction")
}

/// Runs [`check_entropy_properties`] on `trials` seeded random pmfs.
pub fn fuzz_entropy_properties(support_sizes: &[usize], trials: usize, seed: u64) -> Result<(usize, usize)> {
    let mut rng = stream_rng(seed, 0);
    let mut failures = 0;
    for _ in 0..trials {
        failures += check_entropy_properties(&random_pmf(&mut rng, support_sizes))?.failures();
    }
    Ok((trials, failures))
}

/// Weights `α_A` on nonempty coordinate sets with `Σ_{A∋i} α_A = 1`, and a
/// strict partial order given as pairs `(i, j)` meaning `i ≺ j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverWeights {
    pub sets: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub order: Vec<(usize, usize)>,
}

impl CoverWeights {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.sets.len() != self.weights.len() {
            return Err(Error::LengthMismatch { expected: self.sets.len(), got: self.weights.len() });
        }
        let mut cover = vec![0.0; n];
        for (a, &wt) in self.sets.iter().zip(&self.weights) {
            if a.is_empty() {
                return Err(Error::Precondition("the empty set cannot carry weight".into()));
            }
            if !(wt >= 0.0) {
                return Err(Error::Precondition(format!("weight {wt} is negative")));
            }
            for &i in a {
                if i >= n {
                    return Err(Error::Precondition(format!("coordinate {i} out of range")));
                }
                cover[i] += wt;
            }
        }
        if let Some(i) = (0..n).find(|&i| (cover[i] - 1.0).abs() > NORM_TOL * 1e3) {
            return Err(Error::Precondition(format!("weights covering coordinate {i} sum to {}", cover[i])));
        }
        let less = |i, j| self.order.contains(&(i, j));
        for &(i, j) in &self.order {
            if i >= n || j >= n {
                return Err(Error::Precondition(format!("order pair ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::Precondition(format!("order is not irreflexive at {i}")));
            }
            for &(j2, k) in &self.order {
                if j2 == j && !less(i, k) {
                    return Err(Error::Precondition(format!("order is not transitive: {i}<{j}<{k}")));
                }
            }
        }
        Ok(())
    }

    /// `{i : i ≺ a for all a ∈ A}`.
    pub fn predecessors(&self, a: &[usize], n: usize) -> Vec<usize> {
        (0..n).filter(|&i| a.iter().all(|&x| self.order.contains(&(i, x)))).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShearerReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `H(X) ≤ Σ_A α_A H(X_A | X_i : i ≺ A)`.
pub fn shearer_check(p: &JointPmf, cw: &CoverWeights) -> Result<ShearerReport> {
    let n = p.coords();
    cw.validate(n)?;
    let all: Vec<usize> = (0..n).collect();
    let lhs = entropy(p, &all)?;
    let mut rhs = 0.0;
    for (a, &wt) in cw.sets.iter().zip(&cw.weights) {
        rhs += wt * conditional_entropy(p, a, &cw.predecessors(a, n))?;
    }
    Ok(ShearerReport { lhs, rhs, pass: lhs <= rhs + TOL })
}
