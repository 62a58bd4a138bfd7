use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::formula::{Quant, QuantPrefix};
use crate::game::TrackTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdfError {
    #[error("valuation misses variable `{0}`")]
    Missing(String),
    #[error("value {value} of `{var}` outside the domain of size {domain}")]
    OutOfDomain { var: String, value: usize, domain: usize },
    #[error("table shape does not match the prefix")]
    Shape,
    #[error("not behavioral: {0}")]
    NotBehavioral(String),
}

/// A total map from variables to a domain `0..d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    values: BTreeMap<String, usize>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn with(mut self, var: impl Into<String>, value: usize) -> Valuation {
        self.values.insert(var.into(), value);
        self
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.values.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromIterator<(String, usize)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (String, usize)>>(iter: I) -> Self {
        Valuation {
            values: iter.into_iter().collect(),
        }
    }
}

/// A Skolem dependence function over the domain `0..domain`.
///
/// Stored as one table per existential variable, indexed by the values of
/// the universal variables preceding it (first one most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkolemDepFn {
    prefix: QuantPrefix,
    domain: usize,
    tables: Vec<Vec<usize>>,
}

fn dep_len(prefix: &QuantPrefix) -> Vec<usize> {
    let mut universals = 0;
    let mut out = vec![];
    for (_, q) in prefix.entries() {
        match q {
            Quant::Forall => universals += 1,
            Quant::Exists => out.push(universals),
        }
    }
    out
}

/// Mixed-radix index of `values` in base `d`, first digit most significant.
fn radix_index(d: usize, values: &[usize]) -> usize {
    values.iter().fold(0, |acc, &v| acc * d + v)
}

fn radix_digits(d: usize, len: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

impl SkolemDepFn {
    /// `tables[i]` belongs to the `i`-th existential variable and has
    /// `domain^|Dep|` entries.
    pub fn new(prefix: QuantPrefix, domain: usize, tables: Vec<Vec<usize>>) -> Result<SkolemDepFn, SdfError> {
        let deps = dep_len(&prefix);
        if domain == 0 || tables.len() != deps.len() {
            return Err(SdfError::Shape);
        }
        for (t, &k) in tables.iter().zip(&deps) {
            if Some(t.len()) != domain.checked_pow(k as u32) {
                return Err(SdfError::Shape);
            }
            if t.iter().any(|&v| v >= domain) {
                return Err(SdfError::Shape);
            }
        }
        Ok(SkolemDepFn { prefix, domain, tables })
    }

    pub fn prefix(&self) -> &QuantPrefix {
        &self.prefix
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    /// `θ(v)`: values of the universal variables in prefix order in, values of
    /// every variable in prefix order out.
    pub fn apply(&self, universal: &[usize]) -> Vec<usize> {
        assert_eq!(
            universal.len(),
            self.prefix.universal().len(),
            "one value per universal variable"
        );
        let mut out = Vec::with_capacity(self.prefix.len());
        let (mut u, mut e) = (0, 0);
        for (_, q) in self.prefix.entries() {
            match q {
                Quant::Forall => {
                    out.push(universal[u]);
                    u += 1;
                }
                Quant::Exists => {
                    out.push(self.tables[e][radix_index(self.domain, &universal[..u])]);
                    e += 1;
                }
            }
        }
        out
    }

    /// Every universal valuation in lexicographic order, with its image.
    pub fn graph(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.prefix.universal().len();
        let total = self.domain.pow(n as u32);
        (0..total)
            .map(|i| {
                let v = radix_digits(self.domain, n, i);
                let w = self.apply(&v);
                (v, w)
            })
            .collect()
    }

    /// Checks the restriction and dependence properties on the full table.
    pub fn is_valid(&self) -> bool {
        let universal = self.prefix.universal();
        let graph = self.graph();
        let restricted = graph.iter().all(|(v, w)| {
            universal
                .iter()
                .zip(v)
                .all(|(x, &val)| w[self.prefix.position(x).unwrap()] == val)
        });
        let dependent = self.prefix.existential().iter().all(|x| {
            let pos = self.prefix.position(x).unwrap();
            let k = self.prefix.dep(x).len();
            graph.iter().all(|(v1, w1)| {
                graph
                    .iter()
                    .filter(|(v2, _)| v1[..k] == v2[..k])
                    .all(|(_, w2)| w1[pos] == w2[pos])
            })
        });
        restricted && dependent
    }
}

/// `θ(v)` on named valuations.
pub fn apply_sdf(theta: &SkolemDepFn, v: &Valuation) -> Result<Valuation, SdfError> {
    let universal = theta.prefix.universal();
    let mut values = Vec::with_capacity(universal.len());
    for x in &universal {
        let val = v.get(x).ok_or_else(|| SdfError::Missing(x.to_string()))?;
        if val >= theta.domain {
            return Err(SdfError::OutOfDomain {
                var: x.to_string(),
                value: val,
                domain: theta.domain,
            });
        }
        values.push(val);
    }
    let out = theta.apply(&values);
    Ok(theta.prefix.variables().map(String::from).zip(out).collect())
}

/// Closed-form `|SM_D(℘)|` for `|D| = d`.
pub fn count_sdf(prefix: &QuantPrefix, d: usize) -> BigUint {
    let d = BigUint::from(d);
    dep_len(prefix)
        .into_iter()
        .map(|k| d.pow(d.pow(k as u32).try_into().expect("exponent fits")))
        .product()
}

/// All SDFs for `prefix` over `0..d`, lexicographically: the first
/// existential variable is most significant, and within its table the
/// first universal valuation is.
pub fn enumerate_sdf(prefix: &QuantPrefix, d: usize) -> SdfIter {
    assert!(d >= 1, "domain must be non-empty");
    let sizes: Vec<usize> = dep_len(prefix)
        .into_iter()
        .map(|k| d.checked_pow(k as u32).expect("table size fits"))
        .collect();
    SdfIter {
        prefix: prefix.clone(),
        d,
        next: Some(sizes.iter().map(|&n| vec![0; n]).collect()),
    }
}

pub struct SdfIter {
    prefix: QuantPrefix,
    d: usize,
    next: Option<Vec<Vec<usize>>>,
}

impl Iterator for SdfIter {
    type Item = SkolemDepFn;

    fn next(&mut self) -> Option<SkolemDepFn> {
        let tables = self.next.take()?;
        let mut succ = tables.clone();
        let mut carry = true;
        'outer: for t in succ.iter_mut().rev() {
            for slot in t.iter_mut().rev() {
                *slot += 1;
                if *slot < self.d {
                    carry = false;
                    break 'outer;
                }
                *slot = 0;
            }
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(SkolemDepFn {
            prefix: self.prefix.clone(),
            domain: self.d,
            tables,
        })
    }
}

/// A behavioral description of a strategy-level SDF: one action-level SDF
/// per track of a [`TrackTree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointMap {
    tree: Arc<TrackTree>,
    per_track: Vec<SkolemDepFn>,
}

impl AdjointMap {
    pub fn new(tree: Arc<TrackTree>, per_track: Vec<SkolemDepFn>) -> Result<AdjointMap, SdfError> {
        if per_track.len() != tree.len() {
            return Err(SdfError::Shape);
        }
        let first = per_track.first().map(|f| (f.prefix.clone(), f.domain));
        if per_track.iter().any(|f| Some((f.prefix.clone(), f.domain)) != first) {
            return Err(SdfError::Shape);
        }
        Ok(AdjointMap { tree, per_track })
    }

    pub fn tree(&self) -> &Arc<TrackTree> {
        &self.tree
    }

    /// Action-level SDF at track number `node`.
    pub fn at(&self, node: usize) -> &SkolemDepFn {
        &self.per_track[node]
    }

    pub fn per_track(&self) -> &[SkolemDepFn] {
        &self.per_track
    }
}

/// The strategy-level SDF with adjoint `adj`. Strategies are numbered as in
/// [`TrackTree::strategy_table`].
pub fn sdf_from_adjoint(adj: &AdjointMap, num_actions: usize) -> Result<SkolemDepFn, SdfError> {
    let Some(first) = adj.per_track.first() else {
        return Err(SdfError::Shape);
    };
    if first.domain != num_actions {
        return Err(SdfError::Shape);
    }
    let prefix = first.prefix.clone();
    let tree = &adj.tree;
    let strategies = tree.strategy_count(num_actions).ok_or(SdfError::Shape)?;
    let tables_of: Vec<Vec<usize>> = (0..strategies).map(|i| tree.strategy_table(num_actions, i)).collect();
    let deps = dep_len(&prefix);
    let mut tables = Vec::with_capacity(deps.len());
    for (e, &k) in deps.iter().enumerate() {
        let entries = strategies.checked_pow(k as u32).ok_or(SdfError::Shape)?;
        let mut table = Vec::with_capacity(entries);
        for i in 0..entries {
            let chosen = radix_digits(strategies, k, i);
            let out: Vec<usize> = (0..tree.len())
                .map(|node| {
                    let acts: Vec<usize> = chosen.iter().map(|&s| tables_of[s][node]).collect();
                    adj.per_track[node].tables[e][radix_index(num_actions, &acts)]
                })
                .collect();
            table.push(tree.strategy_index(num_actions, &out));
        }
        tables.push(table);
    }
    Ok(SkolemDepFn {
        prefix,
        domain: strategies,
        tables,
    })
}

/// The adjoint of a strategy-level SDF over `tree`, if it has one.
pub fn adjoint_of(theta: &SkolemDepFn, tree: Arc<TrackTree>, num_actions: usize) -> Result<AdjointMap, SdfError> {
    let strategies = tree.strategy_count(num_actions).ok_or(SdfError::Shape)?;
    if theta.domain != strategies {
        return Err(SdfError::Shape);
    }
    let deps = dep_len(&theta.prefix);
    let tables_of: Vec<Vec<usize>> = (0..strategies).map(|i| tree.strategy_table(num_actions, i)).collect();
    let existential = theta.prefix.existential();
    let mut per_track = Vec::with_capacity(tree.len());
    for node in 0..tree.len() {
        let mut tables = Vec::with_capacity(deps.len());
        for (e, &k) in deps.iter().enumerate() {
            let mut table: Vec<Option<usize>> = vec![None; num_actions.pow(k as u32)];
            for (i, &out) in theta.tables[e].iter().enumerate() {
                let chosen = radix_digits(strategies, k, i);
                let acts: Vec<usize> = chosen.iter().map(|&s| tables_of[s][node]).collect();
                let a = tables_of[out][node];
                let slot = &mut table[radix_index(num_actions, &acts)];
                match slot {
                    Some(b) if *b != a => {
                        return Err(SdfError::NotBehavioral(format!(
                            "`{}` at track {:?} depends on more than the current actions",
                            existential[e],
                            tree.track(node)
                        )))
                    }
                    _ => *slot = Some(a),
                }
            }
            tables.push(
                table
                    .into_iter()
                    .map(|v| v.expect("every action tuple occurs"))
                    .collect(),
            );
        }
        per_track.push(SkolemDepFn {
            prefix: theta.prefix.clone(),
            domain: num_actions,
            tables,
        });
    }
    AdjointMap::new(tree, per_track)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Quant::{Exists as E, Forall as A};

    fn prefix(entries: &[(&str, Quant)]) -> QuantPrefix {
        QuantPrefix::new(entries.iter().map(|(x, q)| (x.to_string(), *q)).collect()).unwrap()
    }

    #[test]
    fn worked_counts() {
        let p = prefix(&[("x", A), ("y", E), ("z", A)]);
        assert_eq!(enumerate_sdf(&p, 2).count(), 4);
        assert_eq!(count_sdf(&p, 2), BigUint::from(4u32));
        assert_eq!(enumerate_sdf(&p.dual(), 2).count(), 8);
        assert_eq!(count_sdf(&p.dual(), 2), BigUint::from(8u32));
        // 2 choices for x, 2^(2^2) for w
        let q = prefix(&[("x", E), ("y", A), ("z", A), ("w", E), ("v", A)]);
        assert_eq!(count_sdf(&q, 2), BigUint::from(32u32));
        assert_eq!(enumerate_sdf(&q, 2).count(), 32);
    }

    #[test]
    fn enumeration_order() {
        let p = prefix(&[("x", A), ("y", E), ("z", A)]);
        let tables: Vec<_> = enumerate_sdf(&p, 2).map(|t| t.tables[0].clone()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        // the copy function: y takes the value of x
        let copy = enumerate_sdf(&p, 2).nth(1).unwrap();
        let v = Valuation::new().with("x", 1).with("z", 0);
        assert_eq!(apply_sdf(&copy, &v).unwrap().get("y"), Some(1));
    }

    #[test]
    fn universal_prefix_is_identity() {
        let p = prefix(&[("x", A), ("z", A)]);
        let all: Vec<_> = enumerate_sdf(&p, 3).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].apply(&[2, 1]), vec![2, 1]);
    }

    #[test]
    fn missing_value() {
        let p = prefix(&[("x", A), ("y", E)]);
        let t = enumerate_sdf(&p, 2).next().unwrap();
        assert_eq!(apply_sdf(&t, &Valuation::new()), Err(SdfError::Missing("x".into())));
    }
}
