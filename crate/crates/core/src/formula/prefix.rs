use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::ast::{Formula, Quant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrefixError {
    #[error("variable `{0}` is quantified twice")]
    DuplicateVariable(String),
    #[error("agent `{0}` is bound twice")]
    DuplicateAgent(String),
    #[error("agent `{0}` is not bound")]
    MissingAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
}

/// A quantification prefix: each variable occurs once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantPrefix {
    entries: Vec<(String, Quant)>,
}

impl QuantPrefix {
    pub fn new(entries: Vec<(String, Quant)>) -> Result<QuantPrefix, PrefixError> {
        let mut seen = BTreeSet::new();
        for (x, _) in &entries {
            if !seen.insert(x.as_str()) {
                return Err(PrefixError::DuplicateVariable(x.clone()));
            }
        }
        Ok(QuantPrefix { entries })
    }

    pub fn entries(&self) -> &[(String, Quant)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(x, _)| x.as_str())
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.entries.iter().position(|(x, _)| x == var)
    }

    /// Existential variables, in prefix order.
    pub fn existential(&self) -> Vec<&str> {
        self.with(Quant::Exists)
    }

    /// Universal variables, in prefix order.
    pub fn universal(&self) -> Vec<&str> {
        self.with(Quant::Forall)
    }

    fn with(&self, q: Quant) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, p)| *p == q)
            .map(|(x, _)| x.as_str())
            .collect()
    }

    /// Universal variables preceding `var`; empty when `var` is universal
    /// or absent.
    pub fn dep(&self, var: &str) -> Vec<&str> {
        let Some(i) = self.position(var) else {
            return vec![];
        };
        if self.entries[i].1 == Quant::Forall {
            return vec![];
        }
        self.entries[..i]
            .iter()
            .filter(|(_, q)| *q == Quant::Forall)
            .map(|(x, _)| x.as_str())
            .collect()
    }

    /// Positions in [`Self::universal`] of the variables in `dep(var)`.
    pub fn dep_universal_indices(&self, var: &str) -> Vec<usize> {
        let Some(i) = self.position(var) else {
            return vec![];
        };
        self.entries[..i]
            .iter()
            .filter(|(_, q)| *q == Quant::Forall)
            .enumerate()
            .map(|(k, _)| k)
            .collect()
    }

    pub fn dual(&self) -> QuantPrefix {
        QuantPrefix {
            entries: self.entries.iter().map(|(x, q)| (x.clone(), q.dual())).collect(),
        }
    }

    /// Wraps `matrix` in the prefix.
    pub fn apply(&self, matrix: Formula) -> Formula {
        self.entries
            .iter()
            .rev()
            .fold(matrix, |f, (x, q)| Formula::quant(*q, x.clone(), f))
    }

    /// Splits a formula into its maximal leading quantifier block and the rest.
    /// Repeated variables are reported as an error.
    pub fn split(f: &Formula) -> Result<(QuantPrefix, &Formula), PrefixError> {
        let mut entries = Vec::new();
        let mut cur = f;
        loop {
            match cur {
                Formula::Exists(x, g) => {
                    entries.push((x.clone(), Quant::Exists));
                    cur = g;
                }
                Formula::Forall(x, g) => {
                    entries.push((x.clone(), Quant::Forall));
                    cur = g;
                }
                _ => break,
            }
        }
        Ok((QuantPrefix::new(entries)?, cur))
    }
}

impl fmt::Display for QuantPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, q) in &self.entries {
            match q {
                Quant::Exists => write!(f, "<<{x}>>")?,
                Quant::Forall => write!(f, "[[{x}]]")?,
            }
        }
        Ok(())
    }
}

/// Summary of a quantification prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixAnalysis {
    pub existential: Vec<String>,
    pub universal: Vec<String>,
    pub dependencies: Vec<(String, Vec<String>)>,
    pub dual: QuantPrefix,
}

pub fn prefix_analysis(p: &QuantPrefix) -> PrefixAnalysis {
    let owned = |v: Vec<&str>| v.into_iter().map(String::from).collect::<Vec<_>>();
    PrefixAnalysis {
        existential: owned(p.existential()),
        universal: owned(p.universal()),
        dependencies: p
            .existential()
            .into_iter()
            .map(|y| (y.to_string(), owned(p.dep(y))))
            .collect(),
        dual: p.dual(),
    }
}

/// A binding prefix: each agent bound exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BindPrefix {
    entries: Vec<(String, String)>,
}

impl BindPrefix {
    /// Checks that `entries` bind every agent of `agents` exactly once.
    pub fn new(entries: Vec<(String, String)>, agents: &[String]) -> Result<BindPrefix, PrefixError> {
        let mut seen = BTreeSet::new();
        for (a, _) in &entries {
            if !agents.contains(a) {
                return Err(PrefixError::UnknownAgent(a.clone()));
            }
            if !seen.insert(a.as_str()) {
                return Err(PrefixError::DuplicateAgent(a.clone()));
            }
        }
        for a in agents {
            if !seen.contains(a.as_str()) {
                return Err(PrefixError::MissingAgent(a.clone()));
            }
        }
        Ok(BindPrefix { entries })
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Variable bound to `agent`.
    pub fn var_of(&self, agent: &str) -> Option<&str> {
        self.entries.iter().find(|(a, _)| a == agent).map(|(_, x)| x.as_str())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.entries.iter().map(|(_, x)| x.clone()).collect()
    }

    pub fn apply(&self, body: Formula) -> Formula {
        self.entries
            .iter()
            .rev()
            .fold(body, |f, (a, x)| Formula::bind(a.clone(), x.clone(), f))
    }

    /// Splits the maximal leading chain of bindings off a formula.
    pub fn split(f: &Formula) -> (Vec<(String, String)>, &Formula) {
        let mut entries = Vec::new();
        let mut cur = f;
        while let Formula::Bind(a, x, g) = cur {
            entries.push((a.clone(), x.clone()));
            cur = g;
        }
        (entries, cur)
    }
}
