use std::collections::HashMap;

use thiserror::Error;

use super::cgs::Cgs;
use super::strategy::{Assignment, MooreStrategy, Place};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlayError {
    #[error("assignment does not cover agent `{0}`")]
    Incomplete(String),
    #[error("state {0} out of range")]
    State(usize),
    #[error("unwinding would have {nodes} nodes, above the cap of {cap}")]
    TooLarge { nodes: u128, cap: usize },
}

/// An infinite path given as a stem followed by a repeated non-empty loop.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    pub fn new(stem: Vec<usize>, cycle: Vec<usize>) -> Lasso {
        assert!(!cycle.is_empty(), "lasso loop must be non-empty");
        Lasso { stem, cycle }
    }

    pub fn at(&self, i: usize) -> usize {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The path from position `i` on.
    pub fn suffix(&self, i: usize) -> Lasso {
        if i <= self.stem.len() {
            Lasso::new(self.stem[i..].to_vec(), self.cycle.clone())
        } else {
            let k = (i - self.stem.len()) % self.cycle.len();
            let mut cycle = self.cycle[k..].to_vec();
            cycle.extend_from_slice(&self.cycle[..k]);
            Lasso::new(vec![], cycle)
        }
    }

    /// Whether both lassoes denote the same infinite sequence.
    pub fn same_path(&self, other: &Lasso) -> bool {
        let (a, b) = (self.cycle.len(), other.cycle.len());
        let horizon = self.stem.len().max(other.stem.len()) + a * b / gcd(a, b);
        (0..horizon).all(|i| self.at(i) == other.at(i))
    }

    /// Every consecutive pair is connected by some decision.
    pub fn is_legal(&self, g: &Cgs) -> bool {
        let n = self.stem.len() + self.cycle.len();
        (0..n).all(|i| g.successors(self.at(i)).contains(&self.at(i + 1)))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn agent_strategies<'a>(g: &Cgs, asg: &'a Assignment<MooreStrategy>) -> Result<Vec<&'a MooreStrategy>, PlayError> {
    g.agents()
        .iter()
        .map(|a| asg.agent(a).ok_or_else(|| PlayError::Incomplete(a.clone())))
        .collect()
}

/// The unique play of a complete finite-memory assignment from `s`.
pub fn play(g: &Cgs, asg: &Assignment<MooreStrategy>, s: usize) -> Result<Lasso, PlayError> {
    if s >= g.num_states() {
        return Err(PlayError::State(s));
    }
    let strategies = agent_strategies(g, asg)?;
    let mut mems: Vec<usize> = strategies.iter().map(|f| f.initial_memory()).collect();
    let mut state = s;
    let mut seen: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut states = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(state, mems.clone())) {
            let cycle = states.split_off(start);
            return Ok(Lasso::new(states, cycle));
        }
        seen.insert((state, mems.clone()), states.len());
        states.push(state);
        let mut decision = Vec::with_capacity(mems.len());
        for (m, f) in mems.iter_mut().zip(&strategies) {
            *m = f.update(*m, state);
            decision.push(f.output(*m));
        }
        state = g.step(state, &decision);
    }
}

/// The `i`-th global translation: the assignment whose strategies read
/// tracks after the first `i` steps of the play, together with the state
/// reached.
pub fn translate(
    g: &Cgs,
    asg: &Assignment<MooreStrategy>,
    s: usize,
    i: usize,
) -> Result<(Assignment<MooreStrategy>, usize), PlayError> {
    let path = play(g, asg, s)?;
    let prefix: Vec<usize> = (0..i).map(|k| path.at(k)).collect();
    Ok((asg.map_values(|f| f.advanced(&prefix)), path.at(i)))
}

/// Convenience: a complete assignment mapping agents to strategies directly.
pub fn agents_assignment(g: &Cgs, strategies: Vec<MooreStrategy>) -> Assignment<MooreStrategy> {
    g.agents()
        .iter()
        .zip(strategies)
        .fold(Assignment::new(), |acc, (a, f)| {
            acc.redefine(Place::Agent(a.clone()), f)
        })
}

/// A finite prefix of the decision-unwinding: nodes are decision sequences
/// of length at most `depth`, listed level by level in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    pub num_decisions: usize,
    pub depth: usize,
    /// State reached by each node.
    pub states: Vec<usize>,
    /// Label of each node.
    pub labels: Vec<u64>,
}

impl DecisionTree {
    /// Index of the node reached by `path`.
    pub fn index(&self, path: &[usize]) -> Option<usize> {
        if path.len() > self.depth || path.iter().any(|&d| d >= self.num_decisions) {
            return None;
        }
        let offset: usize = (0..path.len()).map(|l| self.num_decisions.pow(l as u32)).sum();
        Some(offset + path.iter().fold(0, |acc, &d| acc * self.num_decisions + d))
    }

    pub fn label(&self, path: &[usize]) -> Option<u64> {
        self.index(path).map(|i| self.labels[i])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

pub const DEFAULT_UNWIND_CAP: usize = 1 << 20;

pub fn unwind(g: &Cgs, depth: usize, cap: usize) -> Result<DecisionTree, PlayError> {
    let nd = g.num_decisions() as u128;
    let total: u128 = (0..=depth as u32)
        .map(|l| nd.saturating_pow(l))
        .fold(0u128, u128::saturating_add);
    if total > cap as u128 {
        return Err(PlayError::TooLarge { nodes: total, cap });
    }
    let nd = g.num_decisions();
    let mut states = vec![g.initial()];
    let mut level_start = 0;
    for _ in 0..depth {
        let level_end = states.len();
        for i in level_start..level_end {
            let s = states[i];
            for d in 0..nd {
                states.push(g.step_index(s, d));
            }
        }
        level_start = level_end;
    }
    let labels = states.iter().map(|&s| g.label(s)).collect();
    Ok(DecisionTree {
        num_decisions: nd,
        depth,
        states,
        labels,
    })
}
