use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::cgs::Cgs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("memory update or output table has the wrong size")]
    Shape,
    #[error("memory state {0} out of range")]
    Memory(usize),
    #[error("action {0} out of range")]
    Action(usize),
}

/// A finite-memory strategy: reads the states of a track one by one and
/// outputs an action from the memory reached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MooreStrategy {
    num_states: usize,
    initial: usize,
    update: Vec<usize>,
    output: Vec<usize>,
}

impl MooreStrategy {
    /// `update[m * num_states + s]` is the memory after reading `s` in `m`.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        initial: usize,
        update: Vec<usize>,
        output: Vec<usize>,
    ) -> Result<MooreStrategy, StrategyError> {
        let m = output.len();
        if m == 0 || update.len() != m * num_states {
            return Err(StrategyError::Shape);
        }
        if initial >= m {
            return Err(StrategyError::Memory(initial));
        }
        if let Some(&bad) = update.iter().find(|&&u| u >= m) {
            return Err(StrategyError::Memory(bad));
        }
        if let Some(&bad) = output.iter().find(|&&a| a >= num_actions) {
            return Err(StrategyError::Action(bad));
        }
        Ok(MooreStrategy {
            num_states,
            initial,
            update,
            output,
        })
    }

    /// Memoryless strategy choosing `action` everywhere.
    pub fn constant(num_states: usize, action: usize) -> MooreStrategy {
        MooreStrategy {
            num_states,
            initial: 0,
            update: vec![0; num_states],
            output: vec![action],
        }
    }

    pub fn memory_size(&self) -> usize {
        self.output.len()
    }

    pub fn initial_memory(&self) -> usize {
        self.initial
    }

    pub fn update(&self, mem: usize, state: usize) -> usize {
        self.update[mem * self.num_states + state]
    }

    pub fn output(&self, mem: usize) -> usize {
        self.output[mem]
    }

    /// Action on a non-empty track.
    pub fn action(&self, track: &[usize]) -> usize {
        let m = track.iter().fold(self.initial, |m, &s| self.update(m, s));
        self.output(m)
    }

    /// The machine whose tracks are read after `prefix`.
    pub fn advanced(&self, prefix: &[usize]) -> MooreStrategy {
        let m = prefix.iter().fold(self.initial, |m, &s| self.update(m, s));
        MooreStrategy {
            initial: m,
            ..self.clone()
        }
    }
}

/// All tracks of length `1..=horizon` from a root state, as a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackTree {
    root: usize,
    horizon: usize,
    nodes: Vec<TrackNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct TrackNode {
    state: usize,
    len: usize,
    parent: Option<usize>,
    children: Vec<(usize, usize)>,
}

impl TrackTree {
    pub fn build(g: &Cgs, root: usize, horizon: usize) -> TrackTree {
        let mut nodes = Vec::new();
        if horizon > 0 {
            nodes.push(TrackNode {
                state: root,
                len: 1,
                parent: None,
                children: vec![],
            });
            let mut i = 0;
            while i < nodes.len() {
                if nodes[i].len < horizon {
                    for t in g.successors(nodes[i].state) {
                        let id = nodes.len();
                        nodes.push(TrackNode {
                            state: t,
                            len: nodes[i].len + 1,
                            parent: Some(i),
                            children: vec![],
                        });
                        nodes[i].children.push((t, id));
                    }
                }
                i += 1;
            }
        }
        TrackTree { root, horizon, nodes }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Number of tracks.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn child(&self, node: usize, state: usize) -> Option<usize> {
        self.nodes[node]
            .children
            .iter()
            .find(|(s, _)| *s == state)
            .map(|&(_, id)| id)
    }

    /// Track number `node`, as a state sequence.
    pub fn track(&self, node: usize) -> Vec<usize> {
        let mut out = vec![];
        let mut cur = Some(node);
        while let Some(n) = cur {
            out.push(self.nodes[n].state);
            cur = self.nodes[n].parent;
        }
        out.reverse();
        out
    }

    pub fn index_of(&self, track: &[usize]) -> Option<usize> {
        let (&first, rest) = track.split_first()?;
        if first != self.root || self.nodes.is_empty() {
            return None;
        }
        rest.iter().try_fold(0, |n, &s| self.child(n, s))
    }

    /// Number of strategies over `num_actions` actions.
    pub fn strategy_count(&self, num_actions: usize) -> Option<usize> {
        num_actions.checked_pow(self.nodes.len() as u32)
    }

    /// Action table of strategy number `index`; the first track is the most
    /// significant digit.
    pub fn strategy_table(&self, num_actions: usize, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.nodes.len()];
        for slot in out.iter_mut().rev() {
            *slot = index % num_actions;
            index /= num_actions;
        }
        out
    }

    pub fn strategy_index(&self, num_actions: usize, table: &[usize]) -> usize {
        table.iter().fold(0, |acc, &a| acc * num_actions + a)
    }
}

/// A strategy given explicitly on the tracks of a [`TrackTree`], viewed
/// from one node of the tree (the current end of the history).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizonStrategy {
    tree: Arc<TrackTree>,
    node: Option<usize>,
    table: Arc<Vec<usize>>,
}

impl HorizonStrategy {
    pub fn new(tree: Arc<TrackTree>, table: Vec<usize>) -> HorizonStrategy {
        assert_eq!(tree.len(), table.len(), "one action per track");
        let node = if tree.is_empty() { None } else { Some(0) };
        HorizonStrategy {
            tree,
            node,
            table: Arc::new(table),
        }
    }

    /// Remaining number of steps this strategy is defined for.
    pub fn remaining(&self) -> usize {
        match self.node {
            None => 0,
            Some(n) => self.tree.horizon - self.tree.nodes[n].len + 1,
        }
    }

    /// Action at the current history end; `None` beyond the horizon.
    pub fn current(&self) -> Option<usize> {
        self.node.map(|n| self.table[n])
    }

    /// The strategy after the history is extended by `state`.
    pub fn shift(&self, state: usize) -> HorizonStrategy {
        HorizonStrategy {
            tree: self.tree.clone(),
            node: self.node.and_then(|n| self.tree.child(n, state)),
            table: self.table.clone(),
        }
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn tree(&self) -> &TrackTree {
        &self.tree
    }

    /// Finite-memory version that plays `default` beyond the horizon.
    pub fn to_moore(&self, num_states: usize, num_actions: usize, default: usize) -> MooreStrategy {
        let tree = &self.tree;
        let n = tree.len();
        let start = n;
        let beyond = n + 1;
        let mut update = vec![beyond; (n + 2) * num_states];
        if let Some(root) = self.node {
            update[start * num_states + tree.nodes[root].state] = root;
        }
        for (id, node) in tree.nodes.iter().enumerate() {
            for &(s, child) in &node.children {
                update[id * num_states + s] = child;
            }
        }
        let mut output: Vec<usize> = self.table.to_vec();
        output.push(default);
        output.push(default);
        MooreStrategy::new(num_states, num_actions, start, update, output).expect("well-formed by construction")
    }
}

/// A key of an assignment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Agent(String),
    Var(String),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Agent(a) => write!(f, "agent {a}"),
            Place::Var(x) => write!(f, "variable {x}"),
        }
    }
}

/// A partial map from agents and variables to strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment<S> {
    map: BTreeMap<Place, S>,
}

impl<S> Default for Assignment<S> {
    fn default() -> Self {
        Assignment { map: BTreeMap::new() }
    }
}

impl<S: Clone> Assignment<S> {
    pub fn new() -> Assignment<S> {
        Assignment::default()
    }

    pub fn get(&self, place: &Place) -> Option<&S> {
        self.map.get(place)
    }

    pub fn agent(&self, a: &str) -> Option<&S> {
        self.map.get(&Place::Agent(a.to_string()))
    }

    pub fn var(&self, x: &str) -> Option<&S> {
        self.map.get(&Place::Var(x.to_string()))
    }

    /// `χ[place ↦ s]`.
    pub fn redefine(&self, place: Place, s: S) -> Assignment<S> {
        let mut map = self.map.clone();
        map.insert(place, s);
        Assignment { map }
    }

    pub fn domain(&self) -> impl Iterator<Item = &Place> {
        self.map.keys()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Complete iff every agent is in the domain.
    pub fn is_complete(&self, agents: &[String]) -> bool {
        agents.iter().all(|a| self.map.contains_key(&Place::Agent(a.clone())))
    }

    pub fn map_values<T>(&self, f: impl Fn(&S) -> T) -> Assignment<T> {
        Assignment {
            map: self.map.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }
}
