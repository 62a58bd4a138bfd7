use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::time::Instant;

use super::graph::rejecting_cycle_reachable;
use super::tree::{ComponentKind, Step, Uct};
use super::AutomataError;
use crate::game::Cgs;

/// A finite generator of a labeled tree: node `0` is the root and
/// `succ[n][d]` is the node reached from `n` in direction `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MooreWitness {
    labels: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
}

impl MooreWitness {
    /// Checks totality and that every node is reachable from the root.
    pub fn new(labels: Vec<Vec<usize>>, succ: Vec<Vec<usize>>) -> Result<MooreWitness, AutomataError> {
        let n = labels.len();
        if n == 0 || succ.len() != n {
            return Err(AutomataError::Shape(
                "witness needs one label and one successor row per node".into(),
            ));
        }
        let dirs = succ[0].len();
        if dirs == 0 || succ.iter().any(|row| row.len() != dirs || row.iter().any(|&m| m >= n)) {
            return Err(AutomataError::Shape("successor rows must be total and in range".into()));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &m in &succ[x] {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        if let Some(bad) = seen.iter().position(|s| !s) {
            return Err(AutomataError::Shape(format!("node {bad} is unreachable")));
        }
        Ok(MooreWitness { labels, succ })
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_directions(&self) -> usize {
        self.succ[0].len()
    }

    pub fn label(&self, n: usize) -> &[usize] {
        &self.labels[n]
    }

    pub fn successor(&self, n: usize, d: usize) -> usize {
        self.succ[n][d]
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn successors(&self) -> &[Vec<usize>] {
        &self.succ
    }
}

impl fmt::Display for MooreWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in 0..self.num_nodes() {
            let succ: Vec<String> = self.succ[n].iter().map(|m| format!("n{m}")).collect();
            writeln!(f, "n{n} label {:?} -> [{}]", self.labels[n], succ.join(" "))?;
        }
        Ok(())
    }
}

fn check_shape(w: &MooreWitness, u: &Uct) -> Result<(), AutomataError> {
    if w.num_directions() != u.num_directions() {
        return Err(AutomataError::Shape(format!(
            "witness has {} directions, automaton {}",
            w.num_directions(),
            u.num_directions()
        )));
    }
    for l in &w.labels {
        if l.len() != u.components().len() || l.iter().zip(u.components()).any(|(&v, c)| v >= c.size) {
            return Err(AutomataError::Shape(
                "label does not fit the automaton's components".into(),
            ));
        }
    }
    Ok(())
}

/// Whether `u` accepts the tree generated by `w`.
pub fn uct_membership(w: &MooreWitness, u: &Uct) -> Result<bool, AutomataError> {
    check_shape(w, u)?;
    let labels: Vec<Vec<Option<usize>>> = w.labels.iter().map(|l| l.iter().copied().map(Some).collect()).collect();
    Ok(!rejecting_cycle_reachable(
        vec![(0usize, u.initial())],
        |&(n, q)| match u.delta(q, &labels[n]) {
            Step::Moves(ms) => ms.into_iter().map(|(d, t)| (w.succ[n][d], t)).collect(),
            Step::Need(c) => unreachable!("complete label lacks component {c}"),
        },
        |&(_, q)| u.is_rejecting(q),
    ))
}

/// Budget for the witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_steps: u64,
    pub deadline: Option<Instant>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_steps: 20_000_000,
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    /// A witness with `k` nodes, the least `k` possible.
    Sat { witness: MooreWitness, k: usize },
    /// No witness with at most this many nodes.
    UnsatUpTo(usize),
    /// The budget ran out first.
    Exhausted(String),
}

/// Searches for accepted generators with `1..=k_max` nodes, smallest first.
pub fn uct_emptiness_bounded(u: &Uct, k_max: usize, limits: SearchLimits) -> Emptiness {
    assert!(k_max >= 1, "k_max must be positive");
    let mut steps = 0;
    for k in 1..=k_max {
        match search(u, &Frame::Free { cap: k }, &limits, &mut steps) {
            Ok(Some(found)) => {
                return Emptiness::Sat {
                    k: found.witness.num_nodes(),
                    witness: found.witness,
                }
            }
            Ok(None) => {}
            Err(e) => return Emptiness::Exhausted(e),
        }
    }
    Emptiness::UnsatUpTo(k_max)
}

/// Where the nodes of a generator may come from.
#[derive(Clone, Copy, Debug)]
pub enum Frame<'a> {
    /// Any generator with at most `cap` nodes.
    Free { cap: usize },
    /// Generators whose nodes are copies of the states of `g` (at most
    /// `memory` per state) and follow its transitions, with atoms of the
    /// structure fixed by its labeling.
    Model { g: &'a Cgs, memory: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub witness: MooreWitness,
    /// State of the structure each node copies (all `0` for free frames).
    pub node_states: Vec<usize>,
}

#[derive(Clone)]
struct Partial {
    labels: Vec<Vec<Option<usize>>>,
    succ: Vec<Vec<Option<usize>>>,
    states: Vec<usize>,
    prod: HashMap<(usize, usize), usize>,
    prod_nodes: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    current: Option<usize>,
    pending: Vec<(usize, usize)>,
}

struct Searcher<'a> {
    u: &'a Uct,
    frame: &'a Frame<'a>,
    limits: &'a SearchLimits,
    steps: &'a mut u64,
    fixed: Vec<Option<usize>>,
}

enum Target {
    Existing(usize),
    New(usize),
}

/// Depth-first search for an accepted generator in `frame`; the first
/// one found in the fixed branching order is returned.
pub fn search(u: &Uct, frame: &Frame<'_>, limits: &SearchLimits, steps: &mut u64) -> Result<Option<Found>, String> {
    let fixed = match frame {
        Frame::Free { .. } => vec![None; u.components().len()],
        Frame::Model { g, .. } => {
            if g.num_decisions() != u.num_directions() || g.agents() != u.agents() {
                return Err("structure and automaton disagree on agents or actions".into());
            }
            u.components()
                .iter()
                .enumerate()
                .map(|(i, c)| match &c.kind {
                    ComponentKind::Atom(a) if i < u.num_ap() => Some(g.atom_index(a).unwrap_or(usize::MAX)),
                    _ => None,
                })
                .collect()
        }
    };
    let mut s = Searcher {
        u,
        frame,
        limits,
        steps,
        fixed,
    };
    let mut st = Partial {
        labels: vec![],
        succ: vec![],
        states: vec![],
        prod: HashMap::new(),
        prod_nodes: vec![],
        adj: vec![],
        queue: VecDeque::new(),
        current: None,
        pending: vec![],
    };
    let root_state = match frame {
        Frame::Free { .. } => 0,
        Frame::Model { g, .. } => g.initial(),
    };
    s.new_node(&mut st, root_state);
    st.prod.insert((0, u.initial()), 0);
    st.prod_nodes.push((0, u.initial()));
    st.adj.push(vec![]);
    st.queue.push_back(0);
    let Some(done) = s.run(st)? else {
        return Ok(None);
    };
    let found = s.complete(done);
    match uct_membership(&found.witness, u) {
        Ok(true) => Ok(Some(found)),
        Ok(false) => Err("internal error: witness failed re-verification".into()),
        Err(e) => Err(format!("internal error: {e}")),
    }
}

impl Searcher<'_> {
    fn tick(&mut self) -> Result<(), String> {
        *self.steps += 1;
        if *self.steps > self.limits.max_steps {
            return Err(format!("search step budget of {} exhausted", self.limits.max_steps));
        }
        if (*self.steps).is_multiple_of(1024) {
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    return Err("time budget exhausted".into());
                }
            }
        }
        Ok(())
    }

    fn new_node(&self, st: &mut Partial, state: usize) -> usize {
        let label = match self.frame {
            Frame::Free { .. } => vec![None; self.u.components().len()],
            Frame::Model { g, .. } => self
                .fixed
                .iter()
                .map(|f| {
                    f.map(|i| {
                        if i == usize::MAX {
                            0
                        } else {
                            (g.label(state) >> i & 1) as usize
                        }
                    })
                })
                .collect(),
        };
        st.labels.push(label);
        st.succ.push(vec![None; self.u.num_directions()]);
        st.states.push(state);
        st.labels.len() - 1
    }

    fn candidates(&self, st: &Partial, n: usize, d: usize) -> Vec<Target> {
        match self.frame {
            Frame::Free { cap } => {
                let mut out: Vec<Target> = (0..st.labels.len()).map(Target::Existing).collect();
                if st.labels.len() < *cap {
                    out.push(Target::New(0));
                }
                out
            }
            Frame::Model { g, memory } => {
                let t = g.step_index(st.states[n], d);
                let mut out: Vec<Target> = (0..st.labels.len())
                    .filter(|&m| st.states[m] == t)
                    .map(Target::Existing)
                    .collect();
                if out.len() < *memory {
                    out.push(Target::New(t));
                }
                out
            }
        }
    }

    fn run(&mut self, mut st: Partial) -> Result<Option<Partial>, String> {
        loop {
            self.tick()?;
            if let Some(p) = st.current {
                let Some((d, q2)) = st.pending.pop() else {
                    st.current = None;
                    continue;
                };
                let n = st.prod_nodes[p].0;
                match st.succ[n][d] {
                    Some(m) => {
                        if !self.add_edge(&mut st, p, m, q2) {
                            return Ok(None);
                        }
                    }
                    None => {
                        st.pending.push((d, q2));
                        for target in self.candidates(&st, n, d) {
                            let mut next = st.clone();
                            let m = match target {
                                Target::Existing(m) => m,
                                Target::New(s) => self.new_node(&mut next, s),
                            };
                            next.succ[n][d] = Some(m);
                            if let Some(done) = self.run(next)? {
                                return Ok(Some(done));
                            }
                        }
                        return Ok(None);
                    }
                }
            } else {
                let Some(p) = st.queue.pop_front() else {
                    return Ok(Some(st));
                };
                let (n, q) = st.prod_nodes[p];
                match self.u.delta(q, &st.labels[n]) {
                    Step::Moves(mut ms) => {
                        ms.reverse();
                        st.current = Some(p);
                        st.pending = ms;
                    }
                    Step::Need(c) => {
                        st.queue.push_front(p);
                        for v in 0..self.u.components()[c].size {
                            let mut next = st.clone();
                            next.labels[n][c] = Some(v);
                            if let Some(done) = self.run(next)? {
                                return Ok(Some(done));
                            }
                        }
                        return Ok(None);
                    }
                }
            }
        }
    }

    /// Adds the product edge from `p` to `(m, q)`; false when this closes a
    /// cycle through a rejecting state.
    fn add_edge(&self, st: &mut Partial, p: usize, m: usize, q: usize) -> bool {
        let (p2, fresh) = match st.prod.get(&(m, q)) {
            Some(&x) => (x, false),
            None => {
                let x = st.prod_nodes.len();
                st.prod.insert((m, q), x);
                st.prod_nodes.push((m, q));
                st.adj.push(vec![]);
                st.queue.push_back(x);
                (x, true)
            }
        };
        if !st.adj[p].contains(&p2) {
            st.adj[p].push(p2);
        }
        if fresh {
            return true;
        }
        // is there a path p2 ~> p meeting a rejecting state?
        let rej = |x: usize| self.u.is_rejecting(st.prod_nodes[x].1);
        let n = st.prod_nodes.len();
        let mut seen = vec![[false; 2]; n];
        let start = rej(p2);
        seen[p2][start as usize] = true;
        let mut stack = vec![(p2, start)];
        while let Some((x, f)) = stack.pop() {
            if x == p && f {
                return false;
            }
            for &y in &st.adj[x] {
                let g = f || rej(y);
                if !seen[y][g as usize] {
                    seen[y][g as usize] = true;
                    stack.push((y, g));
                }
            }
        }
        true
    }

    fn complete(&self, mut st: Partial) -> Found {
        let mut n = 0;
        while n < st.labels.len() {
            for d in 0..self.u.num_directions() {
                if st.succ[n][d].is_some() {
                    continue;
                }
                let m = match self.frame {
                    Frame::Free { .. } => 0,
                    Frame::Model { g, .. } => {
                        let t = g.step_index(st.states[n], d);
                        match (0..st.labels.len()).find(|&m| st.states[m] == t) {
                            Some(m) => m,
                            None => self.new_node(&mut st, t),
                        }
                    }
                };
                st.succ[n][d] = Some(m);
            }
            n += 1;
        }
        let labels = st
            .labels
            .iter()
            .map(|l| l.iter().map(|v| v.unwrap_or(0)).collect())
            .collect();
        let succ = st
            .succ
            .iter()
            .map(|row| row.iter().map(|m| m.expect("filled")).collect())
            .collect();
        Found {
            witness: MooreWitness::new(labels, succ).expect("generated from the root"),
            node_states: st.states,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::assemble_full_automaton;
    use crate::formula::{parse, Decl};

    fn full(src: &str, agents: &[&str], b: usize) -> Uct {
        let agents: Vec<String> = agents.iter().map(|s| s.to_string()).collect();
        let f = parse(src, &Decl::with_agents(&agents)).unwrap();
        assemble_full_automaton(&f, &agents, b, &[]).unwrap()
    }

    #[test]
    fn next_p_has_one_node_witness() {
        let u = full("<<x>>(alpha,x) X p", &["alpha"], 1);
        match uct_emptiness_bounded(&u, 3, SearchLimits::default()) {
            Emptiness::Sat { witness, k } => {
                assert_eq!(k, 1);
                assert_eq!(witness.label(0)[0], 1);
                assert_eq!(witness.successor(0, 0), 0);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn contradiction_is_empty() {
        let u = full("<<x>>(alpha,x)(X p & X !p)", &["alpha"], 2);
        assert_eq!(
            uct_emptiness_bounded(&u, 3, SearchLimits::default()),
            Emptiness::UnsatUpTo(3)
        );
    }

    #[test]
    fn true_matrix_accepts_anything() {
        let u = full("<<x>>(alpha,x) true", &["alpha"], 2);
        assert!(matches!(
            uct_emptiness_bounded(&u, 1, SearchLimits::default()),
            Emptiness::Sat { k: 1, .. }
        ));
    }

    #[test]
    fn budget_reported() {
        let u = full("<<x>>(alpha,x)(X p & X !p)", &["alpha"], 2);
        let limits = SearchLimits {
            max_steps: 3,
            deadline: None,
        };
        assert!(matches!(uct_emptiness_bounded(&u, 3, limits), Emptiness::Exhausted(_)));
    }

    #[test]
    fn witness_validation() {
        assert!(MooreWitness::new(vec![vec![0], vec![0]], vec![vec![0], vec![1]]).is_err());
        assert!(MooreWitness::new(vec![vec![0]], vec![vec![0, 0]]).is_ok());
    }
}
