use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::graph::rejecting_cycle_reachable;
use super::AutomataError;
use crate::formula::Formula;
use crate::game::MAX_ATOMS;

/// LTL in negation normal form over indexed atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Nnf {
    True,
    False,
    Lit(usize, bool),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Next(Box<Nnf>),
    Until(Box<Nnf>, Box<Nnf>),
    Release(Box<Nnf>, Box<Nnf>),
}

fn to_nnf(f: &Formula, negate: bool, atoms: &[String]) -> Result<Nnf, AutomataError> {
    let b = |g: &Formula, n: bool| to_nnf(g, n, atoms).map(Box::new);
    Ok(match (f, negate) {
        (Formula::True, false) | (Formula::False, true) => Nnf::True,
        (Formula::True, true) | (Formula::False, false) => Nnf::False,
        (Formula::Atom(p), _) => {
            let i = atoms
                .iter()
                .position(|a| a == p)
                .ok_or_else(|| AutomataError::UnknownAtom(p.clone()))?;
            Nnf::Lit(i, !negate)
        }
        (Formula::Not(g), n) => return to_nnf(g, !n, atoms),
        (Formula::And(l, r), false) | (Formula::Or(l, r), true) => Nnf::And(b(l, negate)?, b(r, negate)?),
        (Formula::Or(l, r), false) | (Formula::And(l, r), true) => Nnf::Or(b(l, negate)?, b(r, negate)?),
        (Formula::Next(g), n) => Nnf::Next(b(g, n)?),
        (Formula::Until(l, r), false) | (Formula::Release(l, r), true) => Nnf::Until(b(l, negate)?, b(r, negate)?),
        (Formula::Release(l, r), false) | (Formula::Until(l, r), true) => Nnf::Release(b(l, negate)?, b(r, negate)?),
        (Formula::Exists(..) | Formula::Forall(..) | Formula::Bind(..), _) => {
            return Err(AutomataError::NotLtl(f.to_string()))
        }
    })
}

fn collect_untils(f: &Nnf, out: &mut BTreeSet<Nnf>) {
    match f {
        Nnf::True | Nnf::False | Nnf::Lit(..) => {}
        Nnf::Next(g) => collect_untils(g, out),
        Nnf::And(l, r) | Nnf::Or(l, r) | Nnf::Release(l, r) => {
            collect_untils(l, out);
            collect_untils(r, out);
        }
        Nnf::Until(l, r) => {
            out.insert(f.clone());
            collect_untils(l, out);
            collect_untils(r, out);
        }
    }
}

/// One way of satisfying a set of obligations at the current position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cover {
    pos: u64,
    neg: u64,
    next: BTreeSet<Nnf>,
    postponed: BTreeSet<Nnf>,
}

fn covers(obligations: &BTreeSet<Nnf>) -> BTreeSet<Cover> {
    let mut done = BTreeSet::new();
    let start = Cover {
        pos: 0,
        neg: 0,
        next: BTreeSet::new(),
        postponed: BTreeSet::new(),
    };
    let mut stack = vec![(obligations.iter().cloned().collect::<Vec<_>>(), start)];
    while let Some((mut todo, mut c)) = stack.pop() {
        let mut alive = true;
        while let Some(f) = todo.pop() {
            match f {
                Nnf::True => {}
                Nnf::False => {
                    alive = false;
                    break;
                }
                Nnf::Lit(i, true) => c.pos |= 1 << i,
                Nnf::Lit(i, false) => c.neg |= 1 << i,
                Nnf::And(l, r) => {
                    todo.push(*l);
                    todo.push(*r);
                }
                Nnf::Or(l, r) => {
                    let mut other = todo.clone();
                    other.push(*r);
                    stack.push((other, c.clone()));
                    todo.push(*l);
                }
                Nnf::Next(g) => {
                    c.next.insert(*g);
                }
                Nnf::Until(ref l, ref r) => {
                    let mut other = todo.clone();
                    let mut oc = c.clone();
                    other.push((**l).clone());
                    oc.next.insert(f.clone());
                    oc.postponed.insert(f.clone());
                    stack.push((other, oc));
                    todo.push((**r).clone());
                }
                Nnf::Release(ref l, ref r) => {
                    let mut other = todo.clone();
                    let mut oc = c.clone();
                    other.push((**r).clone());
                    oc.next.insert(f.clone());
                    stack.push((other, oc));
                    todo.push((**l).clone());
                    todo.push((**r).clone());
                }
            }
            if c.pos & c.neg != 0 {
                alive = false;
                break;
            }
        }
        if alive {
            done.insert(c);
        }
    }
    done
}

/// A guarded transition: taken on letters containing `pos` and avoiding `neg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub pos: u64,
    pub neg: u64,
    pub to: usize,
}

impl Edge {
    pub fn enabled(&self, letter: u64) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }
}

/// Universal co-Büchi word automaton over letters `u64` (bit `i` = atom `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ucw {
    atoms: Vec<String>,
    names: Vec<String>,
    initial: Vec<usize>,
    rejecting: Vec<bool>,
    edges: Vec<Vec<Edge>>,
    relevant: Vec<u64>,
}

impl Ucw {
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_rejecting(&self, q: usize) -> bool {
        self.rejecting[q]
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn edges(&self, q: usize) -> &[Edge] {
        &self.edges[q]
    }

    /// Atoms whose value can change the successors of `q`.
    pub fn relevant(&self, q: usize) -> u64 {
        self.relevant[q]
    }

    /// Successor states of `q` on `letter`, all of which must accept.
    pub fn delta(&self, q: usize, letter: u64) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges[q]
            .iter()
            .filter(|e| e.enabled(letter))
            .map(|e| e.to)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Letter with exactly the named atoms; unknown names are an error.
    pub fn letter(&self, names: &[&str]) -> Result<u64, AutomataError> {
        names.iter().try_fold(0u64, |acc, n| {
            let i = self
                .atoms
                .iter()
                .position(|a| a == n)
                .ok_or_else(|| AutomataError::UnknownAtom(n.to_string()))?;
            Ok(acc | 1 << i)
        })
    }
}

fn render_nnf(f: &Nnf, atoms: &[String], out: &mut String) {
    use std::fmt::Write;
    match f {
        Nnf::True => out.push_str("true"),
        Nnf::False => out.push_str("false"),
        Nnf::Lit(i, b) => {
            if !b {
                out.push('!');
            }
            out.push_str(&atoms[*i]);
        }
        Nnf::Next(g) => {
            out.push_str("X ");
            render_nnf(g, atoms, out);
        }
        Nnf::And(l, r) | Nnf::Or(l, r) | Nnf::Until(l, r) | Nnf::Release(l, r) => {
            let op = match f {
                Nnf::And(..) => "&",
                Nnf::Or(..) => "|",
                Nnf::Until(..) => "U",
                _ => "R",
            };
            out.push('(');
            render_nnf(l, atoms, out);
            let _ = write!(out, " {op} ");
            render_nnf(r, atoms, out);
            out.push(')');
        }
    }
}

/// Translates `psi` into a UCW accepting exactly its models: the tableau
/// automaton of `!psi`, degeneralized, read universally with the Büchi set
/// as the rejecting set.
pub fn ltl_to_ucw(psi: &Formula, atoms: &[String]) -> Result<Ucw, AutomataError> {
    if atoms.len() > MAX_ATOMS {
        return Err(AutomataError::TooManyAtoms(atoms.len()));
    }
    let root = to_nnf(psi, true, atoms)?;
    let mut untils = BTreeSet::new();
    collect_untils(&root, &mut untils);
    let untils: Vec<Nnf> = untils.into_iter().collect();
    let k = untils.len();

    type Key = (BTreeSet<Nnf>, usize);
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut keys: Vec<Key> = vec![];
    let mut queue = VecDeque::new();
    let start: Key = (BTreeSet::from([root]), 0);
    index.insert(start.clone(), 0);
    keys.push(start);
    queue.push_back(0);
    let mut edges: Vec<Vec<Edge>> = vec![vec![]];
    let mut cover_cache: HashMap<BTreeSet<Nnf>, BTreeSet<Cover>> = HashMap::new();
    while let Some(id) = queue.pop_front() {
        let (obligations, j) = keys[id].clone();
        let cs = cover_cache
            .entry(obligations.clone())
            .or_insert_with(|| covers(&obligations))
            .clone();
        let mut out = vec![];
        for c in cs {
            let mut level = if j == k { 0 } else { j };
            while level < k && !c.postponed.contains(&untils[level]) {
                level += 1;
            }
            let key = (c.next.clone(), level);
            let to = match index.get(&key) {
                Some(&t) => t,
                None => {
                    let t = keys.len();
                    index.insert(key.clone(), t);
                    keys.push(key);
                    edges.push(vec![]);
                    queue.push_back(t);
                    t
                }
            };
            out.push(Edge {
                pos: c.pos,
                neg: c.neg,
                to,
            });
        }
        out.sort_unstable();
        out.dedup();
        edges[id] = out;
    }
    let names = keys
        .iter()
        .map(|(obl, j)| {
            let mut s = String::from("{");
            for (n, f) in obl.iter().enumerate() {
                if n > 0 {
                    s.push_str(", ");
                }
                render_nnf(f, atoms, &mut s);
            }
            s.push('}');
            if k > 0 {
                s.push_str(&format!("/{j}"));
            }
            s
        })
        .collect();
    // a Büchi state off every cycle can be visited only once
    let cyclic = on_cycle(&edges);
    let rejecting = keys.iter().zip(&cyclic).map(|((_, j), &c)| *j == k && c).collect();
    let relevant = edges
        .iter()
        .map(|es| es.iter().fold(0, |m, e| m | e.pos | e.neg))
        .collect();
    Ok(Ucw {
        atoms: atoms.to_vec(),
        names,
        initial: vec![0],
        rejecting,
        edges,
        relevant,
    })
}

fn on_cycle(edges: &[Vec<Edge>]) -> Vec<bool> {
    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let ids: Vec<NodeIndex> = edges.iter().map(|_| graph.add_node(())).collect();
    for (q, es) in edges.iter().enumerate() {
        for e in es {
            graph.update_edge(ids[q], ids[e.to], ());
        }
    }
    let mut out = vec![false; edges.len()];
    for scc in tarjan_scc(&graph) {
        if scc.len() > 1 || graph.contains_edge(scc[0], scc[0]) {
            for v in scc {
                out[v.index()] = true;
            }
        }
    }
    out
}

/// Whether `u` accepts the word `stem · cycle^ω`.
pub fn ucw_accepts_lasso(u: &Ucw, stem: &[u64], cycle: &[u64]) -> bool {
    assert!(!cycle.is_empty(), "lasso loop must be non-empty");
    let n = stem.len() + cycle.len();
    let letter = |i: usize| if i < stem.len() { stem[i] } else { cycle[i - stem.len()] };
    let next = |i: usize| if i + 1 < n { i + 1 } else { stem.len() };
    let starts: Vec<(usize, usize)> = u.initial.iter().map(|&q| (q, 0)).collect();
    !rejecting_cycle_reachable(
        starts,
        |&(q, i)| u.delta(q, letter(i)).into_iter().map(|t| (t, next(i))).collect(),
        |&(q, _)| u.is_rejecting(q),
    )
}

impl fmt::Display for Ucw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "atoms: {}", self.atoms.join(" "))?;
        for q in 0..self.num_states() {
            let mark = if self.rejecting[q] { " (rejecting)" } else { "" };
            let init = if self.initial.contains(&q) { " (initial)" } else { "" };
            writeln!(f, "q{q} {}{init}{mark}", self.names[q])?;
            for e in &self.edges[q] {
                writeln!(f, "  [{}] -> q{}", guard_text(e, &self.atoms), e.to)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn guard_text(e: &Edge, atoms: &[String]) -> String {
    let mut parts = vec![];
    for (i, a) in atoms.iter().enumerate() {
        if e.pos >> i & 1 == 1 {
            parts.push(a.clone());
        }
        if e.neg >> i & 1 == 1 {
            parts.push(format!("!{a}"));
        }
    }
    if parts.is_empty() {
        "true".into()
    } else {
        parts.join(" & ")
    }
}
