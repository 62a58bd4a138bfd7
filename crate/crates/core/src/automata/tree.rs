use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use super::ltl::{ltl_to_ucw, Ucw};
use super::AutomataError;
use crate::formula::{classify, one_goal, BindPrefix, Formula, Fragment, OneGoal, QuantPrefix};
use crate::game::MAX_ATOMS;
use crate::semantics::{count_sdf, enumerate_sdf};

/// Largest number of dependence functions allowed in one label component.
pub const MAX_SDF_COMPONENT: usize = 1 << 16;

/// What a label component stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// Truth value of an atom (`1` = true).
    Atom(String),
    /// Action assigned to a variable.
    Var(String),
    /// Index of a dependence function (in enumeration order) for the
    /// principal sentence with this index, or for its dual.
    Sdf { principal: usize, dual: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: ComponentKind,
    pub size: usize,
}

/// Result of reading a partially known label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Conjunction of moves `(direction, state)`; empty means accept.
    Moves(Vec<(usize, usize)>),
    /// The transition depends on this still unknown component.
    Need(usize),
}

/// Positive Boolean combination of moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosBool {
    True,
    False,
    Move(usize, usize),
    And(Vec<PosBool>),
    Or(Vec<PosBool>),
}

impl PosBool {
    /// The conjunction of `moves`.
    pub fn all(moves: &[(usize, usize)]) -> PosBool {
        match moves {
            [] => PosBool::True,
            [(d, q)] => PosBool::Move(*d, *q),
            _ => PosBool::And(moves.iter().map(|&(d, q)| PosBool::Move(d, q)).collect()),
        }
    }

    /// Moves of a conjunctive formula; `None` if it uses a disjunction or `False`.
    pub fn conjunctive_moves(&self) -> Option<Vec<(usize, usize)>> {
        match self {
            PosBool::True => Some(vec![]),
            PosBool::False | PosBool::Or(_) => None,
            PosBool::Move(d, q) => Some(vec![(*d, *q)]),
            PosBool::And(items) => {
                let mut out = vec![];
                for i in items {
                    out.extend(i.conjunctive_moves()?);
                }
                Some(out)
            }
        }
    }
}

/// Parity condition `F1 ⊆ … ⊆ Fk = Q`; an infinite path is accepted iff the
/// least index meeting its infinity set is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptanceParity {
    pub sets: Vec<BTreeSet<usize>>,
}

impl AcceptanceParity {
    /// Co-Büchi: `F1` = rejecting states, `F2` = all states.
    pub fn co_buchi(rejecting: impl IntoIterator<Item = usize>, num_states: usize) -> AcceptanceParity {
        AcceptanceParity {
            sets: vec![rejecting.into_iter().collect(), (0..num_states).collect()],
        }
    }

    pub fn index(&self) -> usize {
        self.sets.len()
    }

    pub fn accepts(&self, inf: &BTreeSet<usize>) -> bool {
        match self.sets.iter().position(|f| !f.is_disjoint(inf)) {
            Some(i) => (i + 1) % 2 == 0,
            None => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Reader {
    /// Direction from the actions of the bound variables, one component per agent.
    Goal { per_agent: Vec<usize> },
    /// Direction set from a dependence function: `dirs[θ]`.
    Sentence { component: usize, dirs: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Part {
    ucw: Ucw,
    offset: usize,
    reader: Reader,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Root,
    Sink,
    Launcher,
    Part { part: usize, q: usize },
}

/// Launches the automaton of a principal sentence or of its dual,
/// depending on the atom standing for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Launch {
    atom: usize,
    pos: usize,
    neg: usize,
}

/// Universal co-Büchi tree automaton with directions `Act^Ag` (first agent
/// most significant) whose labels are tuples of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uct {
    atoms: Vec<String>,
    num_ap: usize,
    agents: Vec<String>,
    num_actions: usize,
    directions: usize,
    components: Vec<Component>,
    kinds: Vec<Kind>,
    parts: Vec<Part>,
    initial: usize,
    top: Option<Formula>,
    top_launches: Vec<Launch>,
    nested_launches: Vec<Launch>,
    principals: Vec<Formula>,
}

fn directions(agents: &[String], num_actions: usize) -> Result<usize, AutomataError> {
    num_actions
        .checked_pow(agents.len() as u32)
        .filter(|&d| d >= 1)
        .ok_or(AutomataError::TooLarge("direction set".into()))
}

fn decision_index(num_actions: usize, actions: impl Iterator<Item = usize>) -> usize {
    actions.fold(0, |acc, a| acc * num_actions + a)
}

fn sentence_dirs(
    prefix: &QuantPrefix,
    binding: &BindPrefix,
    agents: &[String],
    num_actions: usize,
) -> Result<Vec<Vec<usize>>, AutomataError> {
    let count = count_sdf(prefix, num_actions);
    if count > BigUint::from(MAX_SDF_COMPONENT) {
        return Err(AutomataError::TooLarge(format!(
            "{count} dependence functions for {prefix}"
        )));
    }
    let positions: Vec<usize> = agents
        .iter()
        .map(|a| {
            let x = binding
                .var_of(a)
                .ok_or_else(|| AutomataError::Shape(format!("agent `{a}` is not bound")))?;
            prefix
                .position(x)
                .ok_or_else(|| AutomataError::Shape(format!("variable `{x}` is not quantified")))
        })
        .collect::<Result<_, _>>()?;
    let n = prefix.universal().len();
    let total = num_actions.pow(n as u32);
    Ok(enumerate_sdf(prefix, num_actions)
        .map(|theta| {
            let mut dirs: Vec<usize> = (0..total)
                .map(|mut i| {
                    let mut v = vec![0; n];
                    for slot in v.iter_mut().rev() {
                        *slot = i % num_actions;
                        i /= num_actions;
                    }
                    let full = theta.apply(&v);
                    decision_index(num_actions, positions.iter().map(|&p| full[p]))
                })
                .collect();
            dirs.sort_unstable();
            dirs.dedup();
            dirs
        })
        .collect())
}

fn check_atoms(atoms: &[String]) -> Result<(), AutomataError> {
    if atoms.len() > MAX_ATOMS {
        Err(AutomataError::TooManyAtoms(atoms.len()))
    } else {
        Ok(())
    }
}

fn atom_components(atoms: &[String]) -> Vec<Component> {
    atoms
        .iter()
        .map(|a| Component {
            kind: ComponentKind::Atom(a.clone()),
            size: 2,
        })
        .collect()
}

impl Uct {
    fn single(
        atoms: Vec<String>,
        agents: &[String],
        num_actions: usize,
        components: Vec<Component>,
        ucw: Ucw,
        reader: Reader,
        principals: Vec<Formula>,
    ) -> Result<Uct, AutomataError> {
        let directions = directions(agents, num_actions)?;
        let kinds: Vec<Kind> = (0..ucw.num_states()).map(|q| Kind::Part { part: 0, q }).collect();
        let initial = ucw.initial()[0];
        Ok(Uct {
            num_ap: atoms.len(),
            atoms,
            agents: agents.to_vec(),
            num_actions,
            directions,
            components,
            kinds,
            parts: vec![Part { ucw, offset: 0, reader }],
            initial,
            top: None,
            top_launches: vec![],
            nested_launches: vec![],
            principals,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Number of atoms that belong to the structure (the rest stand for
    /// principal sentences).
    pub fn num_ap(&self) -> usize {
        self.num_ap
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_directions(&self) -> usize {
        self.directions
    }

    pub fn num_states(&self) -> usize {
        self.kinds.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Principal sentences, indexed as in [`ComponentKind::Sdf`].
    pub fn principals(&self) -> &[Formula] {
        &self.principals
    }

    pub fn is_rejecting(&self, q: usize) -> bool {
        match self.kinds[q] {
            Kind::Sink => true,
            Kind::Root | Kind::Launcher => false,
            Kind::Part { part, q } => self.parts[part].ucw.is_rejecting(q),
        }
    }

    pub fn acceptance(&self) -> AcceptanceParity {
        AcceptanceParity::co_buchi(
            (0..self.num_states()).filter(|&q| self.is_rejecting(q)),
            self.num_states(),
        )
    }

    /// Number of distinct labels.
    pub fn alphabet_size(&self) -> BigUint {
        self.components.iter().map(|c| BigUint::from(c.size)).product()
    }

    pub fn state_name(&self, q: usize) -> String {
        match self.kinds[q] {
            Kind::Root => "root".into(),
            Kind::Sink => "sink".into(),
            Kind::Launcher => "launch".into(),
            Kind::Part { part, q } => format!("{part}:{}", self.parts[part].ucw.state_name(q)),
        }
    }

    /// Transition on a label whose unknown components are `None`.
    pub fn delta(&self, q: usize, label: &[Option<usize>]) -> Step {
        let mut moves = vec![];
        let step = match self.kinds[q] {
            Kind::Sink => {
                moves.push((0, q));
                None
            }
            Kind::Root => self.root_moves(label, &mut moves),
            Kind::Launcher => self.launcher_moves(label, &mut moves),
            Kind::Part { part, q } => self.part_moves(part, q, label, &mut moves),
        };
        match step {
            Some(c) => Step::Need(c),
            None => {
                moves.sort_unstable();
                moves.dedup();
                Step::Moves(moves)
            }
        }
    }

    /// Transition formula on a complete label.
    pub fn delta_formula(&self, q: usize, label: &[usize]) -> PosBool {
        let full: Vec<Option<usize>> = label.iter().copied().map(Some).collect();
        match self.delta(q, &full) {
            Step::Moves(m) => PosBool::all(&m),
            Step::Need(c) => panic!("label misses component {c}"),
        }
    }

    fn root_moves(&self, label: &[Option<usize>], moves: &mut Vec<(usize, usize)>) -> Option<usize> {
        if let Some(top) = &self.top {
            for a in top.atoms() {
                let i = self.atoms.iter().position(|x| *x == a).expect("top atom indexed");
                if label[i].is_none() {
                    return Some(i);
                }
            }
            if !eval_bool(top, &self.atoms, label) {
                moves.push((0, self.sink()));
                return None;
            }
        }
        for l in &self.top_launches {
            if let Some(c) = self.launch(l, label, moves) {
                return Some(c);
            }
        }
        if !self.nested_launches.is_empty() {
            return self.launcher_moves(label, moves);
        }
        None
    }

    fn sink(&self) -> usize {
        self.kinds
            .iter()
            .position(|k| *k == Kind::Sink)
            .expect("full automaton has a sink")
    }

    fn launcher_moves(&self, label: &[Option<usize>], moves: &mut Vec<(usize, usize)>) -> Option<usize> {
        for l in &self.nested_launches {
            if let Some(c) = self.launch(l, label, moves) {
                return Some(c);
            }
        }
        let me = self
            .kinds
            .iter()
            .position(|k| *k == Kind::Launcher)
            .expect("launcher present");
        moves.extend((0..self.directions).map(|d| (d, me)));
        None
    }

    fn launch(&self, l: &Launch, label: &[Option<usize>], moves: &mut Vec<(usize, usize)>) -> Option<usize> {
        let Some(bit) = label[l.atom] else {
            return Some(l.atom);
        };
        let part = if bit == 1 { l.pos } else { l.neg };
        for &q in self.parts[part].ucw.initial() {
            if let Some(c) = self.part_moves(part, q, label, moves) {
                return Some(c);
            }
        }
        None
    }

    /// Moves of a launched word automaton; `None` on success, or the
    /// component still needed.
    fn part_moves(
        &self,
        part: usize,
        q: usize,
        label: &[Option<usize>],
        moves: &mut Vec<(usize, usize)>,
    ) -> Option<usize> {
        let p = &self.parts[part];
        let relevant = p.ucw.relevant(q);
        let mut letter = 0u64;
        for i in 0..self.atoms.len() {
            if relevant >> i & 1 == 1 {
                match label[i] {
                    None => return Some(i),
                    Some(v) => letter |= (v as u64 & 1) << i,
                }
            }
        }
        let succ = p.ucw.delta(q, letter);
        if succ.is_empty() {
            return None;
        }
        let dirs: Vec<usize> = match &p.reader {
            Reader::Goal { per_agent } => {
                let mut acts = Vec::with_capacity(per_agent.len());
                for &c in per_agent {
                    match label[c] {
                        None => return Some(c),
                        Some(v) => acts.push(v),
                    }
                }
                vec![decision_index(self.num_actions, acts.into_iter())]
            }
            Reader::Sentence { component, dirs } => match label[*component] {
                None => return Some(*component),
                Some(theta) => dirs[theta].clone(),
            },
        };
        for d in dirs {
            for &t in &succ {
                moves.push((d, p.offset + t));
            }
        }
        None
    }

    /// Edges shown in drawings: `(from, to, text)`, independent of labels.
    pub fn structural_edges(&self) -> Vec<(usize, usize, String)> {
        let mut out = vec![];
        for (q, kind) in self.kinds.iter().enumerate() {
            match *kind {
                Kind::Sink => out.push((q, q, "any".to_string())),
                Kind::Root => {
                    if self.top.is_some() {
                        out.push((q, self.sink(), "boolean check fails".to_string()));
                    }
                    for l in &self.top_launches {
                        self.launch_edges(q, l, &mut out);
                    }
                    if let Some(me) = self.kinds.iter().position(|k| *k == Kind::Launcher) {
                        if !self.nested_launches.is_empty() {
                            out.push((q, me, "every direction".to_string()));
                        }
                    }
                }
                Kind::Launcher => {
                    for l in &self.nested_launches {
                        self.launch_edges(q, l, &mut out);
                    }
                    out.push((q, q, "every direction".to_string()));
                }
                Kind::Part { part, q: uq } => {
                    let p = &self.parts[part];
                    for e in p.ucw.edges(uq) {
                        out.push((q, p.offset + e.to, super::ltl::guard_text(e, &self.atoms)));
                    }
                }
            }
        }
        out
    }

    fn launch_edges(&self, from: usize, l: &Launch, out: &mut Vec<(usize, usize, String)>) {
        for (part, text) in [
            (l.pos, self.atoms[l.atom].to_string()),
            (l.neg, format!("!{}", self.atoms[l.atom])),
        ] {
            for &q in self.parts[part].ucw.initial() {
                out.push((from, self.parts[part].offset + q, format!("launch on {text}")));
            }
        }
    }
}

fn eval_bool(f: &Formula, atoms: &[String], label: &[Option<usize>]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => {
            let i = atoms.iter().position(|x| x == a).expect("atom indexed");
            label[i] == Some(1)
        }
        Formula::Not(g) => !eval_bool(g, atoms, label),
        Formula::And(l, r) => eval_bool(l, atoms, label) && eval_bool(r, atoms, label),
        Formula::Or(l, r) => eval_bool(l, atoms, label) || eval_bool(r, atoms, label),
        _ => unreachable!("top level is Boolean"),
    }
}

/// Goal automaton of `♭ψ`: runs the UCW of `ψ` along the branch chosen by
/// the actions the label assigns to the bound variables.
pub fn goal_automaton(
    goal: &Formula,
    agents: &[String],
    num_actions: usize,
    atoms: &[String],
) -> Result<Uct, AutomataError> {
    check_atoms(atoms)?;
    let (chain, body) = BindPrefix::split(goal);
    let binding = BindPrefix::new(chain, agents).map_err(|e| AutomataError::Shape(e.to_string()))?;
    let ucw = ltl_to_ucw(body, atoms)?;
    let vars: Vec<String> = binding.variables().into_iter().collect();
    let mut components = atom_components(atoms);
    let base = components.len();
    components.extend(vars.iter().map(|x| Component {
        kind: ComponentKind::Var(x.clone()),
        size: num_actions,
    }));
    let per_agent = agents
        .iter()
        .map(|a| {
            let x = binding.var_of(a).expect("complete binding");
            base + vars.iter().position(|v| v == x).expect("listed")
        })
        .collect();
    Uct::single(
        atoms.to_vec(),
        agents,
        num_actions,
        components,
        ucw,
        Reader::Goal { per_agent },
        vec![],
    )
}

/// Sentence automaton of a one-goal sentence `℘♭ψ` with LTL `ψ`: reads a
/// dependence function and runs the goal automaton for every universal
/// valuation at once.
pub fn sentence_automaton(
    sentence: &Formula,
    agents: &[String],
    num_actions: usize,
    atoms: &[String],
) -> Result<Uct, AutomataError> {
    check_atoms(atoms)?;
    let g = one_goal(sentence, agents)
        .ok_or_else(|| AutomataError::Shape(format!("`{sentence}` is not a one-goal sentence")))?;
    let vars: BTreeSet<String> = g.prefix.variables().map(String::from).collect();
    if vars != g.binding.variables() {
        return Err(AutomataError::Shape(
            "prefix and binding use different variables".into(),
        ));
    }
    let ucw = ltl_to_ucw(&g.body, atoms)?;
    let dirs = sentence_dirs(&g.prefix, &g.binding, agents, num_actions)?;
    let mut components = atom_components(atoms);
    let component = components.len();
    components.push(Component {
        kind: ComponentKind::Sdf {
            principal: 0,
            dual: false,
        },
        size: dirs.len(),
    });
    Uct::single(
        atoms.to_vec(),
        agents,
        num_actions,
        components,
        ucw,
        Reader::Sentence { component, dirs },
        vec![sentence.clone()],
    )
}

/// Name of the atom standing for principal sentence `i`.
pub fn principal_atom(i: usize) -> String {
    format!("@{i}")
}

struct Registry {
    agents: Vec<String>,
    entries: Vec<(OneGoal, bool)>,
    index: BTreeMap<String, usize>,
}

impl Registry {
    /// Replaces principal subsentences by atoms, innermost first.
    fn abstract_formula(&mut self, f: &Formula, nested: bool) -> Result<Formula, AutomataError> {
        Ok(match f {
            Formula::Exists(..) | Formula::Forall(..) => {
                let g = one_goal(f, &self.agents)
                    .ok_or_else(|| AutomataError::Shape(format!("`{f}` is not a one-goal sentence")))?;
                let body = self.abstract_formula(&g.body, true)?;
                let g = OneGoal { body, ..g };
                let key = g.to_formula().to_string();
                let i = match self.index.get(&key) {
                    Some(&i) => i,
                    None => {
                        let i = self.entries.len();
                        self.entries.push((g, false));
                        self.index.insert(key, i);
                        i
                    }
                };
                self.entries[i].1 |= nested;
                Formula::atom(principal_atom(i))
            }
            Formula::Not(g) => Formula::not(self.abstract_formula(g, nested)?),
            Formula::And(l, r) => Formula::and(self.abstract_formula(l, nested)?, self.abstract_formula(r, nested)?),
            Formula::Or(l, r) => Formula::or(self.abstract_formula(l, nested)?, self.abstract_formula(r, nested)?),
            Formula::Next(g) => Formula::next(self.abstract_formula(g, nested)?),
            Formula::Until(l, r) => {
                Formula::until(self.abstract_formula(l, nested)?, self.abstract_formula(r, nested)?)
            }
            Formula::Release(l, r) => {
                Formula::release(self.abstract_formula(l, nested)?, self.abstract_formula(r, nested)?)
            }
            Formula::Bind(..) => return Err(AutomataError::Shape(format!("binding outside a goal in `{f}`"))),
            Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        })
    }
}

fn is_boolean(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Not(g) => is_boolean(g),
        Formula::And(l, r) | Formula::Or(l, r) => is_boolean(l) && is_boolean(r),
        _ => false,
    }
}

/// The automaton of an SL[1G] sentence over actions `0..num_actions`.
///
/// Every principal subsentence gets an atom. The root checks the Boolean
/// structure of the sentence over these atoms and launches, for each
/// principal sentence, its sentence automaton or the one of its dual
/// according to the atom. Sentences nested inside goals are launched the
/// same way at every node.
pub fn assemble_full_automaton(
    phi: &Formula,
    agents: &[String],
    num_actions: usize,
    ap: &[String],
) -> Result<Uct, AutomataError> {
    let class = classify(phi, agents).map_err(|e| AutomataError::Shape(e.to_string()))?;
    if class.fragment != Fragment::Sl1g {
        return Err(AutomataError::Fragment(class.fragment));
    }
    let mut reg = Registry {
        agents: agents.to_vec(),
        entries: vec![],
        index: BTreeMap::new(),
    };
    let top = reg.abstract_formula(&class.normalized, false)?;
    if !is_boolean(&top) {
        return Err(AutomataError::Shape("temporal operator outside every goal".into()));
    }
    let mut atoms: Vec<String> = ap.to_vec();
    for a in phi.atoms() {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    let num_ap = atoms.len();
    atoms.extend((0..reg.entries.len()).map(principal_atom));
    check_atoms(&atoms)?;
    let directions = directions(agents, num_actions)?;

    let mut components = atom_components(&atoms);
    let mut kinds = vec![Kind::Root, Kind::Sink, Kind::Launcher];
    let mut parts = vec![];
    let mut launches = vec![];
    for (i, (g, _)) in reg.entries.iter().enumerate() {
        let mut ids = [0; 2];
        for (slot, dual) in [false, true].into_iter().enumerate() {
            let (prefix, body) = if dual {
                (g.prefix.dual(), Formula::not(g.body.clone()))
            } else {
                (g.prefix.clone(), g.body.clone())
            };
            let ucw = ltl_to_ucw(&body, &atoms)?;
            let dirs = sentence_dirs(&prefix, &g.binding, agents, num_actions)?;
            let component = components.len();
            components.push(Component {
                kind: ComponentKind::Sdf { principal: i, dual },
                size: dirs.len(),
            });
            let offset = kinds.len();
            let part = parts.len();
            kinds.extend((0..ucw.num_states()).map(|q| Kind::Part { part, q }));
            parts.push(Part {
                ucw,
                offset,
                reader: Reader::Sentence { component, dirs },
            });
            ids[slot] = part;
        }
        launches.push(Launch {
            atom: num_ap + i,
            pos: ids[0],
            neg: ids[1],
        });
    }
    let top_atoms = top.atoms();
    let top_launches = launches
        .iter()
        .enumerate()
        .filter(|(i, _)| top_atoms.contains(&principal_atom(*i)))
        .map(|(_, l)| *l)
        .collect();
    let nested_launches = launches
        .iter()
        .zip(&reg.entries)
        .filter(|(_, (_, nested))| *nested)
        .map(|(l, _)| *l)
        .collect();
    let principals = reg.entries.iter().map(|(g, _)| g.to_formula()).collect();
    Ok(Uct {
        atoms,
        num_ap,
        agents: agents.to_vec(),
        num_actions,
        directions,
        components,
        kinds,
        parts,
        initial: 0,
        top: Some(top),
        top_launches,
        nested_launches,
        principals,
    })
}

impl fmt::Display for Uct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "states: {}, directions: {}, atoms: {}",
            self.num_states(),
            self.directions,
            self.atoms.join(" ")
        )?;
        for (i, p) in self.principals.iter().enumerate() {
            writeln!(f, "{} = {p}", principal_atom(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Decl};

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sentence_alphabet() {
        let agents = names(&["a", "b"]);
        let f = parse("[[x]]<<y>>(a,x)(b,y) X p", &Decl::with_agents(&agents)).unwrap();
        let u = sentence_automaton(&f, &agents, 2, &names(&["p"])).unwrap();
        // 2^(2^1) functions times 2 labels
        assert_eq!(u.alphabet_size(), BigUint::from(8u32));
    }

    #[test]
    fn sentence_reads_every_universal_valuation() {
        let agents = names(&["a", "b"]);
        let f = parse("[[x]]<<y>>(a,x)(b,y) X p", &Decl::with_agents(&agents)).unwrap();
        let u = sentence_automaton(&f, &agents, 2, &names(&["p"])).unwrap();
        // θ number 1 copies x into y: directions (0,0) and (1,1)
        let label = [Some(0), Some(1)];
        match u.delta(u.initial(), &label) {
            Step::Moves(m) => {
                let dirs: BTreeSet<usize> = m.iter().map(|&(d, _)| d).collect();
                assert_eq!(dirs, BTreeSet::from([0, 3]));
            }
            s => panic!("unexpected {s:?}"),
        }
    }

    #[test]
    fn full_automaton_needs_principal_atom() {
        let agents = names(&["a"]);
        let f = parse("<<x>>(a,x) X p", &Decl::with_agents(&agents)).unwrap();
        let u = assemble_full_automaton(&f, &agents, 1, &[]).unwrap();
        assert_eq!(u.atoms(), ["p", "@0"]);
        assert_eq!(u.delta(u.initial(), &[None, None, None, None]), Step::Need(1));
        // with @0 false the root check fails
        match u.delta(u.initial(), &[None, Some(0), None, None]) {
            Step::Moves(m) => assert!(u.is_rejecting(m[0].1)),
            s => panic!("unexpected {s:?}"),
        }
    }

    #[test]
    fn fragment_gate() {
        let agents = names(&["a", "b"]);
        let f = parse(
            "<<x>>[[y]]((a,x)(b,y) X p & (a,y)(b,x) X q)",
            &Decl::with_agents(&agents),
        )
        .unwrap();
        assert_eq!(
            assemble_full_automaton(&f, &agents, 2, &[]),
            Err(AutomataError::Fragment(Fragment::Slbg))
        );
    }

    #[test]
    fn co_buchi_parity() {
        let acc = AcceptanceParity::co_buchi([1], 3);
        assert_eq!(acc.index(), 2);
        assert!(acc.accepts(&BTreeSet::from([0, 2])));
        assert!(!acc.accepts(&BTreeSet::from([1, 2])));
    }
}
