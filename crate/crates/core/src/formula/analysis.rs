use std::collections::BTreeSet;

use super::ast::Formula;

/// Free agents and free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeSet {
    pub agents: BTreeSet<String>,
    pub vars: BTreeSet<String>,
}

impl FreeSet {
    pub fn is_empty(&self) -> bool {
        self.agents.is_empty() && self.vars.is_empty()
    }

    fn union(mut self, other: FreeSet) -> FreeSet {
        self.agents.extend(other.agents);
        self.vars.extend(other.vars);
        self
    }

    fn all_agents(agents: &[String]) -> FreeSet {
        FreeSet {
            agents: agents.iter().cloned().collect(),
            vars: BTreeSet::new(),
        }
    }

    /// Agents and variables in one sorted list, agents first.
    pub fn names(&self) -> Vec<String> {
        self.agents.iter().chain(self.vars.iter()).cloned().collect()
    }
}

/// Free agents and variables, computed over the agent set `agents`.
pub fn free(f: &Formula, agents: &[String]) -> FreeSet {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => FreeSet::default(),
        Formula::Not(g) => free(g, agents),
        Formula::And(l, r) | Formula::Or(l, r) => free(l, agents).union(free(r, agents)),
        Formula::Next(g) => FreeSet::all_agents(agents).union(free(g, agents)),
        Formula::Until(l, r) | Formula::Release(l, r) => FreeSet::all_agents(agents)
            .union(free(l, agents))
            .union(free(r, agents)),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let mut s = free(g, agents);
            s.vars.remove(x);
            s
        }
        Formula::Bind(a, x, g) => {
            let mut s = free(g, agents);
            if s.agents.remove(a) {
                s.vars.insert(x.clone());
            }
            s
        }
    }
}

/// Agent- and variable-closedness of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Closure {
    pub agent_closed: bool,
    pub variable_closed: bool,
}

impl Closure {
    pub fn is_sentence(self) -> bool {
        self.agent_closed && self.variable_closed
    }
}

pub fn closure(f: &Formula, agents: &[String]) -> Closure {
    let s = free(f, agents);
    Closure {
        agent_closed: s.agents.is_empty(),
        variable_closed: s.vars.is_empty(),
    }
}

pub fn is_sentence(f: &Formula, agents: &[String]) -> bool {
    free(f, agents).is_empty()
}

/// All subformulas, the formula itself included.
pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if out.insert(g.clone()) {
            stack.extend(g.children());
        }
    }
    out
}
