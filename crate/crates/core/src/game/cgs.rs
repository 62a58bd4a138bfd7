use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// Most atoms a structure may carry; labels are stored as bit sets.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CgsError {
    #[error("{what} must not be empty")]
    Empty { what: &'static str },
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
    #[error("too many atoms ({0}, at most {MAX_ATOMS})")]
    TooManyAtoms(usize),
    #[error("no transition for state `{state}` under decision {decision}")]
    Missing { state: String, decision: String },
    #[error("transition for state `{state}` under {decision} listed twice{detail}")]
    DuplicateTransition {
        state: String,
        decision: String,
        detail: String,
    },
    #[error("decision for state `{state}` does not assign agent `{agent}`")]
    PartialDecision { state: String, agent: String },
    #[error("malformed document: {0}")]
    Document(String),
}

/// A finite concurrent game structure.
///
/// States, agents, actions and atoms are indexed by position. A decision is
/// one action per agent, in agent order; decisions are numbered in mixed
/// radix with the first agent most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cgs {
    atoms: Vec<String>,
    agents: Vec<String>,
    actions: Vec<String>,
    states: Vec<String>,
    initial: usize,
    labels: Vec<u64>,
    transitions: Vec<usize>,
    notes: Vec<String>,
}

fn check_unique(what: &'static str, names: &[String]) -> Result<(), CgsError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(CgsError::Duplicate { what, name: n.clone() });
        }
    }
    Ok(())
}

impl Cgs {
    /// Builds a structure from a total transition function over decision
    /// vectors.
    pub fn from_fn(
        atoms: Vec<String>,
        agents: Vec<String>,
        actions: Vec<String>,
        states: Vec<String>,
        initial: usize,
        labels: Vec<u64>,
        mut tau: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Cgs, CgsError> {
        check_unique("atom", &atoms)?;
        check_unique("agent", &agents)?;
        check_unique("action", &actions)?;
        check_unique("state", &states)?;
        if atoms.len() > MAX_ATOMS {
            return Err(CgsError::TooManyAtoms(atoms.len()));
        }
        if agents.is_empty() {
            return Err(CgsError::Empty { what: "agent set" });
        }
        if actions.is_empty() {
            return Err(CgsError::Empty { what: "action set" });
        }
        if states.is_empty() {
            return Err(CgsError::Empty { what: "state set" });
        }
        if initial >= states.len() {
            return Err(CgsError::Unknown {
                what: "initial state",
                name: initial.to_string(),
            });
        }
        if labels.len() != states.len() {
            return Err(CgsError::Document("one label per state required".into()));
        }
        let mask = if atoms.len() == 64 {
            u64::MAX
        } else {
            (1u64 << atoms.len()) - 1
        };
        if labels.iter().any(|l| l & !mask != 0) {
            return Err(CgsError::Document("label mentions an undeclared atom".into()));
        }
        let mut g = Cgs {
            atoms,
            agents,
            actions,
            states,
            initial,
            labels,
            transitions: Vec::new(),
            notes: Vec::new(),
        };
        let nd = g.num_decisions();
        let mut table = Vec::with_capacity(g.states.len() * nd);
        for s in 0..g.states.len() {
            for d in 0..nd {
                let t = tau(s, &g.decision(d));
                if t >= g.states.len() {
                    return Err(CgsError::Unknown {
                        what: "target state",
                        name: t.to_string(),
                    });
                }
                table.push(t);
            }
        }
        g.transitions = table;
        Ok(g)
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Cgs {
        self.notes = notes;
        self
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_decisions(&self) -> usize {
        self.actions.len().pow(self.agents.len() as u32)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|s| s == name)
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|s| s == name)
    }

    /// Label of `s` as a bit set over [`Self::atoms`].
    pub fn label(&self, s: usize) -> u64 {
        self.labels[s]
    }

    pub fn label_names(&self, s: usize) -> Vec<String> {
        (0..self.atoms.len())
            .filter(|i| self.labels[s] >> i & 1 == 1)
            .map(|i| self.atoms[i].clone())
            .collect()
    }

    pub fn holds(&self, s: usize, atom: &str) -> bool {
        self.atom_index(atom).is_some_and(|i| self.labels[s] >> i & 1 == 1)
    }

    /// Decision vector of decision number `d`.
    pub fn decision(&self, mut d: usize) -> Vec<usize> {
        let n = self.actions.len();
        let mut out = vec![0; self.agents.len()];
        for slot in out.iter_mut().rev() {
            *slot = d % n;
            d /= n;
        }
        out
    }

    pub fn decision_index(&self, d: &[usize]) -> usize {
        let n = self.actions.len();
        d.iter().fold(0, |acc, &a| acc * n + a)
    }

    pub fn step(&self, s: usize, d: &[usize]) -> usize {
        self.step_index(s, self.decision_index(d))
    }

    pub fn step_index(&self, s: usize, d: usize) -> usize {
        self.transitions[s * self.num_decisions() + d]
    }

    /// Distinct successors of `s`, sorted.
    pub fn successors(&self, s: usize) -> Vec<usize> {
        let nd = self.num_decisions();
        let set: BTreeSet<usize> = self.transitions[s * nd..(s + 1) * nd].iter().copied().collect();
        set.into_iter().collect()
    }

    fn decision_text(&self, d: &[usize]) -> String {
        let parts: Vec<String> = self
            .agents
            .iter()
            .zip(d)
            .map(|(a, &x)| format!("{a}:{}", self.actions[x]))
            .collect();
        format!("({})", parts.join(","))
    }
}

/// One transition row of a document.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TransitionRow {
    pub from: String,
    pub decision: DecisionSpec,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum DecisionSpec {
    /// `"*"`: every decision not listed explicitly.
    Default(String),
    Explicit(BTreeMap<String, String>),
}

/// The on-disk form of a structure.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CgsDocument {
    pub ap: Vec<String>,
    pub agents: Vec<String>,
    pub actions: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub label: BTreeMap<String, Vec<String>>,
    pub transitions: Vec<TransitionRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CgsDocument {
    pub fn into_cgs(self) -> Result<Cgs, CgsError> {
        let index = |what: &'static str, list: &[String], name: &str| {
            list.iter().position(|x| x == name).ok_or(CgsError::Unknown {
                what,
                name: name.to_string(),
            })
        };
        check_unique("atom", &self.ap)?;
        check_unique("agent", &self.agents)?;
        check_unique("action", &self.actions)?;
        check_unique("state", &self.states)?;
        if self.ap.len() > MAX_ATOMS {
            return Err(CgsError::TooManyAtoms(self.ap.len()));
        }
        let initial = index("state", &self.states, &self.initial)?;
        let mut labels = vec![0u64; self.states.len()];
        for (s, atoms) in &self.label {
            let si = index("state", &self.states, s)?;
            for p in atoms {
                labels[si] |= 1 << index("atom", &self.ap, p)?;
            }
        }
        if self.agents.is_empty() || self.actions.is_empty() {
            return Err(CgsError::Empty {
                what: "agent or action set",
            });
        }
        let n_act = self.actions.len();
        let nd = n_act.pow(self.agents.len() as u32);
        let mut defaults: Vec<Option<usize>> = vec![None; self.states.len()];
        let mut explicit: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for row in &self.transitions {
            let from = index("state", &self.states, &row.from)?;
            let to = index("state", &self.states, &row.to)?;
            match &row.decision {
                DecisionSpec::Default(star) => {
                    if star != "*" {
                        return Err(CgsError::Document(format!(
                            "decision must be a map or \"*\", found \"{star}\""
                        )));
                    }
                    if let Some(prev) = defaults[from] {
                        return Err(CgsError::DuplicateTransition {
                            state: row.from.clone(),
                            decision: "*".into(),
                            detail: conflict(prev, to, &self.states),
                        });
                    }
                    defaults[from] = Some(to);
                }
                DecisionSpec::Explicit(map) => {
                    for a in map.keys() {
                        index("agent", &self.agents, a)?;
                    }
                    let mut d = 0usize;
                    for a in &self.agents {
                        let act = map.get(a).ok_or_else(|| CgsError::PartialDecision {
                            state: row.from.clone(),
                            agent: a.clone(),
                        })?;
                        d = d * n_act + index("action", &self.actions, act)?;
                    }
                    if let Some(prev) = explicit.insert((from, d), to) {
                        let text: Vec<String> = map.iter().map(|(a, x)| format!("{a}:{x}")).collect();
                        return Err(CgsError::DuplicateTransition {
                            state: row.from.clone(),
                            decision: format!("({})", text.join(",")),
                            detail: conflict(prev, to, &self.states),
                        });
                    }
                }
            }
        }
        let states = self.states.clone();
        let probe = Cgs {
            atoms: vec![],
            agents: self.agents.clone(),
            actions: self.actions.clone(),
            states: vec![],
            initial: 0,
            labels: vec![],
            transitions: vec![],
            notes: vec![],
        };
        let mut table = Vec::with_capacity(states.len() * nd);
        for (s, name) in states.iter().enumerate() {
            for d in 0..nd {
                match explicit.get(&(s, d)).copied().or(defaults[s]) {
                    Some(t) => table.push(t),
                    None => {
                        return Err(CgsError::Missing {
                            state: name.clone(),
                            decision: probe.decision_text(&probe.decision(d)),
                        })
                    }
                }
            }
        }
        Cgs::from_fn(
            self.ap,
            self.agents,
            self.actions,
            self.states,
            initial,
            labels,
            |s, d| {
                let n = n_act;
                table[s * nd + d.iter().fold(0, |acc, &a| acc * n + a)]
            },
        )
        .map(|g| g.with_notes(self.notes))
    }

    /// Canonical document: per state, a `"*"` row for the most frequent
    /// target (lowest index on ties) followed by the exceptions in decision
    /// order.
    pub fn from_cgs(g: &Cgs) -> CgsDocument {
        let nd = g.num_decisions();
        let mut transitions = Vec::new();
        for s in 0..g.num_states() {
            let row = &g.transitions[s * nd..(s + 1) * nd];
            let mut counts = vec![0usize; g.num_states()];
            for &t in row {
                counts[t] += 1;
            }
            let best = (0..g.num_states())
                .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
                .unwrap();
            transitions.push(TransitionRow {
                from: g.states[s].clone(),
                decision: DecisionSpec::Default("*".into()),
                to: g.states[best].clone(),
            });
            for (d, &t) in row.iter().enumerate() {
                if t != best {
                    let map = g
                        .agents
                        .iter()
                        .zip(g.decision(d))
                        .map(|(a, x)| (a.clone(), g.actions[x].clone()))
                        .collect();
                    transitions.push(TransitionRow {
                        from: g.states[s].clone(),
                        decision: DecisionSpec::Explicit(map),
                        to: g.states[t].clone(),
                    });
                }
            }
        }
        CgsDocument {
            ap: g.atoms.clone(),
            agents: g.agents.clone(),
            actions: g.actions.clone(),
            states: g.states.clone(),
            initial: g.states[g.initial].clone(),
            label: (0..g.num_states())
                .map(|s| (g.states[s].clone(), g.label_names(s)))
                .collect(),
            transitions,
            notes: g.notes.clone(),
        }
    }
}

fn conflict(prev: usize, to: usize, states: &[String]) -> String {
    if prev == to {
        String::new()
    } else {
        format!(" with conflicting targets `{}` and `{}`", states[prev], states[to])
    }
}

/// Parses and validates a structure document.
pub fn load_cgs(text: &str) -> Result<Cgs, CgsError> {
    let doc: CgsDocument = serde_json::from_str(text).map_err(|e| CgsError::Document(e.to_string()))?;
    doc.into_cgs()
}

/// Canonical text of a structure.
pub fn save_cgs(g: &Cgs) -> String {
    let mut s = serde_json::to_string_pretty(&CgsDocument::from_cgs(g)).expect("serializable");
    s.push('\n');
    s
}
