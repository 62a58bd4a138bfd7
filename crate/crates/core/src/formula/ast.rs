use std::fmt;

/// Abstract syntax of Strategy Logic.
///
/// `F` and `G` do not appear here: the parser desugars them into
/// `true U φ` and `false R φ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    /// `<<x>> φ`
    Exists(String, Box<Formula>),
    /// `[[x]] φ`
    Forall(String, Box<Formula>),
    /// `(a,x) φ`: agent `a` follows the strategy held by variable `x`.
    Bind(String, String, Box<Formula>),
}

/// Polarity of a quantifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    /// `l -> r`, expanded to `!l | r`.
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::or(Formula::not(l), r)
    }

    /// `l <-> r`, expanded to `(!l | r) & (!r | l)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::until(Formula::True, f)
    }

    pub fn always(f: Formula) -> Formula {
        Formula::release(Formula::False, f)
    }

    pub fn exists(var: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(f))
    }

    pub fn forall(var: impl Into<String>, f: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(f))
    }

    pub fn quant(q: Quant, var: impl Into<String>, f: Formula) -> Formula {
        match q {
            Quant::Exists => Formula::exists(var, f),
            Quant::Forall => Formula::forall(var, f),
        }
    }

    pub fn bind(agent: impl Into<String>, var: impl Into<String>, f: Formula) -> Formula {
        Formula::Bind(agent.into(), var.into(), Box::new(f))
    }

    /// Conjunction of all items; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of all items; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Immediate children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Exists(_, f)
            | Formula::Forall(_, f)
            | Formula::Bind(_, _, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Until(l, r) | Formula::Release(l, r) => vec![l, r],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Exists(..) | Formula::Forall(..))
    }

    /// True when no quantifier or binding occurs.
    pub fn is_ltl(&self) -> bool {
        match self {
            Formula::Exists(..) | Formula::Forall(..) | Formula::Bind(..) => false,
            f => f.children().into_iter().all(Formula::is_ltl),
        }
    }

    /// True when `U` and `R` do not occur.
    pub fn is_next_only(&self) -> bool {
        match self {
            Formula::Until(..) | Formula::Release(..) => false,
            f => f.children().into_iter().all(Formula::is_next_only),
        }
    }

    /// Atoms occurring in the formula, sorted.
    pub fn atoms(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut std::collections::BTreeSet<String>) {
        if let Formula::Atom(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Variables occurring in quantifiers or bindings, sorted.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Formula::Exists(x, _) | Formula::Forall(x, _) | Formula::Bind(_, x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::render(self))
    }
}
