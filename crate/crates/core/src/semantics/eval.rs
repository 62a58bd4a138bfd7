use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::Formula;
use crate::game::{Assignment, Cgs, HorizonStrategy, Place, TrackTree};

/// Nesting depth of `X`, or unbounded when `U`/`R` occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Depth {
    Finite(usize),
    Omega,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(n) => write!(f, "{n}"),
            Depth::Omega => f.write_str("omega"),
        }
    }
}

pub fn temporal_depth(f: &Formula) -> Depth {
    match f {
        Formula::Until(..) | Formula::Release(..) => Depth::Omega,
        Formula::Next(g) => match temporal_depth(g) {
            Depth::Finite(n) => Depth::Finite(n + 1),
            Depth::Omega => Depth::Omega,
        },
        _ => f
            .children()
            .into_iter()
            .map(temporal_depth)
            .max()
            .unwrap_or(Depth::Finite(0)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("formula uses U or R; only X-bounded formulas can be evaluated exactly")]
    Unbounded,
    #[error("{0} is not assigned")]
    Unbound(Place),
    #[error("strategy of agent `{0}` is not defined this far (horizon too small)")]
    HorizonTooSmall(String),
    #[error("atom `{0}` is not part of the model")]
    UnknownAtom(String),
    #[error("state {0} out of range")]
    State(usize),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("not a principal sentence: {0}")]
    NotPrincipal(String),
    #[error("strategy-level function is not behavioral: {0}")]
    NotBehavioral(String),
}

/// Size limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Most strategies enumerated for one quantifier.
    pub strategies: usize,
    /// Most candidate functions (SDFs or adjoints) enumerated for one sentence.
    pub functions: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            strategies: 1 << 16,
            functions: 1 << 22,
        }
    }
}

/// How nested sentences are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Classical,
    Behavioral,
}

pub(crate) struct Evaluator<'a> {
    pub g: &'a Cgs,
    pub limits: Limits,
    pub mode: Mode,
}

/// Exact truth of `f` at `s` under `asg`. Quantifiers range over every
/// strategy on the tracks from the current state up to the temporal depth
/// of their scope.
pub fn eval_direct(g: &Cgs, asg: &Assignment<HorizonStrategy>, s: usize, f: &Formula) -> Result<bool, EvalError> {
    eval_with(g, asg, s, f, Limits::default())
}

pub fn eval_with(
    g: &Cgs,
    asg: &Assignment<HorizonStrategy>,
    s: usize,
    f: &Formula,
    limits: Limits,
) -> Result<bool, EvalError> {
    if s >= g.num_states() {
        return Err(EvalError::State(s));
    }
    if temporal_depth(f) == Depth::Omega {
        return Err(EvalError::Unbounded);
    }
    Evaluator {
        g,
        limits,
        mode: Mode::Classical,
    }
    .eval(f, asg, s)
}

/// Truth of a sentence at the initial state.
pub fn eval_sentence(g: &Cgs, f: &Formula) -> Result<bool, EvalError> {
    eval_direct(g, &Assignment::new(), g.initial(), f)
}

impl Evaluator<'_> {
    pub(crate) fn eval(&self, f: &Formula, asg: &Assignment<HorizonStrategy>, s: usize) -> Result<bool, EvalError> {
        match f {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(p) => {
                let i = self.g.atom_index(p).ok_or_else(|| EvalError::UnknownAtom(p.clone()))?;
                Ok(self.g.label(s) >> i & 1 == 1)
            }
            Formula::Not(g) => Ok(!self.eval(g, asg, s)?),
            Formula::And(l, r) => Ok(self.eval(l, asg, s)? && self.eval(r, asg, s)?),
            Formula::Or(l, r) => Ok(self.eval(l, asg, s)? || self.eval(r, asg, s)?),
            Formula::Until(..) | Formula::Release(..) => Err(EvalError::Unbounded),
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                if self.mode == Mode::Behavioral {
                    return super::behavioral::principal_behavioral(self, f, s);
                }
                let existential = matches!(f, Formula::Exists(..));
                let tree = self.tree_for(body, s)?;
                let count = self.strategy_count(&tree)?;
                for i in 0..count {
                    let table = tree.strategy_table(self.g.num_actions(), i);
                    let strat = HorizonStrategy::new(tree.clone(), table);
                    let v = self.eval(body, &asg.redefine(Place::Var(x.clone()), strat), s)?;
                    if v == existential {
                        return Ok(existential);
                    }
                }
                Ok(!existential)
            }
            Formula::Bind(a, x, body) => {
                let strat = asg
                    .var(x)
                    .ok_or_else(|| EvalError::Unbound(Place::Var(x.clone())))?
                    .clone();
                self.eval(body, &asg.redefine(Place::Agent(a.clone()), strat), s)
            }
            Formula::Next(body) => {
                let mut decision = Vec::with_capacity(self.g.agents().len());
                for a in self.g.agents() {
                    let strat = asg
                        .agent(a)
                        .ok_or_else(|| EvalError::Unbound(Place::Agent(a.clone())))?;
                    decision.push(strat.current().ok_or_else(|| EvalError::HorizonTooSmall(a.clone()))?);
                }
                let next = self.g.step(s, &decision);
                self.eval(body, &asg.map_values(|f| f.shift(next)), next)
            }
        }
    }

    pub(crate) fn tree_for(&self, scope: &Formula, s: usize) -> Result<Arc<TrackTree>, EvalError> {
        match temporal_depth(scope) {
            Depth::Omega => Err(EvalError::Unbounded),
            Depth::Finite(h) => Ok(Arc::new(TrackTree::build(self.g, s, h))),
        }
    }

    pub(crate) fn strategy_count(&self, tree: &TrackTree) -> Result<usize, EvalError> {
        tree.strategy_count(self.g.num_actions())
            .filter(|&c| c <= self.limits.strategies)
            .ok_or_else(|| EvalError::TooLarge(format!("{} actions over {} tracks", self.g.num_actions(), tree.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{library, LibraryParams};
    use crate::game::gstar;

    #[test]
    fn depths() {
        let p = Formula::atom("p");
        assert_eq!(temporal_depth(&p), Depth::Finite(0));
        assert_eq!(temporal_depth(&Formula::eventually(p.clone())), Depth::Omega);
        let unb = library("unb", &LibraryParams::default()).unwrap().formula;
        assert_eq!(temporal_depth(&unb), Depth::Finite(1));
    }

    #[test]
    fn ordering_matrix_on_gstar() {
        let g = gstar(3).unwrap();
        let tree = Arc::new(TrackTree::build(&g, 0, 1));
        let at = |v: usize| HorizonStrategy::new(tree.clone(), vec![v]);
        let asg = |x1, y, x2| {
            Assignment::new()
                .redefine(Place::Var("x1".into()), at(x1))
                .redefine(Place::Var("y".into()), at(y))
                .redefine(Place::Var("x2".into()), at(x2))
        };
        let phi = library::order_matrix("x1", "x2", "y");
        assert!(eval_direct(&g, &asg(0, 1, 2), 0, &phi).unwrap());
        assert!(!eval_direct(&g, &asg(1, 1, 1), 0, &phi).unwrap());
        assert!(!eval_direct(&g, &asg(2, 1, 2), 0, &phi).unwrap());
    }

    #[test]
    fn truth_is_true() {
        let g = gstar(1).unwrap();
        assert!(eval_sentence(&g, &Formula::True).unwrap());
        assert_eq!(
            eval_sentence(&g, &Formula::eventually(Formula::atom("p"))),
            Err(EvalError::Unbounded)
        );
    }
}
