//! Word and tree automata: LTL translation, goal, sentence and full
//! automata, membership and bounded emptiness.

mod dot;
mod graph;
mod ltl;
mod tree;
mod witness;

use thiserror::Error;

use crate::formula::Fragment;

pub use dot::ToDot;
pub use ltl::{ltl_to_ucw, ucw_accepts_lasso, Edge, Ucw};
pub use tree::{
    assemble_full_automaton, goal_automaton, principal_atom, sentence_automaton, AcceptanceParity, Component,
    ComponentKind, PosBool, Step, Uct, MAX_SDF_COMPONENT,
};
pub use witness::{search, uct_emptiness_bounded, uct_membership, Emptiness, Found, Frame, MooreWitness, SearchLimits};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("not an LTL formula: {0}")]
    NotLtl(String),
    #[error("atom `{0}` is not in the alphabet")]
    UnknownAtom(String),
    #[error("{0} atoms exceed the limit of 64")]
    TooManyAtoms(usize),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Shape(String),
    #[error("sentence is in {0}, not SL1G")]
    Fragment(Fragment),
}
