//! Concurrent game structures, strategies, plays and decision-unwinding.

mod builtin;
mod cgs;
mod play;
mod strategy;

pub use builtin::{builtin, domino_witness, gstar, ppd, ps, ps_parity_scheduler, BuiltinError, PPD_STATES, PS_STATES};
pub use cgs::{load_cgs, save_cgs, Cgs, CgsDocument, CgsError, DecisionSpec, TransitionRow, MAX_ATOMS};
pub use play::{agents_assignment, play, translate, unwind, DecisionTree, Lasso, PlayError, DEFAULT_UNWIND_CAP};
pub use strategy::{Assignment, HorizonStrategy, MooreStrategy, Place, StrategyError, TrackTree};
