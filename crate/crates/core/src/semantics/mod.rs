//! Exact evaluation on the next-bounded fragment, and Skolem dependence
//! functions.
//!
//! With `X` as the only temporal operator, the truth of a formula at a
//! state depends only on the actions strategies choose on tracks whose
//! length is at most the nesting depth of `X` (induction on the formula:
//! each `X` consumes one action of every agent and moves one step down the
//! track tree). Quantifiers therefore range over strategies tabulated on
//! exactly those tracks.

mod behavioral;
mod eval;
mod sdf;

pub use behavioral::{eval_behavioral, eval_behavioral_with, skolemization_check, skolemization_check_with};
pub use eval::{eval_direct, eval_sentence, eval_with, temporal_depth, Depth, EvalError, Limits};
pub use sdf::{
    adjoint_of, apply_sdf, count_sdf, enumerate_sdf, sdf_from_adjoint, AdjointMap, SdfError, SdfIter, SkolemDepFn,
    Valuation,
};
