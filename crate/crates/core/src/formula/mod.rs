//! Syntax of Strategy Logic: parsing, printing, free names, normal forms,
//! fragment classification and the sentence library.

mod analysis;
mod ast;
mod classify;
pub mod library;
mod normal;
mod parse;
mod prefix;

pub use analysis::{closure, free, is_sentence, subformulas, Closure, FreeSet};
pub use ast::{Formula, Quant};
pub use classify::{classify, one_goal, principals, rename_var, Fragment, FragmentClass, NotSentence, OneGoal};
pub use library::{library, DominoSystem, LibraryError, LibraryParams, LibrarySentence};
pub use normal::{enf, negated_pnf, normalize, pnf, NormalForm};
pub use parse::{parse, render, Decl, ParseError};
pub use prefix::{prefix_analysis, BindPrefix, PrefixAnalysis, PrefixError, QuantPrefix};
