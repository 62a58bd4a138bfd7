//! Strategy Logic over finite concurrent game structures.
//!
//! The crate is layered bottom-up: [`formula`] (syntax and fragments),
//! [`game`] (structures, strategies, plays), [`semantics`] (exact oracle and
//! Skolem dependence functions), [`automata`] (word and tree automata) and
//! [`satsolver`] (the SL\[1G\] decision pipeline).

pub mod automata;
pub mod formula;
pub mod game;
pub mod satsolver;
pub mod semantics;
