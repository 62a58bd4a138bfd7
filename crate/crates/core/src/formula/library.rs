//! Generators for the named sentence families.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::Formula;

pub const ALPHA: &str = "alpha";
pub const BETA: &str = "beta";
pub const P: &str = "p";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LibraryError {
    #[error("unknown sentence family `{0}`")]
    UnknownFamily(String),
    #[error("malformed domino system: {0}")]
    BadDomino(String),
    #[error("family `{family}` needs {what}")]
    MissingParam { family: String, what: String },
    #[error("bad parameter: {0}")]
    BadParam(String),
}

/// A recurrent domino system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominoSystem {
    pub tiles: Vec<String>,
    pub horizontal: BTreeSet<(usize, usize)>,
    pub vertical: BTreeSet<(usize, usize)>,
    pub initial: usize,
}

impl DominoSystem {
    pub fn validate(&self) -> Result<(), LibraryError> {
        if self.tiles.is_empty() {
            return Err(LibraryError::BadDomino("no tiles".into()));
        }
        let unique: BTreeSet<&String> = self.tiles.iter().collect();
        if unique.len() != self.tiles.len() {
            return Err(LibraryError::BadDomino("duplicate tile name".into()));
        }
        if self.tiles.iter().any(|t| t == P) {
            return Err(LibraryError::BadDomino(format!("tile named `{P}`")));
        }
        let n = self.tiles.len();
        if self.initial >= n {
            return Err(LibraryError::BadDomino("initial tile out of range".into()));
        }
        if self
            .horizontal
            .iter()
            .chain(self.vertical.iter())
            .any(|&(a, b)| a >= n || b >= n)
        {
            return Err(LibraryError::BadDomino("relation mentions unknown tile".into()));
        }
        Ok(())
    }

    /// Two tiles, every adjacency allowed.
    pub fn sample() -> DominoSystem {
        let all: BTreeSet<(usize, usize)> = [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect();
        DominoSystem {
            tiles: vec!["t0".into(), "t1".into()],
            horizontal: all.clone(),
            vertical: all,
            initial: 0,
        }
    }
}

/// A generated sentence with the signature it lives over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LibrarySentence {
    pub formula: Formula,
    pub agents: Vec<String>,
    pub atoms: Vec<String>,
}

/// Parameters for [`library`].
#[derive(Clone, Debug, Default)]
pub struct LibraryParams {
    pub domino: Option<DominoSystem>,
    pub players: Option<usize>,
    /// Goals per player, as LTL formulas; defaults to `F p1`, `F p2`, ...
    pub goals: Option<Vec<Formula>>,
    /// Extra goal for the governing agent in `rs`; defaults to `G q`.
    pub governor_goal: Option<Formula>,
}

pub const FAMILIES: [&str; 12] = [
    "ord", "unb", "trn", "grd", "til", "rec", "dom", "nash", "nash-bg", "eg", "ag", "rs",
];

pub fn library(name: &str, params: &LibraryParams) -> Result<LibrarySentence, LibraryError> {
    let ordering = |formula| LibrarySentence {
        formula,
        agents: vec![ALPHA.into(), BETA.into()],
        atoms: vec![P.into()],
    };
    let mut fresh = Fresh::default();
    match name {
        "ord" => Ok(ordering(Formula::and(unbounded(), transitive()))),
        "unb" => Ok(ordering(unbounded())),
        "trn" => Ok(ordering(transitive())),
        "grd" => Ok(ordering(grid(&mut fresh))),
        "til" | "rec" | "dom" => {
            let d = params.domino.clone().unwrap_or_else(DominoSystem::sample);
            d.validate()?;
            let formula = match name {
                "til" => tiling(&d, &mut fresh),
                "rec" => recurrence(&d, &mut fresh),
                _ => Formula::conj([grid(&mut fresh), tiling(&d, &mut fresh), recurrence(&d, &mut fresh)]),
            };
            let mut atoms = vec![P.to_string()];
            atoms.extend(d.tiles.iter().cloned());
            Ok(LibrarySentence {
                formula,
                agents: vec![ALPHA.into(), BETA.into()],
                atoms,
            })
        }
        "nash" | "nash-bg" | "eg" | "ag" | "rs" => {
            let n = params.players.unwrap_or(2);
            if n == 0 {
                return Err(LibraryError::BadParam("at least one player".into()));
            }
            let goals = match &params.goals {
                Some(g) if g.len() != n => {
                    return Err(LibraryError::BadParam(format!(
                        "{} goals given for {n} players",
                        g.len()
                    )))
                }
                Some(g) => g.clone(),
                None => (1..=n)
                    .map(|i| Formula::eventually(Formula::atom(format!("p{i}"))))
                    .collect(),
            };
            if let Some(bad) = goals.iter().find(|g| !g.is_ltl()) {
                return Err(LibraryError::BadParam(format!("goal `{bad}` is not LTL")));
            }
            let players: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
            let mut agents = players.clone();
            let formula = match name {
                "nash" => nash(&players, &goals),
                "nash-bg" => nash_rearranged(&players, &goals),
                "eg" | "ag" => {
                    agents.push("b".into());
                    governance(&players, &goals, name == "eg")
                }
                _ => {
                    agents.insert(0, "b".into());
                    let g0 = params
                        .governor_goal
                        .clone()
                        .unwrap_or_else(|| Formula::always(Formula::atom("q")));
                    rational_synthesis(&players, &goals, g0)
                }
            };
            let mut atoms: BTreeSet<String> = formula.atoms();
            for g in &goals {
                atoms.extend(g.atoms());
            }
            Ok(LibrarySentence {
                formula,
                agents,
                atoms: atoms.into_iter().collect(),
            })
        }
        other => Err(LibraryError::UnknownFamily(other.to_string())),
    }
}

#[derive(Default)]
struct Fresh(usize);

impl Fresh {
    fn next(&mut self) -> String {
        self.0 += 1;
        format!("h{}", self.0)
    }
}

fn p() -> Formula {
    Formula::atom(P)
}

/// `φ(x1,x2,y) = (α,x1)(β,y) X p ∧ (α,x2)(β,y) X ¬p`.
pub fn order_matrix(x1: &str, x2: &str, y: &str) -> Formula {
    Formula::and(
        Formula::bind(ALPHA, x1, Formula::bind(BETA, y, Formula::next(p()))),
        Formula::bind(ALPHA, x2, Formula::bind(BETA, y, Formula::next(Formula::not(p())))),
    )
}

fn less(x1: &str, x2: &str) -> Formula {
    Formula::exists("y", order_matrix(x1, x2, "y"))
}

fn unbounded() -> Formula {
    Formula::forall("x1", Formula::exists("x2", less("x1", "x2")))
}

fn transitive() -> Formula {
    Formula::forall(
        "x1",
        Formula::forall(
            "x2",
            Formula::forall(
                "x3",
                Formula::implies(Formula::and(less("x1", "x2"), less("x2", "x3")), less("x1", "x3")),
            ),
        ),
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    Alpha,
    Beta,
}

/// `z1 <_a z2`, with a fresh witness variable.
fn axis_less(axis: Axis, z1: &str, z2: &str, fresh: &mut Fresh) -> Formula {
    let w = fresh.next();
    let body = match axis {
        Axis::Alpha => Formula::bind(
            BETA,
            w.as_str(),
            Formula::and(
                Formula::bind(ALPHA, z1, Formula::next(p())),
                Formula::bind(ALPHA, z2, Formula::next(Formula::not(p()))),
            ),
        ),
        Axis::Beta => Formula::bind(
            ALPHA,
            w.as_str(),
            Formula::and(
                Formula::bind(BETA, z1, Formula::next(Formula::not(p()))),
                Formula::bind(BETA, z2, Formula::next(p())),
            ),
        ),
    };
    Formula::exists(w, body)
}

/// `z1 ≺_a z2`: `z2` is the immediate successor of `z1`.
fn axis_succ(axis: Axis, z1: &str, z2: &str, fresh: &mut Fresh) -> Formula {
    let z3 = fresh.next();
    let between = Formula::and(axis_less(axis, z1, &z3, fresh), axis_less(axis, &z3, z2, fresh));
    Formula::and(
        axis_less(axis, z1, z2, fresh),
        Formula::not(Formula::exists(z3, between)),
    )
}

fn axis_order(axis: Axis, fresh: &mut Fresh) -> Formula {
    let unb = Formula::forall("z1", Formula::exists("z2", axis_less(axis, "z1", "z2", fresh)));
    let trn = Formula::forall(
        "z1",
        Formula::forall(
            "z2",
            Formula::forall(
                "z3",
                Formula::implies(
                    Formula::and(axis_less(axis, "z1", "z2", fresh), axis_less(axis, "z2", "z3", fresh)),
                    axis_less(axis, "z1", "z3", fresh),
                ),
            ),
        ),
    );
    Formula::and(unb, trn)
}

fn grid(fresh: &mut Fresh) -> Formula {
    Formula::and(axis_order(Axis::Alpha, fresh), axis_order(Axis::Beta, fresh))
}

fn at(x: &str, y: &str, f: Formula) -> Formula {
    Formula::bind(ALPHA, x, Formula::bind(BETA, y, Formula::next(f)))
}

fn tiling(d: &DominoSystem, fresh: &mut Fresh) -> Formula {
    let tile = |i: usize| Formula::atom(d.tiles[i].clone());
    let cells = (0..d.tiles.len()).map(|t| {
        let only = Formula::conj(
            std::iter::once(tile(t)).chain((0..d.tiles.len()).filter(|&u| u != t).map(|u| Formula::not(tile(u)))),
        );
        let loc = at("x", "y", only);
        let hor = Formula::disj(d.horizontal.iter().filter(|(a, _)| *a == t).map(|&(_, u)| {
            let next = fresh.next();
            Formula::forall(
                next.clone(),
                Formula::implies(axis_succ(Axis::Alpha, "x", &next, fresh), at(&next, "y", tile(u))),
            )
        }));
        let ver = Formula::disj(d.vertical.iter().filter(|(a, _)| *a == t).map(|&(_, u)| {
            let next = fresh.next();
            Formula::forall(
                next.clone(),
                Formula::implies(axis_succ(Axis::Beta, "y", &next, fresh), at("x", &next, tile(u))),
            )
        }));
        Formula::conj([loc, hor, ver])
    });
    let cells: Vec<Formula> = cells.collect();
    Formula::forall("x", Formula::forall("y", Formula::disj(cells)))
}

/// `0_a(z)`: nothing precedes `z` on axis `a`.
fn axis_zero(axis: Axis, z: &str, fresh: &mut Fresh) -> Formula {
    let w = fresh.next();
    Formula::not(Formula::exists(w.clone(), axis_less(axis, &w, z, fresh)))
}

fn recurrence(d: &DominoSystem, fresh: &mut Fresh) -> Formula {
    let t0 = Formula::atom(d.tiles[d.initial].clone());
    let x2 = fresh.next();
    let premise = Formula::and(
        axis_zero(Axis::Beta, "y", fresh),
        Formula::or(axis_zero(Axis::Alpha, "x", fresh), at("x", "y", t0.clone())),
    );
    let conclusion = Formula::exists(
        x2.clone(),
        Formula::and(axis_less(Axis::Alpha, "x", &x2, fresh), at(&x2, "y", t0)),
    );
    Formula::forall("x", Formula::forall("y", Formula::implies(premise, conclusion)))
}

fn bind_all(players: &[String], vars: &[String], body: Formula) -> Formula {
    players
        .iter()
        .zip(vars)
        .rev()
        .fold(body, |f, (a, x)| Formula::bind(a.clone(), x.clone(), f))
}

fn quantify(q: super::ast::Quant, vars: &[String], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |f, x| Formula::quant(q, x.clone(), f))
}

/// `⋀_i ((∃v (a_i,v) ψ_i) → ψ_i)`: no player can improve alone.
fn equilibrium_matrix(players: &[String], goals: &[Formula], v: &str) -> Formula {
    Formula::conj(
        players
            .iter()
            .zip(goals)
            .map(|(a, g)| Formula::implies(Formula::exists(v, Formula::bind(a.clone(), v, g.clone())), g.clone())),
    )
}

fn nash(players: &[String], goals: &[Formula]) -> Formula {
    let xs: Vec<String> = (1..=players.len()).map(|i| format!("x{i}")).collect();
    let body = bind_all(players, &xs, equilibrium_matrix(players, goals, "y"));
    quantify(super::ast::Quant::Exists, &xs, body)
}

/// `∃x1..xn ∀y1..yn ⋀_i (♭_i ψ_i → ♭ ψ_i)`, where `♭_i` rebinds player
/// `i` to `y_i`.
fn nash_rearranged(players: &[String], goals: &[Formula]) -> Formula {
    let n = players.len();
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let matrix = Formula::conj((0..n).map(|i| {
        let mut deviating = xs.clone();
        deviating[i] = ys[i].clone();
        Formula::implies(
            bind_all(players, &deviating, goals[i].clone()),
            bind_all(players, &xs, goals[i].clone()),
        )
    }));
    quantify(
        super::ast::Quant::Exists,
        &xs,
        quantify(super::ast::Quant::Forall, &ys, matrix),
    )
}

fn governance(players: &[String], goals: &[Formula], equity: bool) -> Formula {
    let n = players.len();
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let reachable = |g: &Formula, v: &str| Formula::exists(v, Formula::bind("b", v, g.clone()));
    let matrix = if equity {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push(Formula::implies(
                    Formula::and(reachable(&goals[i], "z1"), reachable(&goals[j], "z2")),
                    Formula::iff(goals[i].clone(), goals[j].clone()),
                ));
            }
        }
        Formula::conj(pairs)
    } else {
        Formula::conj(goals.iter().map(|g| Formula::implies(reachable(g, "z"), g.clone())))
    };
    let inner = Formula::exists("y", Formula::bind("b", "y", matrix));
    quantify(super::ast::Quant::Forall, &xs, bind_all(players, &xs, inner))
}

fn rational_synthesis(players: &[String], goals: &[Formula], governor: Formula) -> Formula {
    let xs: Vec<String> = (1..=players.len()).map(|i| format!("x{i}")).collect();
    let body = Formula::and(governor, equilibrium_matrix(players, goals, "z"));
    let bound = Formula::bind("b", "y", bind_all(players, &xs, body));
    Formula::exists("y", quantify(super::ast::Quant::Exists, &xs, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::analysis::is_sentence;
    use crate::formula::classify::{classify, Fragment};
    use crate::formula::parse::{parse, Decl};

    #[test]
    fn every_family_is_a_sentence() {
        for name in FAMILIES {
            let s = library(name, &LibraryParams::default()).unwrap();
            assert!(is_sentence(&s.formula, &s.agents), "{name}");
        }
    }

    #[test]
    fn nash_single_player() {
        let params = LibraryParams {
            players: Some(1),
            goals: Some(vec![Formula::eventually(Formula::atom("p"))]),
            ..Default::default()
        };
        let s = library("nash", &params).unwrap();
        let expect = parse("<<x1>>(a1,x1)((<<y>>(a1,y) F p) -> F p)", &Decl::with_agents(&["a1"])).unwrap();
        assert_eq!(s.formula, expect);
    }

    #[test]
    fn ordering_matrix_shape() {
        let decl = Decl::with_agents(&[ALPHA, BETA]);
        let m = parse("(alpha,x1)(beta,y) X p & (alpha,x2)(beta,y) X !p", &decl).unwrap();
        assert_eq!(order_matrix("x1", "x2", "y"), m);
    }

    #[test]
    fn fragments_of_families() {
        let frag = |name: &str| {
            let s = library(name, &LibraryParams::default()).unwrap();
            classify(&s.formula, &s.agents).unwrap().fragment
        };
        assert_eq!(frag("ord"), Fragment::Slbg);
        assert_eq!(frag("dom"), Fragment::Slbg);
        assert_eq!(frag("nash-bg"), Fragment::Slbg);
        assert_eq!(frag("nash"), Fragment::SlFull);
    }

    #[test]
    fn bad_domino() {
        let mut d = DominoSystem::sample();
        d.initial = 5;
        let params = LibraryParams {
            domino: Some(d),
            ..Default::default()
        };
        assert!(matches!(library("dom", &params), Err(LibraryError::BadDomino(_))));
        assert!(matches!(
            library("nope", &LibraryParams::default()),
            Err(LibraryError::UnknownFamily(_))
        ));
    }
}
