use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::analysis::{free, is_sentence};
use super::ast::{Formula, Quant};
use super::normal::pnf;
use super::prefix::{BindPrefix, QuantPrefix};

/// The fragment a sentence falls into. Ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Sl1g,
    Slbg,
    SlFull,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Sl1g => "SL1G",
            Fragment::Slbg => "SLBG",
            Fragment::SlFull => "SLFull",
        })
    }
}

impl Fragment {
    /// True when every sentence of `self` also belongs to `other`.
    pub fn within(self, other: Fragment) -> bool {
        self <= other
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentClass {
    pub fragment: Fragment,
    /// Principal subsentences of `normalized`, in pre-order.
    pub principals: Vec<Formula>,
    /// The form the classification was carried out on: negations pushed to
    /// atoms and, for SLBG, quantifiers hoisted out of Boolean matrices.
    pub normalized: Formula,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a sentence: free agents {agents:?}, free variables {vars:?}")]
pub struct NotSentence {
    pub agents: Vec<String>,
    pub vars: Vec<String>,
}

pub fn classify(f: &Formula, agents: &[String]) -> Result<FragmentClass, NotSentence> {
    if !is_sentence(f, agents) {
        let s = free(f, agents);
        return Err(NotSentence {
            agents: s.agents.into_iter().collect(),
            vars: s.vars.into_iter().collect(),
        });
    }
    let pushed = pnf(f);
    if formula_level(&pushed, agents, Shape::OneGoal) {
        return Ok(FragmentClass {
            fragment: Fragment::Sl1g,
            principals: principals(&pushed),
            normalized: pushed,
        });
    }
    let mut names: BTreeSet<String> = pushed.variables();
    let hoisted = hoist_formula(&pushed, agents, &mut names);
    if formula_level(&hoisted, agents, Shape::BooleanGoals) {
        return Ok(FragmentClass {
            fragment: Fragment::Slbg,
            principals: principals(&hoisted),
            normalized: hoisted,
        });
    }
    Ok(FragmentClass {
        fragment: Fragment::SlFull,
        principals: principals(&pushed),
        normalized: pushed,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    OneGoal,
    BooleanGoals,
}

fn formula_level(f: &Formula, agents: &[String], shape: Shape) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Not(g) => matches!(**g, Formula::Atom(_)),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Until(l, r) | Formula::Release(l, r) => {
            formula_level(l, agents, shape) && formula_level(r, agents, shape)
        }
        Formula::Next(g) => formula_level(g, agents, shape),
        Formula::Exists(..) | Formula::Forall(..) => principal_ok(f, agents, shape),
        Formula::Bind(..) => false,
    }
}

fn principal_ok(f: &Formula, agents: &[String], shape: Shape) -> bool {
    let Ok((prefix, matrix)) = QuantPrefix::split(f) else {
        return false;
    };
    let mut used = BTreeSet::new();
    let ok = match shape {
        Shape::OneGoal => goal_ok(matrix, agents, shape, &mut used),
        Shape::BooleanGoals => matrix_ok(matrix, agents, &mut used),
    };
    let quantified: BTreeSet<String> = prefix.variables().map(String::from).collect();
    ok && quantified == used
}

fn matrix_ok(m: &Formula, agents: &[String], used: &mut BTreeSet<String>) -> bool {
    match m {
        Formula::And(l, r) | Formula::Or(l, r) => matrix_ok(l, agents, used) && matrix_ok(r, agents, used),
        _ => goal_ok(m, agents, Shape::BooleanGoals, used),
    }
}

fn goal_ok(g: &Formula, agents: &[String], shape: Shape, used: &mut BTreeSet<String>) -> bool {
    let (chain, body) = BindPrefix::split(g);
    let Ok(binding) = BindPrefix::new(chain, agents) else {
        return false;
    };
    used.extend(binding.variables());
    formula_level(body, agents, shape)
}

/// Maximal quantifier blocks, in pre-order.
pub fn principals(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_principals(f, &mut out);
    out
}

fn collect_principals(f: &Formula, out: &mut Vec<Formula>) {
    if f.is_quantifier() {
        out.push(f.clone());
        let mut cur = f;
        while let Formula::Exists(_, g) | Formula::Forall(_, g) = cur {
            cur = g;
        }
        collect_principals(cur, out);
        return;
    }
    for c in f.children() {
        collect_principals(c, out);
    }
}

fn fresh(base: &str, names: &mut BTreeSet<String>) -> String {
    let mut cand = format!("{base}'");
    while names.contains(&cand) {
        cand.push('\'');
    }
    names.insert(cand.clone());
    cand
}

/// Renames free occurrences of variable `from` to `to`.
pub fn rename_var(f: &Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::Exists(x, _) | Formula::Forall(x, _) if x == from => f.clone(),
        Formula::Exists(x, g) => Formula::exists(x.clone(), rename_var(g, from, to)),
        Formula::Forall(x, g) => Formula::forall(x.clone(), rename_var(g, from, to)),
        Formula::Bind(a, x, g) => {
            let x = if x == from { to.to_string() } else { x.clone() };
            Formula::bind(a.clone(), x, rename_var(g, from, to))
        }
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(rename_var(g, from, to)),
        Formula::Next(g) => Formula::next(rename_var(g, from, to)),
        Formula::And(l, r) => Formula::and(rename_var(l, from, to), rename_var(r, from, to)),
        Formula::Or(l, r) => Formula::or(rename_var(l, from, to), rename_var(r, from, to)),
        Formula::Until(l, r) => Formula::until(rename_var(l, from, to), rename_var(r, from, to)),
        Formula::Release(l, r) => Formula::release(rename_var(l, from, to), rename_var(r, from, to)),
    }
}

fn hoist_formula(f: &Formula, agents: &[String], names: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => {
            let mut prefix: Vec<(String, Quant)> = Vec::new();
            let mut cur = f.clone();
            loop {
                match cur {
                    Formula::Exists(x, g) => {
                        prefix.push((x, Quant::Exists));
                        cur = *g;
                    }
                    Formula::Forall(x, g) => {
                        prefix.push((x, Quant::Forall));
                        cur = *g;
                    }
                    _ => break,
                }
            }
            let matrix = hoist_matrix(&cur, Vec::new(), &mut prefix, agents, names);
            prefix
                .iter()
                .rev()
                .fold(matrix, |m, (x, q)| Formula::quant(*q, x.clone(), m))
        }
        Formula::Bind(a, x, g) => Formula::bind(a.clone(), x.clone(), hoist_formula(g, agents, names)),
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(hoist_formula(g, agents, names)),
        Formula::Next(g) => Formula::next(hoist_formula(g, agents, names)),
        Formula::And(l, r) => Formula::and(hoist_formula(l, agents, names), hoist_formula(r, agents, names)),
        Formula::Or(l, r) => Formula::or(hoist_formula(l, agents, names), hoist_formula(r, agents, names)),
        Formula::Until(l, r) => Formula::until(hoist_formula(l, agents, names), hoist_formula(r, agents, names)),
        Formula::Release(l, r) => Formula::release(hoist_formula(l, agents, names), hoist_formula(r, agents, names)),
    }
}

/// Rewrites a quantifier matrix into a Boolean combination of goals where
/// possible: quantifiers met in Boolean position move into `prefix`
/// (renamed apart), and incomplete binding chains distribute over `&`/`|`.
fn hoist_matrix(
    m: &Formula,
    chain: Vec<(String, String)>,
    prefix: &mut Vec<(String, Quant)>,
    agents: &[String],
    names: &mut BTreeSet<String>,
) -> Formula {
    let complete = agents.iter().all(|a| chain.iter().any(|(b, _)| b == a));
    if complete && !chain.is_empty() {
        let body = hoist_formula(m, agents, names);
        return wrap_chain(&chain, body);
    }
    match m {
        Formula::And(l, r) => Formula::and(
            hoist_matrix(l, chain.clone(), prefix, agents, names),
            hoist_matrix(r, chain, prefix, agents, names),
        ),
        Formula::Or(l, r) => Formula::or(
            hoist_matrix(l, chain.clone(), prefix, agents, names),
            hoist_matrix(r, chain, prefix, agents, names),
        ),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let q = if matches!(m, Formula::Exists(..)) {
                Quant::Exists
            } else {
                Quant::Forall
            };
            let clash = prefix.iter().any(|(y, _)| y == x) || chain.iter().any(|(_, y)| y == x);
            let (name, body) = if clash {
                let y = fresh(x, names);
                let body = rename_var(g, x, &y);
                (y, body)
            } else {
                (x.clone(), (**g).clone())
            };
            prefix.push((name, q));
            hoist_matrix(&body, chain, prefix, agents, names)
        }
        Formula::Bind(a, x, g) => {
            let mut chain = chain;
            chain.push((a.clone(), x.clone()));
            hoist_matrix(g, chain, prefix, agents, names)
        }
        _ => {
            let body = hoist_formula(m, agents, names);
            wrap_chain(&chain, body)
        }
    }
}

fn wrap_chain(chain: &[(String, String)], body: Formula) -> Formula {
    chain
        .iter()
        .rev()
        .fold(body, |f, (a, x)| Formula::bind(a.clone(), x.clone(), f))
}

/// A one-goal principal sentence split into its parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneGoal {
    pub prefix: QuantPrefix,
    pub binding: BindPrefix,
    pub body: Formula,
}

impl OneGoal {
    pub fn to_formula(&self) -> Formula {
        self.prefix.apply(self.binding.apply(self.body.clone()))
    }

    /// The dual sentence, equivalent to the negation of this one.
    pub fn dual(&self) -> OneGoal {
        OneGoal {
            prefix: self.prefix.dual(),
            binding: self.binding.clone(),
            body: super::normal::negated_pnf(&self.body),
        }
    }
}

/// Splits `f` as `prefix binding body`, if it has that shape.
pub fn one_goal(f: &Formula, agents: &[String]) -> Option<OneGoal> {
    let (prefix, rest) = QuantPrefix::split(f).ok()?;
    if prefix.is_empty() {
        return None;
    }
    let (chain, body) = BindPrefix::split(rest);
    let binding = BindPrefix::new(chain, agents).ok()?;
    Some(OneGoal {
        prefix,
        binding,
        body: body.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::{parse, Decl};

    fn ag(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn class(src: &str, agents: &[&str]) -> Fragment {
        let agents = ag(agents);
        let f = parse(src, &Decl::with_agents(&agents)).unwrap();
        classify(&f, &agents).unwrap().fragment
    }

    #[test]
    fn law_and_order_is_one_goal() {
        let src = "<<y>>[[x1]][[x2]](P,y)(A1,x1)(A2,x2)((F G !f1) | (F G !f2))";
        assert_eq!(class(src, &["A1", "A2", "P"]), Fragment::Sl1g);
    }

    #[test]
    fn conjunction_of_sentences_stays_one_goal() {
        let src = "<<x>>(a,x) X p & !<<y>>(a,y) X q";
        assert_eq!(class(src, &["a"]), Fragment::Sl1g);
    }

    #[test]
    fn boolean_goals() {
        let src = "<<x>>[[y]]((a,x)(b,y) X p & (a,y)(b,x) X q)";
        assert_eq!(class(src, &["a", "b"]), Fragment::Slbg);
    }

    #[test]
    fn full_when_goal_body_has_open_quantifier() {
        let src = "<<x>>(a,x)(b,x)((<<y>>(a,y) F p) -> F p)";
        assert_eq!(class(src, &["a", "b"]), Fragment::SlFull);
    }

    #[test]
    fn vacuous_quantifier_is_full() {
        assert_eq!(class("<<x>><<z>>(a,x) X p", &["a"]), Fragment::SlFull);
    }

    #[test]
    fn non_sentence_rejected() {
        let agents = ag(&["a"]);
        let f = parse("(a,x) X p", &Decl::with_agents(&agents)).unwrap();
        assert!(classify(&f, &agents).is_err());
    }

    #[test]
    fn one_goal_split_and_dual() {
        let agents = ag(&["a"]);
        let f = parse("<<x>>(a,x) X p", &Decl::with_agents(&agents)).unwrap();
        let g = one_goal(&f, &agents).unwrap();
        assert_eq!(g.to_formula(), f);
        let d = g.dual();
        assert_eq!(d.to_formula().to_string(), "[[x]] (a,x) X !p");
    }
}
