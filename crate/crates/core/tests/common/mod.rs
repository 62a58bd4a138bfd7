//! Shared generators and reference evaluators for the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use slkit_core::automata::MooreWitness;
use slkit_core::formula::{Formula, Quant};
use slkit_core::game::Cgs;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// A structure with 1..=max_states states, 1..=max_actions actions and a
/// uniformly random transition table and labeling.
pub fn random_cgs(r: &mut ChaCha8Rng, max_states: usize, max_actions: usize, agents: &[&str], atoms: &[&str]) -> Cgs {
    let n = r.gen_range(1..=max_states);
    let a = r.gen_range(1..=max_actions);
    let labels: Vec<u64> = (0..n).map(|_| r.gen_range(0..1u64 << atoms.len())).collect();
    let decisions = a.pow(agents.len() as u32);
    let table: Vec<usize> = (0..n * decisions).map(|_| r.gen_range(0..n)).collect();
    Cgs::from_fn(
        names(atoms),
        names(agents),
        (0..a).map(|i| i.to_string()).collect(),
        (0..n).map(|i| format!("s{i}")).collect(),
        0,
        labels,
        |s, d| table[s * decisions + d.iter().fold(0, |acc, &x| acc * a + x)],
    )
    .expect("generated structure is valid")
}

fn leaf(r: &mut ChaCha8Rng, atoms: &[&str]) -> Formula {
    match r.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        _ => Formula::atom(*atoms.choose(r).unwrap()),
    }
}

/// Random LTL formula built from about `budget` operators and leaves.
pub fn random_ltl(r: &mut ChaCha8Rng, atoms: &[&str], budget: usize) -> Formula {
    if budget <= 1 {
        return leaf(r, atoms);
    }
    match r.gen_range(0..9) {
        0 => Formula::not(random_ltl(r, atoms, budget - 1)),
        1 => Formula::next(random_ltl(r, atoms, budget - 1)),
        2 => Formula::eventually(random_ltl(r, atoms, budget - 1)),
        3 => Formula::always(random_ltl(r, atoms, budget - 1)),
        k => {
            let left = r.gen_range(1..budget);
            let l = random_ltl(r, atoms, left);
            let rr = random_ltl(r, atoms, budget - left);
            match k {
                4 | 5 => Formula::and(l, rr),
                6 => Formula::or(l, rr),
                7 => Formula::until(l, rr),
                _ => Formula::release(l, rr),
            }
        }
    }
}

/// Random formula over `X`, Boolean connectives and atoms with X-nesting at
/// most `depth`.
pub fn random_next_only(r: &mut ChaCha8Rng, atoms: &[&str], depth: usize, budget: usize) -> Formula {
    if budget <= 1 {
        return leaf(r, atoms);
    }
    match r.gen_range(0..6) {
        0 => Formula::not(random_next_only(r, atoms, depth, budget - 1)),
        1 | 2 if depth > 0 => Formula::next(random_next_only(r, atoms, depth - 1, budget - 1)),
        3 | 4 => {
            let left = r.gen_range(1..budget);
            Formula::and(
                random_next_only(r, atoms, depth, left),
                random_next_only(r, atoms, depth, budget - left),
            )
        }
        _ => {
            let left = r.gen_range(1..budget);
            Formula::or(
                random_next_only(r, atoms, depth, left),
                random_next_only(r, atoms, depth, budget - left),
            )
        }
    }
}

/// Random binding of every agent to one of `vars`, using each of them.
fn random_binding(r: &mut ChaCha8Rng, agents: &[&str], vars: &[String]) -> Vec<(String, String)> {
    loop {
        let chosen: Vec<String> = agents.iter().map(|_| vars.choose(r).unwrap().clone()).collect();
        if vars.iter().all(|v| chosen.contains(v)) {
            let mut pairs: Vec<(String, String)> = agents.iter().map(|a| a.to_string()).zip(chosen).collect();
            pairs.shuffle(r);
            return pairs;
        }
    }
}

fn quantify(r: &mut ChaCha8Rng, vars: &[String], matrix: Formula) -> Formula {
    let mut order = vars.to_vec();
    order.shuffle(r);
    order.into_iter().rev().fold(matrix, |acc, x| {
        let q = if r.gen_bool(0.5) { Quant::Exists } else { Quant::Forall };
        Formula::quant(q, x, acc)
    })
}

fn bind(pairs: &[(String, String)], body: Formula) -> Formula {
    pairs
        .iter()
        .rev()
        .fold(body, |acc, (a, x)| Formula::bind(a.clone(), x.clone(), acc))
}

/// A one-goal sentence `℘♭ψ` with next-only `ψ`; the prefix quantifies
/// exactly the variables of the binding.
pub fn random_one_goal(r: &mut ChaCha8Rng, agents: &[&str], atoms: &[&str], depth: usize) -> Formula {
    let k = r.gen_range(1..=agents.len());
    let vars: Vec<String> = ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect();
    let pairs = random_binding(r, agents, &vars);
    let size = r.gen_range(1..=6);
    let body = random_next_only(r, atoms, depth, size);
    quantify(r, &vars, bind(&pairs, body))
}

/// A principal sentence with up to three quantified variables; variables
/// not used by the binding are quantified vacuously.
pub fn random_principal(r: &mut ChaCha8Rng, agents: &[&str], atoms: &[&str], depth: usize) -> Formula {
    let used = r.gen_range(1..=agents.len());
    let total = r.gen_range(used..=3);
    let vars: Vec<String> = ["x", "y", "z"][..total].iter().map(|s| s.to_string()).collect();
    let pairs = random_binding(r, agents, &vars[..used]);
    let size = r.gen_range(1..=6);
    let body = random_next_only(r, atoms, depth, size);
    quantify(r, &vars, bind(&pairs, body))
}

/// A sentence with a prefix over `x, y` whose matrix combines two goals
/// binding agents `a, b` crosswise.
pub fn random_bg(r: &mut ChaCha8Rng, atoms: &[&str], depth: usize) -> Formula {
    let vars = names(&["x", "y"]);
    let g1 = bind(
        &[("a".into(), "x".into()), ("b".into(), "y".into())],
        random_next_only(r, atoms, depth, 3),
    );
    let g2 = bind(
        &[("a".into(), "y".into()), ("b".into(), "x".into())],
        random_next_only(r, atoms, depth, 3),
    );
    let matrix = match r.gen_range(0..3) {
        0 => Formula::and(g1, g2),
        1 => Formula::or(g1, g2),
        _ => Formula::implies(g1, g2),
    };
    quantify(r, &vars, matrix)
}

/// Random ultimately periodic word with `stem + loop <= max_len`.
pub fn random_lasso(r: &mut ChaCha8Rng, num_atoms: usize, max_len: usize) -> (Vec<u64>, Vec<u64>) {
    let total = r.gen_range(1..=max_len);
    let stem_len = r.gen_range(0..total);
    let word: Vec<u64> = (0..total).map(|_| r.gen_range(0..1u64 << num_atoms)).collect();
    (word[..stem_len].to_vec(), word[stem_len..].to_vec())
}

/// Truth of LTL `f` at every position of the lasso `stem · loop^ω`; bit `i`
/// of a letter is atom `atoms[i]`.
pub fn ltl_on_lasso(f: &Formula, atoms: &[&str], stem: &[u64], cycle: &[u64]) -> Vec<bool> {
    let word: Vec<u64> = stem.iter().chain(cycle).copied().collect();
    let n = word.len();
    let next = |i: usize| if i + 1 < n { i + 1 } else { stem.len() };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => {
            let bit = atoms.iter().position(|x| x == a).expect("known atom");
            word.iter().map(|l| l >> bit & 1 == 1).collect()
        }
        Formula::Not(g) => ltl_on_lasso(g, atoms, stem, cycle).into_iter().map(|b| !b).collect(),
        Formula::And(l, r) => {
            let (a, b) = (ltl_on_lasso(l, atoms, stem, cycle), ltl_on_lasso(r, atoms, stem, cycle));
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        Formula::Or(l, r) => {
            let (a, b) = (ltl_on_lasso(l, atoms, stem, cycle), ltl_on_lasso(r, atoms, stem, cycle));
            a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
        }
        Formula::Next(g) => {
            let a = ltl_on_lasso(g, atoms, stem, cycle);
            (0..n).map(|i| a[next(i)]).collect()
        }
        Formula::Until(l, r) | Formula::Release(l, r) => {
            let until = matches!(f, Formula::Until(..));
            let (a, b) = (ltl_on_lasso(l, atoms, stem, cycle), ltl_on_lasso(r, atoms, stem, cycle));
            // least fixpoint for U, greatest for R
            let mut cur = vec![!until; n];
            for _ in 0..=n {
                cur = (0..n)
                    .map(|i| {
                        if until {
                            b[i] || (a[i] && cur[next(i)])
                        } else {
                            b[i] && (a[i] || cur[next(i)])
                        }
                    })
                    .collect();
            }
            cur
        }
        other => panic!("not LTL: {other}"),
    }
}

/// The generator of the unwinding of `g` restricted to states reachable
/// from the initial one, with `label(s)` on the copy of `s`.
pub fn witness_of(g: &Cgs, label: impl Fn(usize) -> Vec<usize>) -> MooreWitness {
    let mut order = vec![g.initial()];
    let mut i = 0;
    while i < order.len() {
        for t in g.successors(order[i]) {
            if !order.contains(&t) {
                order.push(t);
            }
        }
        i += 1;
    }
    let index = |s: usize| order.iter().position(|&t| t == s).unwrap();
    let labels = order.iter().map(|&s| label(s)).collect();
    let succ = order
        .iter()
        .map(|&s| (0..g.num_decisions()).map(|d| index(g.step_index(s, d))).collect())
        .collect();
    MooreWitness::new(labels, succ).expect("reachable generator")
}

/// Atom components of a label for state `s`, in the order of `atoms`.
pub fn atom_bits(g: &Cgs, s: usize, atoms: &[String]) -> Vec<usize> {
    atoms.iter().map(|a| g.holds(s, a) as usize).collect()
}

pub const LAW_AND_ORDER: &str = "<<y>>[[x1]][[x2]](P,y)(A1,x1)(A2,x2)((F G !fA1) | (F G !fA2))";
pub const LAW_AND_ORDER_SWAPPED: &str = "[[x1]][[x2]]<<y>>(P,y)(A1,x1)(A2,x2)(F G (!fA1 & !fA2))";
pub const FAIR_SCHEDULER: &str = "<<y>>[[x1]][[x2]](S,y)(P1,x1)(P2,x2) G((r1 -> F g1) & (r2 -> F g2))";

/// Sentences the solver is regression-tested on, with their agents.
pub fn regression_set() -> Vec<(Formula, Vec<String>)> {
    use slkit_core::formula::{parse, Decl};
    let items: [(&str, &[&str]); 7] = [
        ("<<x>>(alpha,x) X p", &["alpha"]),
        ("<<x>>(alpha,x)(X p & X !p)", &["alpha"]),
        (LAW_AND_ORDER, &["A1", "A2", "P"]),
        (FAIR_SCHEDULER, &["P1", "P2", "S"]),
        ("<<x>>[[y]](a,x)(b,y) X X p", &["a", "b"]),
        ("[[x]]<<y>>(a,x)(b,y) G F p", &["a", "b"]),
        ("(<<x>>(a,x)(b,x) X p) & !(<<y>>[[z]](a,y)(b,z) X p)", &["a", "b"]),
    ];
    items
        .iter()
        .map(|(src, agents)| {
            let agents = names(agents);
            (
                parse(src, &Decl::with_agents(&agents)).expect("regression sentence parses"),
                agents,
            )
        })
        .collect()
}
