mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use slkit_core::formula::library::FAMILIES;
use slkit_core::formula::*;
use slkit_core::semantics::eval_sentence;

const AGENTS: [&str; 2] = ["a", "b"];

fn agents() -> Vec<String> {
    names(&AGENTS)
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        prop_oneof![Just("p"), Just("q")].prop_map(Formula::atom),
    ];
    leaf.prop_recursive(5, 20, 2, |inner| {
        let var = prop_oneof![Just("x"), Just("y")];
        let agent = prop_oneof![Just("a"), Just("b")];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::until(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::release(l, r)),
            (var.clone(), inner.clone()).prop_map(|(x, f)| Formula::exists(x, f)),
            (var.clone(), inner.clone()).prop_map(|(x, f)| Formula::forall(x, f)),
            (agent, var, inner).prop_map(|(a, x, f)| Formula::bind(a, x, f)),
        ]
    })
}

fn only_atoms_negated(f: &Formula) -> bool {
    match f {
        Formula::Not(g) => matches!(**g, Formula::Atom(_) | Formula::True | Formula::False),
        _ => f.children().into_iter().all(only_atoms_negated),
    }
}

fn no_universal(f: &Formula) -> bool {
    !matches!(f, Formula::Forall(..)) && f.children().into_iter().all(no_universal)
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in arb_formula()) {
        let text = render(&f);
        prop_assert_eq!(parse(&text, &Decl::with_agents(&AGENTS)).unwrap(), f);
    }

    #[test]
    fn subformula_count_bounded_by_size(f in arb_formula()) {
        prop_assert!(subformulas(&f).len() <= f.size() + 1);
    }

    #[test]
    fn free_clauses(f in arb_formula(), g in arb_formula()) {
        let ag = agents();
        let base = free(&f, &ag);
        prop_assert_eq!(free(&Formula::not(f.clone()), &ag), base.clone());

        let both = free(&Formula::and(f.clone(), g.clone()), &ag);
        let other = free(&g, &ag);
        prop_assert_eq!(&both.agents, &base.agents.union(&other.agents).cloned().collect());
        prop_assert_eq!(&both.vars, &base.vars.union(&other.vars).cloned().collect());

        let next = free(&Formula::next(f.clone()), &ag);
        prop_assert_eq!(next.agents, ag.iter().cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(&next.vars, &base.vars);

        let q = free(&Formula::exists("x", f.clone()), &ag);
        prop_assert!(!q.vars.contains("x"));
        prop_assert_eq!(&q.agents, &base.agents);

        let b = free(&Formula::bind("a", "z", f.clone()), &ag);
        if base.agents.contains("a") {
            prop_assert!(b.vars.contains("z") && !b.agents.contains("a"));
        } else {
            prop_assert_eq!(b, base.clone());
        }
    }

    #[test]
    fn normal_forms_have_their_shape(f in arb_formula()) {
        prop_assert!(only_atoms_negated(&normalize(&f, NormalForm::Pnf)));
        prop_assert!(no_universal(&normalize(&f, NormalForm::Enf)));
        // linear growth
        prop_assert!(normalize(&f, NormalForm::Pnf).size() <= 2 * f.size() + 1);
    }

    #[test]
    fn dual_prefix_is_an_involution(qs in proptest::collection::vec(any::<bool>(), 0..6)) {
        let p = QuantPrefix::new(
            qs.iter()
                .enumerate()
                .map(|(i, &e)| (format!("v{i}"), if e { Quant::Exists } else { Quant::Forall }))
                .collect(),
        )
        .unwrap();
        prop_assert_eq!(p.dual().dual(), p);
    }
}

#[test]
fn shared_strategy_sentence_parses() {
    let f = parse(
        "<<x>> [[y]] (a,x)(b,x)(c,y) G !fail",
        &Decl::with_agents(&["a", "b", "c"]),
    )
    .unwrap();
    let expected = Formula::exists(
        "x",
        Formula::forall(
            "y",
            Formula::bind(
                "a",
                "x",
                Formula::bind(
                    "b",
                    "x",
                    Formula::bind("c", "y", Formula::always(Formula::not(Formula::atom("fail")))),
                ),
            ),
        ),
    );
    assert_eq!(f, expected);
    assert!(is_sentence(&f, &names(&["a", "b", "c"])));
}

#[test]
fn parse_errors_are_distinguished() {
    let d = Decl::with_agents(&["a"]);
    assert!(parse("p &", &d).is_err());
    assert!(parse("(q,x) p", &d).is_err());
    assert!(parse("<<a>> p", &d).is_err());
}

#[test]
fn closure_flags() {
    let ag = names(&["alpha", "beta", "gamma"]);
    let d = Decl::with_agents(&ag);
    let phi = parse("(gamma,z) <<x>>(alpha,x)(beta,y) F p", &d).unwrap();
    let c = closure(&phi, &ag);
    assert!(c.agent_closed && !c.variable_closed);
    assert!(!is_sentence(&parse("X p", &d).unwrap(), &ag));
}

#[test]
fn library_sentences_are_sentences_and_classified_along_the_chain() {
    let params = LibraryParams {
        domino: Some(DominoSystem::sample()),
        ..Default::default()
    };
    for name in FAMILIES {
        let s = library(name, &params).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(is_sentence(&s.formula, &s.agents), "{name}");
        let c = classify(&s.formula, &s.agents).unwrap();
        if c.fragment == Fragment::Sl1g {
            assert!(Fragment::Sl1g.within(Fragment::Slbg));
        }
        assert!(c.fragment.within(Fragment::SlFull));
    }
    let slbg = |name| {
        classify(
            &library(name, &params).unwrap().formula,
            &library(name, &params).unwrap().agents,
        )
        .unwrap()
        .fragment
    };
    assert_eq!(slbg("ord"), Fragment::Slbg);
    assert_eq!(slbg("dom"), Fragment::Slbg);
    assert_eq!(slbg("nash-bg"), Fragment::Slbg);
}

#[test]
fn random_one_goal_sentences_are_sl1g() {
    let mut r = rng(11);
    for _ in 0..500 {
        let f = if r.gen_bool(0.5) {
            random_one_goal(&mut r, &AGENTS, &["p", "q"], 2)
        } else {
            random_bg(&mut r, &["p", "q"], 2)
        };
        let c = classify(&f, &agents()).unwrap();
        // the one-goal generator and the cross-binding generator
        assert!(c.fragment.within(Fragment::Slbg), "{f}: {}", c.fragment);
        if c.fragment == Fragment::Sl1g {
            assert!(one_goal(&c.normalized, &agents()).is_some() || !c.principals.is_empty());
        }
    }
}

#[test]
fn normalization_preserves_truth_on_small_structures() {
    let mut r = rng(12);
    let mut checked = 0;
    for _ in 0..300 {
        let g = random_cgs(&mut r, 3, 2, &AGENTS, &["p", "q"]);
        let f = random_one_goal(&mut r, &AGENTS, &["p", "q"], 1);
        let f = if r.gen_bool(0.3) { Formula::not(f) } else { f };
        let Ok(expected) = eval_sentence(&g, &f) else { continue };
        for form in [NormalForm::Pnf, NormalForm::Enf] {
            assert_eq!(
                eval_sentence(&g, &normalize(&f, form)).unwrap(),
                expected,
                "{f} in {form:?}"
            );
        }
        checked += 1;
    }
    assert!(checked >= 200, "only {checked} instances evaluated");
}
