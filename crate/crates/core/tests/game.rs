mod common;

use common::*;
use slkit_core::game::*;

fn ps_assignment(g: &Cgs) -> Assignment<MooreStrategy> {
    let always_request = MooreStrategy::constant(g.num_states(), 1);
    agents_assignment(g, vec![always_request.clone(), always_request, ps_parity_scheduler()])
}

fn state(g: &Cgs, name: &str) -> usize {
    g.state_index(name).unwrap()
}

#[test]
fn ps_play_alternates_grants() {
    let g = ps();
    let path = play(&g, &ps_assignment(&g), g.initial()).unwrap();
    let expected = Lasso::new(
        vec![],
        ["si", "s12", "s1p", "si", "s12", "s2p"]
            .iter()
            .map(|s| state(&g, s))
            .collect(),
    );
    assert!(path.same_path(&expected), "{path:?}");
    assert!(path.is_legal(&g));
}

#[test]
fn ps_document_shape() {
    let g = ps();
    assert_eq!(g.num_states(), 6);
    assert_eq!(g.atoms(), names(&["r1", "r2", "g1", "g2"]).as_slice());
    assert_eq!(g.step(state(&g, "si"), &[1, 1, 0]), state(&g, "s12"));
    let back = load_cgs(&save_cgs(&g)).unwrap();
    assert_eq!(back, g);
}

#[test]
fn ps_unwinding_labels() {
    let g = ps();
    let t = unwind(&g, 2, DEFAULT_UNWIND_CAP).unwrap();
    let d = g.decision_index(&[1, 1, 0]);
    assert_eq!(t.label(&[d]), Some(g.label(state(&g, "s12"))));
    assert_eq!(g.label_names(state(&g, "s12")), names(&["r1", "r2"]));
    assert_eq!(
        unwind(&g, 0, DEFAULT_UNWIND_CAP).unwrap().labels,
        vec![g.label(g.initial())]
    );
}

#[test]
fn unwinding_is_prefix_stable() {
    let mut r = rng(21);
    for _ in 0..30 {
        let g = random_cgs(&mut r, 3, 2, &["a", "b"], &["p"]);
        for h in 1..=3 {
            let big = unwind(&g, h, DEFAULT_UNWIND_CAP).unwrap();
            let small = unwind(&g, h - 1, DEFAULT_UNWIND_CAP).unwrap();
            assert_eq!(big.states[..small.len()], small.states[..]);
        }
    }
    assert!(matches!(unwind(&ps(), 20, 1000), Err(PlayError::TooLarge { .. })));
}

#[test]
fn translation_matches_suffixes() {
    let g = ps();
    let asg = ps_assignment(&g);
    let path = play(&g, &asg, g.initial()).unwrap();
    for i in 0..=10 {
        let (shifted, s) = translate(&g, &asg, g.initial(), i).unwrap();
        assert_eq!(s, path.at(i));
        let rest = play(&g, &shifted, s).unwrap();
        assert!(rest.same_path(&path.suffix(i)), "i = {i}");
        for j in 0..4 {
            let (twice, t) = translate(&g, &shifted, s, j).unwrap();
            let (once, u) = translate(&g, &asg, g.initial(), i + j).unwrap();
            assert_eq!(t, u);
            assert!(play(&g, &twice, t).unwrap().same_path(&play(&g, &once, u).unwrap()));
        }
    }
}

#[test]
fn random_plays_are_legal() {
    let mut r = rng(22);
    for _ in 0..50 {
        let g = random_cgs(&mut r, 3, 2, &["a", "b"], &["p"]);
        let strategies = (0..2)
            .map(|i| MooreStrategy::constant(g.num_states(), i % g.num_actions()))
            .collect();
        let path = play(&g, &agents_assignment(&g, strategies), g.initial()).unwrap();
        assert!(path.is_legal(&g));
    }
}

#[test]
fn incomplete_assignment_is_rejected() {
    let g = ps();
    let only_one = Assignment::new().redefine(Place::Agent("P1".into()), MooreStrategy::constant(6, 0));
    assert!(matches!(play(&g, &only_one, 0), Err(PlayError::Incomplete(_))));
}

#[test]
fn redefinition() {
    let f = MooreStrategy::constant(1, 0);
    let h = MooreStrategy::constant(1, 1);
    let asg = Assignment::new().redefine(Place::Var("x".into()), f.clone());
    assert_eq!(asg.var("x"), Some(&f));
    let again = asg.redefine(Place::Var("x".into()), h.clone());
    assert_eq!(again.var("x"), Some(&h));
    assert_eq!(again.len(), 1);
    assert_eq!(asg.redefine(Place::Agent("a".into()), h).len(), 2);
}

#[test]
fn order_witness_transitions() {
    for n in 1..=4 {
        let g = gstar(n).unwrap();
        assert_eq!(g.label_names(0), Vec::<String>::new());
        assert_eq!(g.label_names(1), names(&["p"]));
        assert_eq!(g.label_names(2), Vec::<String>::new());
        for a in 0..n {
            for b in 0..n {
                assert_eq!(g.step(0, &[a, b]) == 1, a <= b);
            }
        }
    }
    assert!(gstar(0).is_err());
}

#[test]
fn domino_witness_labels() {
    use slkit_core::formula::DominoSystem;
    let d = DominoSystem::sample();
    let g = domino_witness(&d, &|a, b| (a + b) % d.tiles.len(), 2).unwrap();
    assert_eq!(g.num_states(), 2 * d.tiles.len() + 1);
    for t in &d.tiles {
        let with_p = g.states().iter().position(|s| s == &format!("p_{t}")).unwrap();
        let without = g.states().iter().position(|s| s == &format!("np_{t}")).unwrap();
        assert!(g.holds(with_p, "p") && g.holds(with_p, t));
        assert!(!g.holds(without, "p") && g.holds(without, t));
    }
}

#[test]
fn ppd_signature() {
    let g = ppd();
    assert_eq!(g.agents(), names(&["A1", "A2", "P"]).as_slice());
    assert_eq!(g.actions(), names(&["0", "1"]).as_slice());
}

#[test]
fn documents_round_trip_byte_stable() {
    let mut r = rng(23);
    let mut models = vec![ppd(), ps(), gstar(3).unwrap()];
    models.extend((0..20).map(|_| random_cgs(&mut r, 3, 2, &["a", "b"], &["p", "q"])));
    for g in models {
        let text = save_cgs(&g);
        let back = load_cgs(&text).unwrap();
        assert_eq!(save_cgs(&back), text);
    }
}

#[test]
fn missing_decision_is_reported() {
    let doc = r#"{
        "ap": ["p"], "agents": ["a"], "actions": ["0", "1"], "states": ["s"],
        "initial": "s", "label": {"s": ["p"]},
        "transitions": [{"from": "s", "decision": {"a": "0"}, "to": "s"}]
    }"#;
    match load_cgs(doc) {
        Err(CgsError::Missing { state, decision }) => assert_eq!((state.as_str(), decision.as_str()), ("s", "(a:1)")),
        other => panic!("{other:?}"),
    }
    let self_loop = r#"{
        "ap": ["p"], "agents": ["a"], "actions": ["0"], "states": ["s"],
        "initial": "s", "label": {"s": ["p"]},
        "transitions": [{"from": "s", "decision": "*", "to": "s"}]
    }"#;
    let g = load_cgs(self_loop).unwrap();
    assert_eq!(g.step(0, &[0]), 0);
}

#[test]
fn conflicting_duplicates_are_rejected() {
    let doc = r#"{
        "ap": [], "agents": ["a"], "actions": ["0"], "states": ["s", "t"],
        "initial": "s", "label": {},
        "transitions": [
            {"from": "s", "decision": {"a": "0"}, "to": "s"},
            {"from": "s", "decision": {"a": "0"}, "to": "t"},
            {"from": "t", "decision": "*", "to": "t"}
        ]
    }"#;
    assert!(load_cgs(doc).is_err());
}
