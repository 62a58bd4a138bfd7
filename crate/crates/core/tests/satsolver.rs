mod common;

use std::time::Duration;

use rand::Rng;

use common::*;
use slkit_core::automata::assemble_full_automaton;
use slkit_core::formula::*;
use slkit_core::game::*;
use slkit_core::satsolver::*;
use slkit_core::semantics::eval_sentence;

fn sentence(src: &str, agents: &[&str]) -> Formula {
    parse(src, &Decl::with_agents(agents)).unwrap()
}

fn quick() -> SolverConfig {
    SolverConfig {
        time_budget: Some(Duration::from_secs(60)),
        ..Default::default()
    }
}

#[test]
fn sat_witnesses_pass_model_checking() {
    for (phi, agents) in regression_set() {
        let v = decide(&phi, &agents, &quick()).unwrap();
        if let Verdict::Sat { model, .. } = &v {
            let mc = model_check(
                model,
                &phi,
                &SolverConfig {
                    mc_memory: Some(1),
                    ..quick()
                },
            )
            .unwrap();
            assert!(mc.holds && mc.certified, "{phi}");
            if phi.is_next_only() {
                assert!(eval_sentence(model, &phi).unwrap(), "{phi}");
            }
        }
    }
}

#[test]
fn regression_verdicts() {
    let tags: Vec<&str> = regression_set()
        .iter()
        .map(|(phi, agents)| decide(phi, agents, &quick()).unwrap().tag())
        .collect();
    assert_eq!(tags, ["SAT", "UNSAT_UP_TO", "SAT", "SAT", "SAT", "SAT", "SAT"]);
}

#[test]
fn model_checking_agrees_with_direct_evaluation() {
    let mut r = rng(51);
    let mut certified = 0;
    for _ in 0..50 {
        let agents: &[&str] = if r.gen_bool(0.5) { &["a"] } else { &["a", "b"] };
        let g = random_cgs(&mut r, 3, 2, agents, &["p", "q"]);
        let f = random_one_goal(&mut r, agents, &["p", "q"], 1);
        let Ok(expected) = eval_sentence(&g, &f) else { continue };
        let mc = model_check(&g, &f, &quick()).unwrap();
        if mc.certified {
            assert_eq!(mc.holds, expected, "{f}");
            certified += 1;
        }
    }
    assert!(certified >= 40, "{certified}");
}

#[test]
fn law_and_order_on_the_prison_model() {
    let g = ppd();
    let agents = ["A1", "A2", "P"];
    let phi1 = model_check(&g, &sentence(LAW_AND_ORDER, &agents), &quick()).unwrap();
    assert!(phi1.holds && phi1.certified);
    let phi2 = model_check(&g, &sentence(LAW_AND_ORDER_SWAPPED, &agents), &quick()).unwrap();
    assert!(!phi2.holds && phi2.certified);
}

#[test]
fn fair_scheduler_on_the_scheduler_model() {
    let mc = model_check(&ps(), &sentence(FAIR_SCHEDULER, &["P1", "P2", "S"]), &quick()).unwrap();
    assert!(mc.holds && mc.certified);
}

#[test]
fn trivial_matrices() {
    let g = gstar(2).unwrap();
    let ag = ["alpha", "beta"];
    for (src, expected) in [
        ("<<x>>[[y]](alpha,x)(beta,y) true", true),
        ("<<x>>[[y]](alpha,x)(beta,y) false", false),
        ("[[x]](alpha,x)(beta,x) (p | !p)", true),
    ] {
        let mc = model_check(&g, &sentence(src, &ag), &quick()).unwrap();
        assert_eq!((mc.holds, mc.certified), (expected, true), "{src}");
    }
}

#[test]
fn verdicts_are_monotone_in_bounds() {
    for (phi, agents) in regression_set() {
        let mut first_sat: Option<(usize, usize)> = None;
        for b in 1..=2 {
            for k in 1..=3 {
                let cfg = SolverConfig {
                    schedule: vec![b],
                    k_max: k,
                    ..quick()
                };
                let sat = matches!(decide(&phi, &agents, &cfg).unwrap(), Verdict::Sat { .. });
                if let Some((b0, k0)) = first_sat {
                    if b >= b0 && k >= k0 {
                        assert!(sat, "{phi} lost at b={b}, k={k}");
                    }
                }
                if sat && first_sat.is_none() {
                    first_sat = Some((b, k));
                }
            }
        }
    }
}

#[test]
fn repeated_and_parallel_runs_agree() {
    for (phi, agents) in regression_set() {
        let a = decide(&phi, &agents, &quick()).unwrap();
        let b = decide(&phi, &agents, &quick()).unwrap();
        let c = decide(
            &phi,
            &agents,
            &SolverConfig {
                parallel: true,
                ..quick()
            },
        )
        .unwrap();
        assert_eq!(a, b, "{phi}");
        assert_eq!(a, c, "{phi}");
    }
}

#[test]
fn extracted_model_unwinds_like_the_witness() {
    let phi = sentence("<<x>>(alpha,x) X p", &["alpha"]);
    let agents = names(&["alpha"]);
    let Verdict::Sat { model, witness, b, .. } = decide(&phi, &agents, &quick()).unwrap() else {
        panic!("expected SAT");
    };
    let u = assemble_full_automaton(&phi, &agents, b, model.atoms()).unwrap();
    assert_eq!(extract_model(&u, &witness, b).unwrap(), model);
    let tree = unwind(&model, 3, DEFAULT_UNWIND_CAP).unwrap();
    let nd = model.num_decisions();
    let mut frontier = vec![(vec![], 0usize)];
    for _ in 0..=3 {
        let mut next = vec![];
        for (path, node) in frontier {
            let bits = (0..model.atoms().len()).fold(0u64, |acc, i| acc | ((witness.label(node)[i] as u64 & 1) << i));
            assert_eq!(tree.label(&path), Some(bits));
            for d in 0..nd {
                let mut p: Vec<usize> = path.clone();
                p.push(d);
                next.push((p, witness.successor(node, d)));
            }
        }
        frontier = next.into_iter().filter(|(p, _)| p.len() <= 3).collect();
    }
}

#[test]
fn fragment_and_configuration_errors() {
    let params = LibraryParams::default();
    let ord = library("ord", &params).unwrap();
    assert_eq!(
        decide(&ord.formula, &ord.agents, &quick()).unwrap(),
        Verdict::FragmentError(Fragment::Slbg)
    );
    assert!(matches!(
        model_check(&gstar(2).unwrap(), &ord.formula, &quick()),
        Err(SolverError::Fragment(Fragment::Slbg))
    ));
    let phi = sentence("<<x>>(a,x) X p", &["a"]);
    let bad = SolverConfig {
        schedule: vec![2, 1],
        ..quick()
    };
    assert!(matches!(
        decide(&phi, &names(&["a"]), &bad),
        Err(SolverError::Config(_))
    ));
}

#[test]
fn step_budget_is_reported() {
    let phi = sentence(FAIR_SCHEDULER, &["P1", "P2", "S"]);
    let cfg = SolverConfig {
        max_steps: 1,
        ..quick()
    };
    assert_eq!(
        decide(&phi, &names(&["P1", "P2", "S"]), &cfg).unwrap().tag(),
        "RESOURCE_EXHAUSTED"
    );
}
