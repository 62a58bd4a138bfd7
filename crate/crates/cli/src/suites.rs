//! Worked-example reports for `slkit examples`.

use serde_json::{json, Value};

use slkit_core::formula::{
    free, library, parse, subformulas, Decl, DominoSystem, Formula, LibraryParams, Quant, QuantPrefix,
};
use slkit_core::game::{agents_assignment, gstar, play, ppd, ps, ps_parity_scheduler, Lasso, MooreStrategy};
use slkit_core::satsolver::{decide, model_check, SolverConfig};
use slkit_core::semantics::{count_sdf, eval_sentence};

use crate::{Answer, Suite};

const LAW_AND_ORDER: &str = "<<y>>[[x1]][[x2]](P,y)(A1,x1)(A2,x2)((F G !fA1) | (F G !fA2))";
const LAW_AND_ORDER_SWAPPED: &str = "[[x1]][[x2]]<<y>>(P,y)(A1,x1)(A2,x2)(F G (!fA1 & !fA2))";
const FAIR_SCHEDULER: &str = "<<y>>[[x1]][[x2]](S,y)(P1,x1)(P2,x2) G((r1 -> F g1) & (r2 -> F g2))";

#[derive(Clone)]
struct Item {
    topic: &'static str,
    name: String,
    expected: String,
    got: String,
}

fn item(topic: &'static str, name: impl Into<String>, expected: impl ToString, got: impl ToString) -> Item {
    Item {
        topic,
        name: name.into(),
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

fn sentence(src: &str, agents: &[&str]) -> Formula {
    parse(src, &Decl::with_agents(agents)).expect("built-in example parses")
}

fn prefix(entries: &[(&str, Quant)]) -> QuantPrefix {
    QuantPrefix::new(entries.iter().map(|(x, q)| (x.to_string(), *q)).collect()).expect("distinct variables")
}

fn set(names: Vec<String>) -> String {
    format!("{{{}}}", names.join(", "))
}

fn syntax() -> Vec<Item> {
    let ag = ["alpha", "beta", "gamma"];
    let agents: Vec<String> = ag.iter().map(|s| s.to_string()).collect();
    let phi = sentence("<<x>> (alpha,x)(beta,y) F p", &ag);
    let bound = Formula::bind("gamma", "z", phi.clone());
    let goal = sentence("<<x>> (alpha,x) (F p)", &["alpha"]);
    let subs = subformulas(&goal);
    let p = prefix(&[
        ("x", Quant::Forall),
        ("y", Quant::Exists),
        ("z", Quant::Exists),
        ("w", Quant::Forall),
        ("v", Quant::Exists),
    ]);
    vec![
        item(
            "free agents and variables",
            "free(<<x>>(alpha,x)(beta,y) F p)",
            "{gamma, y}",
            set(free(&phi, &agents).names()),
        ),
        item(
            "free agents and variables",
            "free((gamma,z) <<x>>(alpha,x)(beta,y) F p)",
            "{y, z}",
            set(free(&bound, &agents).names()),
        ),
        item(
            "subformulas",
            "sub(<<x>>(alpha,x)(F p)) has 5 members including true",
            "5 true",
            format!("{} {}", subs.len(), subs.contains(&Formula::True)),
        ),
        item(
            "dependence sets",
            "Dep(v) in [[x]]<<y>><<z>>[[w]]<<v>>",
            "{x, w}",
            set(p.dep("v").iter().map(|s| s.to_string()).collect()),
        ),
        item(
            "dependence sets",
            "Dep(y) in [[x]]<<y>><<z>>[[w]]<<v>>",
            "{x}",
            set(p.dep("y").iter().map(|s| s.to_string()).collect()),
        ),
    ]
}

fn plays() -> Vec<Item> {
    let g = ps();
    let request = MooreStrategy::constant(g.num_states(), 1);
    let asg = agents_assignment(&g, vec![request.clone(), request, ps_parity_scheduler()]);
    let names = ["si", "s12", "s1p", "si", "s12", "s2p"];
    let expected = Lasso::new(vec![], names.iter().map(|s| g.state_index(s).expect("state")).collect());
    let got = match play(&g, &asg, g.initial()) {
        Ok(path) if path.same_path(&expected) => format!("({})^w", names.join(" ")),
        Ok(path) => format!("{path:?}"),
        Err(e) => e.to_string(),
    };
    vec![item(
        "plays",
        "scheduler play with both processes always requesting",
        format!("({})^w", names.join(" ")),
        got,
    )]
}

fn counting() -> Vec<Item> {
    let p = prefix(&[("x", Quant::Forall), ("y", Quant::Exists), ("z", Quant::Forall)]);
    vec![
        item(
            "dependence function counts",
            "|SM| for [[x]]<<y>>[[z]] over {0,1}",
            4,
            count_sdf(&p, 2),
        ),
        item(
            "dependence function counts",
            "|SM| for <<x>>[[y]]<<z>> over {0,1}",
            8,
            count_sdf(&p.dual(), 2),
        ),
    ]
}

fn oracle() -> Vec<Item> {
    let params = LibraryParams::default();
    let trn = library("trn", &params).expect("library").formula;
    let unb = library("unb", &params).expect("library").formula;
    let mut out = vec![];
    for n in 1..=4 {
        let g = gstar(n).expect("n > 0");
        let show = |r: Result<bool, _>| {
            r.map(|b: bool| b.to_string())
                .unwrap_or_else(|e: slkit_core::semantics::EvalError| e.to_string())
        };
        out.push(item(
            "ordering witness",
            format!("gstar({n}) |= trn"),
            true,
            show(eval_sentence(&g, &trn)),
        ));
        out.push(item(
            "ordering witness",
            format!("gstar({n}) |= unb"),
            false,
            show(eval_sentence(&g, &unb)),
        ));
    }
    out
}

fn sat() -> Vec<Item> {
    let cfg = SolverConfig::default();
    let tag = |src: &str, agents: &[&str]| {
        let owned: Vec<String> = agents.iter().map(|s| s.to_string()).collect();
        match decide(&sentence(src, agents), &owned, &cfg) {
            Ok(v) => v.tag().to_string(),
            Err(e) => e.to_string(),
        }
    };
    let params = LibraryParams {
        domino: Some(DominoSystem::sample()),
        ..Default::default()
    };
    let lib_tag = |name: &str| {
        let s = library(name, &params).expect("library");
        match decide(&s.formula, &s.agents, &cfg) {
            Ok(v) => v.tag().to_string(),
            Err(e) => e.to_string(),
        }
    };
    vec![
        item(
            "satisfiability",
            "Law and Order phi1",
            "SAT",
            tag(LAW_AND_ORDER, &["A1", "A2", "P"]),
        ),
        item(
            "satisfiability",
            "Fair Scheduler",
            "SAT",
            tag(FAIR_SCHEDULER, &["P1", "P2", "S"]),
        ),
        item(
            "satisfiability",
            "<<x>>(alpha,x) X p",
            "SAT",
            tag("<<x>>(alpha,x) X p", &["alpha"]),
        ),
        item(
            "satisfiability",
            "<<x>>(alpha,x)(X p & X !p)",
            "UNSAT_UP_TO",
            tag("<<x>>(alpha,x)(X p & X !p)", &["alpha"]),
        ),
        item(
            "satisfiability",
            "ordering sentence ord",
            "FRAGMENT_ERROR",
            lib_tag("ord"),
        ),
        item(
            "satisfiability",
            "domino sentence dom",
            "FRAGMENT_ERROR",
            lib_tag("dom"),
        ),
    ]
}

fn model_checking() -> Vec<Item> {
    let cfg = SolverConfig::default();
    let mc = |g, src: &str, agents: &[&str]| match model_check(&g, &sentence(src, agents), &cfg) {
        Ok(m) if m.certified => m.holds.to_string(),
        Ok(m) => format!("{} (uncertified)", m.holds),
        Err(e) => e.to_string(),
    };
    vec![
        item(
            "model checking",
            "PPD |= Law and Order phi1",
            true,
            mc(ppd(), LAW_AND_ORDER, &["A1", "A2", "P"]),
        ),
        item(
            "model checking",
            "PPD |= Law and Order phi2",
            false,
            mc(ppd(), LAW_AND_ORDER_SWAPPED, &["A1", "A2", "P"]),
        ),
        item(
            "model checking",
            "PS |= Fair Scheduler",
            true,
            mc(ps(), FAIR_SCHEDULER, &["P1", "P2", "S"]),
        ),
    ]
}

pub fn run(suite: Suite) -> Answer {
    let items: Vec<Item> = match suite {
        Suite::Counting => counting(),
        Suite::Oracle => oracle(),
        Suite::Sat => sat(),
        Suite::All => [syntax(), plays(), counting(), oracle(), sat(), model_checking()].concat(),
    };
    let failed = items.iter().filter(|i| i.expected != i.got).count();
    let mut lines: Vec<String> = items
        .iter()
        .map(|i| {
            let status = if i.expected == i.got { "PASS" } else { "FAIL" };
            format!(
                "{status}  {:<28} {}: expected {}, got {}",
                i.topic, i.name, i.expected, i.got
            )
        })
        .collect();
    lines.push(format!("{} passed, {failed} failed", items.len() - failed));
    let rows: Vec<Value> = items
        .iter()
        .map(|i| json!({ "topic": i.topic, "item": i.name, "expected": i.expected, "got": i.got, "pass": i.expected == i.got }))
        .collect();
    Answer {
        text: lines.join("\n"),
        json: json!({ "items": rows, "passed": items.len() - failed, "failed": failed }),
        code: if failed == 0 { 0 } else { 1 },
    }
}
