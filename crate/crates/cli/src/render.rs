//! Text and JSON forms of command answers.

use serde_json::{json, Value};

use slkit_core::automata::{MooreWitness, Ucw};
use slkit_core::formula::{render, Formula, FragmentClass, FreeSet, QuantPrefix};
use slkit_core::game::save_cgs;
use slkit_core::satsolver::{McOutcome, Verdict};

use crate::Answer;

fn answer(text: String, json: Value, code: u8) -> Answer {
    Answer { text, json, code }
}

/// Colors the first line when styling is on: green for exit 0, red otherwise.
pub fn style(text: &str, code: u8, styled: bool) -> String {
    if !styled {
        return text.to_string();
    }
    let color = if code == 0 { "32" } else { "31" };
    match text.split_once('\n') {
        Some((head, rest)) => format!("\x1b[{color}m{head}\x1b[0m\n{rest}"),
        None => format!("\x1b[{color}m{text}\x1b[0m"),
    }
}

pub fn classify(c: &FragmentClass) -> Answer {
    let principals: Vec<String> = c.principals.iter().map(render).collect();
    answer(
        c.fragment.to_string(),
        json!({
            "fragment": c.fragment.to_string(),
            "normalized": render(&c.normalized),
            "principals": principals,
        }),
        0,
    )
}

pub fn free(s: &FreeSet) -> Answer {
    answer(
        format!("{{{}}}", s.names().join(", ")),
        json!({ "agents": s.agents, "vars": s.vars }),
        0,
    )
}

pub fn formulas<'a>(key: &str, fs: impl Iterator<Item = &'a Formula>) -> Answer {
    let rendered: Vec<String> = fs.map(render).collect();
    let json = if rendered.len() == 1 && key == "normalized" {
        json!({ key: rendered[0] })
    } else {
        json!({ key: rendered })
    };
    answer(rendered.join("\n"), json, 0)
}

fn witness(w: &MooreWitness) -> Value {
    let nodes: Vec<Value> = (0..w.num_nodes())
        .map(|n| json!({ "label": w.label(n), "succ": w.successors()[n] }))
        .collect();
    Value::Array(nodes)
}

pub fn verdict(v: &Verdict) -> Answer {
    match v {
        Verdict::Sat {
            model,
            witness: w,
            b,
            k,
        } => {
            let doc = save_cgs(model);
            let model_json: Value = serde_json::from_str(&doc).expect("documents are JSON");
            answer(
                format!("SAT b={b} k={k}\n{}", doc.trim_end()),
                json!({ "verdict": "SAT", "b": b, "k": k, "model": model_json, "witness": witness(w) }),
                0,
            )
        }
        Verdict::UnsatUpTo { b_max, k_max } => answer(
            format!("UNSAT_UP_TO b={b_max} k={k_max}"),
            json!({ "verdict": "UNSAT_UP_TO", "b_max": b_max, "k_max": k_max }),
            1,
        ),
        Verdict::FragmentError(f) => answer(
            format!("FRAGMENT_ERROR {f}"),
            json!({ "verdict": "FRAGMENT_ERROR", "fragment": f.to_string() }),
            3,
        ),
        Verdict::ResourceExhausted(d) => answer(
            format!("RESOURCE_EXHAUSTED {d}"),
            json!({ "verdict": "RESOURCE_EXHAUSTED", "detail": d }),
            4,
        ),
    }
}

pub fn model_check(m: &McOutcome) -> Answer {
    let qualifier = if m.certified { "certified" } else { "up to memory" };
    answer(
        format!("{} ({qualifier} {})", m.holds, m.memory),
        json!({ "holds": m.holds, "memory": m.memory, "certified": m.certified }),
        if m.holds { 0 } else { 1 },
    )
}

pub fn truth(holds: bool) -> Answer {
    answer(holds.to_string(), json!({ "holds": holds }), if holds { 0 } else { 1 })
}

fn guard(atoms: &[String], pos: u64, neg: u64) -> String {
    let lits: Vec<String> = atoms
        .iter()
        .enumerate()
        .filter_map(|(i, a)| match (pos >> i & 1, neg >> i & 1) {
            (1, _) => Some(a.clone()),
            (_, 1) => Some(format!("!{a}")),
            _ => None,
        })
        .collect();
    if lits.is_empty() {
        "true".into()
    } else {
        lits.join(" & ")
    }
}

pub fn ucw(u: &Ucw, atoms: &[String]) -> Answer {
    let mut lines = vec![format!(
        "states {} initial {:?} rejecting {:?}",
        u.num_states(),
        u.initial(),
        (0..u.num_states()).filter(|&q| u.is_rejecting(q)).collect::<Vec<_>>()
    )];
    let mut states = vec![];
    for q in 0..u.num_states() {
        let edges: Vec<Value> = u
            .edges(q)
            .iter()
            .map(|e| {
                let g = guard(atoms, e.pos, e.neg);
                lines.push(format!("q{q} -[{g}]-> q{}", e.to));
                json!({ "guard": g, "to": e.to })
            })
            .collect();
        states.push(json!({ "rejecting": u.is_rejecting(q), "edges": edges }));
    }
    answer(
        lines.join("\n"),
        json!({ "atoms": atoms, "initial": u.initial(), "states": states }),
        0,
    )
}

pub fn count(p: &QuantPrefix, d: usize, n: &impl ToString) -> Answer {
    let deps: Vec<Value> = p
        .existential()
        .iter()
        .map(|x| json!({ "var": x, "dep": p.dep(x) }))
        .collect();
    let n = n.to_string();
    answer(n.clone(), json!({ "domain": d, "count": n, "existential": deps }), 0)
}
