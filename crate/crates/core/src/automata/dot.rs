use std::fmt::Write;

use super::ltl::{guard_text, Ucw};
use super::tree::Uct;
use super::witness::MooreWitness;

/// Graphviz rendering. Rejecting states are drawn with a double circle.
pub trait ToDot {
    fn to_dot(&self) -> String;
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node(out: &mut String, id: usize, label: &str, rejecting: bool) {
    let shape = if rejecting { "doublecircle" } else { "circle" };
    let _ = writeln!(out, "  q{id} [label=\"{}\", shape={shape}];", escape(label));
}

impl ToDot for Ucw {
    fn to_dot(&self) -> String {
        let mut out = String::from("digraph ucw {\n  rankdir=LR;\n  init [shape=point];\n");
        for &q in self.initial() {
            let _ = writeln!(out, "  init -> q{q};");
        }
        for q in 0..self.num_states() {
            node(&mut out, q, self.state_name(q), self.is_rejecting(q));
        }
        for q in 0..self.num_states() {
            for e in self.edges(q) {
                let _ = writeln!(
                    out,
                    "  q{q} -> q{} [label=\"{}\"];",
                    e.to,
                    escape(&guard_text(e, self.atoms()))
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for Uct {
    fn to_dot(&self) -> String {
        let mut out = String::from("digraph uct {\n  rankdir=LR;\n  init [shape=point];\n");
        let _ = writeln!(out, "  init -> q{};", self.initial());
        for q in 0..self.num_states() {
            node(&mut out, q, &self.state_name(q), self.is_rejecting(q));
        }
        for (from, to, text) in self.structural_edges() {
            let _ = writeln!(out, "  q{from} -> q{to} [label=\"{}\"];", escape(&text));
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for MooreWitness {
    fn to_dot(&self) -> String {
        let mut out = String::from("digraph witness {\n  init [shape=point];\n  init -> q0;\n");
        for n in 0..self.num_nodes() {
            let label: Vec<String> = self.label(n).iter().map(|v| v.to_string()).collect();
            node(&mut out, n, &format!("n{n} [{}]", label.join(",")), false);
        }
        for n in 0..self.num_nodes() {
            for d in 0..self.num_directions() {
                let _ = writeln!(out, "  q{n} -> q{} [label=\"{d}\"];", self.successor(n, d));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ltl_to_ucw;
    use crate::formula::Formula;

    #[test]
    fn counts_match() {
        let u = ltl_to_ucw(
            &Formula::until(Formula::atom("p"), Formula::atom("q")),
            &["p".into(), "q".into()],
        )
        .unwrap();
        let dot = u.to_dot();
        assert_eq!(dot, u.to_dot());
        let nodes = dot
            .lines()
            .filter(|l| l.starts_with("  q") && l.contains("shape="))
            .count();
        let edges = dot.lines().filter(|l| l.starts_with("  q") && l.contains("->")).count();
        assert_eq!(nodes, u.num_states());
        assert_eq!(edges, (0..u.num_states()).map(|q| u.edges(q).len()).sum::<usize>());
    }

    #[test]
    fn nothing_rejecting_for_true() {
        let u = ltl_to_ucw(&Formula::True, &[]).unwrap();
        assert!(!u.to_dot().contains("doublecircle"));
    }
}
