use std::collections::HashMap;
use std::hash::Hash;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Explores the graph reachable from `starts` and reports whether some cycle
/// in it passes through a node satisfying `rejecting`.
pub(crate) fn rejecting_cycle_reachable<N, S, R>(starts: Vec<N>, mut succ: S, rejecting: R) -> bool
where
    N: Hash + Eq + Clone,
    S: FnMut(&N) -> Vec<N>,
    R: Fn(&N) -> bool,
{
    let mut graph: DiGraph<bool, ()> = DiGraph::new();
    let mut ids: HashMap<N, NodeIndex> = HashMap::new();
    let mut stack = vec![];
    for s in starts {
        if !ids.contains_key(&s) {
            let id = graph.add_node(rejecting(&s));
            ids.insert(s.clone(), id);
            stack.push(s);
        }
    }
    while let Some(n) = stack.pop() {
        let from = ids[&n];
        for m in succ(&n) {
            let to = match ids.get(&m) {
                Some(&t) => t,
                None => {
                    let t = graph.add_node(rejecting(&m));
                    ids.insert(m.clone(), t);
                    stack.push(m);
                    t
                }
            };
            graph.update_edge(from, to, ());
        }
    }
    tarjan_scc(&graph).into_iter().any(|scc| {
        let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        cyclic && scc.iter().any(|&v| graph[v])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_and_chain() {
        assert!(rejecting_cycle_reachable(
            vec![0],
            |&n| vec![(n + 1).min(3)],
            |&n| n == 3
        ));
        assert!(!rejecting_cycle_reachable(
            vec![0],
            |&n| vec![(n + 1).min(3)],
            |&n| n == 2
        ));
        assert!(!rejecting_cycle_reachable(vec![0usize], |_| vec![], |_| true));
    }
}
