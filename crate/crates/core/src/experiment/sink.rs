use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::dfa::Dfa;
use crate::error::{usage, Result};

/// Size of the unique strongly connected component of the transition
/// digraph with no edges leaving it. Fails when there are several such
/// components, which rules out synchronization.
pub fn sink_component_size(dfa: &Dfa) -> Result<usize> {
    let n = dfa.states();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * dfa.letters());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for q in 0..n {
        for a in 0..dfa.letters() {
            g.add_edge(nodes[q], nodes[dfa.transition(q, a)], ());
        }
    }
    let components = tarjan_scc(&g);
    let mut component_of = vec![0usize; n];
    for (c, members) in components.iter().enumerate() {
        for v in members {
            component_of[v.index()] = c;
        }
    }
    let mut is_sink = vec![true; components.len()];
    for q in 0..n {
        for a in 0..dfa.letters() {
            let t = dfa.transition(q, a);
            if component_of[t] != component_of[q] {
                is_sink[component_of[q]] = false;
            }
        }
    }
    let mut sinks = (0..components.len()).filter(|&c| is_sink[c]);
    match (sinks.next(), sinks.next()) {
        (Some(c), None) => Ok(components[c].len()),
        _ => Err(usage("automaton has more than one sink component")),
    }
}
