use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::automaton::Automaton;
use super::buchberger::GroebnerResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "degree")]
pub enum GrowthKind {
    FiniteDimensional,
    Linear,
    Polynomial(usize),
    Exponential,
}

impl std::fmt::Display for GrowthKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrowthKind::FiniteDimensional => write!(f, "finite-dimensional"),
            GrowthKind::Linear => write!(f, "linear"),
            GrowthKind::Polynomial(d) => write!(f, "polynomial of degree {d}"),
            GrowthKind::Exponential => write!(f, "exponential"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthEstimate {
    pub kind: GrowthKind,
    /// Only a complete Gröbner basis makes the classification a proof.
    pub certified: bool,
}

/// All words of exactly `len` letters that avoid the automaton's patterns,
/// with their end states.
fn avoiding_by_length(aut: &Automaton, letters: usize, len: usize) -> Vec<(Vec<u8>, usize)> {
    let mut level = vec![(Vec::new(), 0usize)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (w, s) in &level {
            for l in 0..letters {
                let t = aut.step(*s, l as u8);
                if !aut.is_dead(t) {
                    let mut v = w.clone();
                    v.push(l as u8);
                    next.push((v, t));
                }
            }
        }
        level = next;
    }
    level
}

/// Classify growth of `A` (equivalently of the monomial algebra on the
/// leading words) with the Ufnarovski graph.
///
/// Vertices are normal words of length `L = (longest leading word) - 1`;
/// `a·w → w·b` whenever `a·w·b` is normal. Growth is exponential iff some
/// strongly connected component carries more edges than vertices, and
/// otherwise polynomial of degree the largest number of cyclic components
/// met by one path.
pub fn growth_estimate(g: &GroebnerResult) -> GrowthEstimate {
    let aut = g.automaton();
    let letters = g.gens().len();
    let len = g.max_leading_len().saturating_sub(1);
    let words = avoiding_by_length(aut, letters, len);
    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<NodeIndex> = words.iter().map(|_| graph.add_node(())).collect();
    let position = |w: &[u8]| words.binary_search_by(|(v, _)| v.as_slice().cmp(w)).ok();
    for (i, (w, s)) in words.iter().enumerate() {
        for b in 0..letters {
            if aut.is_dead(aut.step(*s, b as u8)) {
                continue;
            }
            let mut v: Vec<u8> = if len == 0 { Vec::new() } else { w[1..].to_vec() };
            if len > 0 {
                v.push(b as u8);
            }
            if let Some(j) = position(&v) {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }

    let sccs = tarjan_scc(&graph);
    let mut component = vec![0usize; graph.node_count()];
    for (c, members) in sccs.iter().enumerate() {
        for n in members {
            component[n.index()] = c;
        }
    }
    let mut internal = vec![0usize; sccs.len()];
    for e in graph.raw_edges() {
        let (a, b) = (component[e.source().index()], component[e.target().index()]);
        if a == b {
            internal[a] += 1;
        }
    }
    let certified = g.complete();
    if internal.iter().zip(&sccs).any(|(&e, m)| e > m.len()) {
        return GrowthEstimate { kind: GrowthKind::Exponential, certified };
    }

    // tarjan_scc yields components in reverse topological order, so every
    // edge between components points to an earlier index.
    let mut best = vec![0usize; sccs.len()];
    for c in 0..sccs.len() {
        let own = usize::from(internal[c] > 0);
        let mut down = 0;
        for n in &sccs[c] {
            for m in graph.neighbors(*n) {
                let t = component[m.index()];
                if t != c {
                    down = down.max(best[t]);
                }
            }
        }
        best[c] = own + down;
    }
    let kind = match best.into_iter().max().unwrap_or(0) {
        0 => GrowthKind::FiniteDimensional,
        1 => GrowthKind::Linear,
        d => GrowthKind::Polynomial(d),
    };
    GrowthEstimate { kind, certified }
}
