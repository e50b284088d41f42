//! The digraph of states-and-cliques: nodes (α, c) with c enabled at α,
//! edges (α,c) → (β,d) when β = α·c and (c,d) is a normal pair. Infinite
//! paths through nonempty-clique nodes correspond to infinite executions.

use crate::clique::{is_normal_pair, Clique};
use crate::system::{ConcurrentSystem, StateId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub state: StateId,
    pub clique: Clique,
}

#[derive(Debug, Clone)]
pub struct StatesCliquesDigraph {
    nodes: Vec<Node>,
    /// Adjacency by node index, sorted.
    edges: Vec<Vec<usize>>,
}

impl StatesCliquesDigraph {
    pub fn build(sys: &ConcurrentSystem) -> Self {
        let mut nodes = Vec::new();
        for s in sys.state_ids() {
            for c in sys.enabled_cliques(s) {
                nodes.push(Node { state: s, clique: c });
            }
        }
        let mut edges = vec![Vec::new(); nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            let target = sys.act_clique(n.state, &n.clique).expect("enabled clique");
            for (j, m) in nodes.iter().enumerate() {
                if m.state == target && is_normal_pair(sys.alphabet(), &n.clique, &m.clique) {
                    edges[i].push(j);
                }
            }
        }
        StatesCliquesDigraph { nodes, edges }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    pub fn node_index(&self, state: StateId, clique: &Clique) -> Option<usize> {
        self.nodes.iter().position(|n| n.state == state && &n.clique == clique)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges[from].contains(&to)
    }

    /// Indices of the nodes with nonempty cliques (the sub-digraph whose
    /// infinite paths are the infinite executions).
    pub fn nonempty_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.nodes[i].clique.is_empty()).collect()
    }

    pub fn render_node(&self, sys: &ConcurrentSystem, i: usize) -> String {
        let n = &self.nodes[i];
        format!("({},{})", sys.state_name(n.state), n.clique.render(sys.alphabet()))
    }
}
