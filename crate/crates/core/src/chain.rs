//! The Markov chain of states-and-cliques of a probabilistic valuation:
//! exact initial distributions and transition rows, null nodes, and seeded
//! sampling.
//!
//! The transition row at a node (α, c) is proportional to h_{α·c} over the
//! normal successors of c, normalized to total mass one. The normalization
//! constant is tied to the initial law by the kernel identity
//! h_α(c) = f_α(c) · Σ_{d : c→d} h_{α·c}(d); the identity is re-verified on
//! every constructed chain and any exact violation is reported, not fixed.

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clique::{is_normal_pair, Clique};
use crate::digraph::{Node, StatesCliquesDigraph};
use crate::error::{Error, Result};
use crate::system::{ConcurrentSystem, StateId};
use crate::valuation::ProbabilisticValuation;

/// A sparse exact distribution over node indices.
type Distribution = Vec<(usize, BigRational)>;

#[derive(Debug, Clone)]
pub struct ChainModel {
    /// Nonempty-clique nodes, in digraph order.
    nodes: Vec<Node>,
    /// Initial distribution per starting state, over node indices.
    initial: Vec<Distribution>,
    /// Transition rows; `None` marks a dead node with no outgoing mass.
    rows: Vec<Option<Distribution>>,
    /// Nodes whose kernel identity h_α(c) = f_α(c)·Σ h_{α·c}(d) failed.
    identity_violations: Vec<usize>,
}

impl ChainModel {
    /// Builds the chain for a certified probabilistic valuation.
    pub fn build(sys: &ConcurrentSystem, pv: &ProbabilisticValuation) -> Self {
        let dg = StatesCliquesDigraph::build(sys);
        let nodes: Vec<Node> = dg
            .nonempty_nodes()
            .into_iter()
            .map(|i| dg.nodes()[i].clone())
            .collect();
        let h = pv.mobius();
        let index_of = |state: StateId, clique: &Clique| {
            nodes.iter().position(|n| n.state == state && &n.clique == clique)
        };
        let mut initial = Vec::with_capacity(sys.n_states());
        for s in sys.state_ids() {
            let mut dist = Vec::new();
            for (j, n) in nodes.iter().enumerate() {
                if n.state == s && !h.get(s, &n.clique).is_zero() {
                    dist.push((j, h.get(s, &n.clique).clone()));
                }
            }
            initial.push(dist);
        }
        let mut rows = Vec::with_capacity(nodes.len());
        let mut identity_violations = Vec::new();
        for (i, n) in nodes.iter().enumerate() {
            let target = sys.act_clique(n.state, &n.clique).expect("enabled clique");
            let mut support: Distribution = Vec::new();
            let mut total = BigRational::zero();
            for d in sys.enabled_nonempty_cliques(target) {
                if is_normal_pair(sys.alphabet(), &n.clique, &d) {
                    let w = h.get(target, &d).clone();
                    if !w.is_zero() {
                        total += &w;
                        let j = index_of(target, &d).expect("successor node exists");
                        support.push((j, w));
                    }
                }
            }
            // kernel identity: h_α(c) = f_α(c) · total
            let f_c = pv.valuation().evaluate(
                sys,
                n.state,
                &crate::trace::Trace::clique(sys.alphabet().clone(), n.clique.clone()),
            );
            if h.get(n.state, &n.clique) != &(&f_c * &total) {
                identity_violations.push(i);
            }
            if total.is_zero() {
                rows.push(None);
            } else {
                for entry in &mut support {
                    entry.1 = &entry.1 / &total;
                }
                rows.push(Some(support));
            }
        }
        ChainModel { nodes, initial, rows, identity_violations }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_index(&self, state: StateId, clique: &Clique) -> Option<usize> {
        self.nodes.iter().position(|n| n.state == state && &n.clique == clique)
    }

    /// ν_α(C₁ = c) for every node (α, c), as a sparse distribution.
    pub fn initial(&self, state: StateId) -> &[(usize, BigRational)] {
        &self.initial[state.index()]
    }

    /// The transition row of a node, normalized; `None` for dead nodes.
    pub fn row(&self, node: usize) -> Option<&[(usize, BigRational)]> {
        self.rows[node].as_deref()
    }

    pub fn dead_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.rows[i].is_none()).collect()
    }

    pub fn identity_violations(&self) -> &[usize] {
        &self.identity_violations
    }

    /// Nodes carrying no probability mass: zero initial mass from every
    /// state and zero incoming transition mass.
    pub fn null_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| {
                let no_initial =
                    self.initial.iter().all(|dist| dist.iter().all(|(j, _)| *j != i));
                let no_incoming = self.rows.iter().all(|row| {
                    row.as_ref()
                        .map_or(true, |r| r.iter().all(|(j, w)| *j != i || w.is_zero()))
                });
                no_initial && no_incoming
            })
            .collect()
    }

    /// ν_α(C₁ = c, C₂ = d): initial mass times the transition entry.
    pub fn two_step_probability(
        &self,
        state: StateId,
        c: &Clique,
        d: &Clique,
    ) -> BigRational {
        let Some(i) = self.node_index(state, c) else {
            return BigRational::zero();
        };
        let initial = self
            .initial(state)
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(BigRational::zero);
        if initial.is_zero() {
            return BigRational::zero();
        }
        let Some(row) = self.row(i) else {
            return BigRational::zero();
        };
        for (j, w) in row {
            if self.nodes[*j].clique == *d {
                return &initial * w;
            }
        }
        BigRational::zero()
    }

    pub fn render_node(&self, sys: &ConcurrentSystem, i: usize) -> String {
        let n = &self.nodes[i];
        format!("({},{})", sys.state_name(n.state), n.clique.render(sys.alphabet()))
    }
}

/// Draws from an exact rational distribution by scaling to a common
/// denominator and sampling a uniform integer below the total.
fn sample_index(dist: &[(usize, BigRational)], rng: &mut ChaCha8Rng) -> usize {
    debug_assert!(!dist.is_empty());
    let denom: BigUint = dist
        .iter()
        .fold(BigUint::one(), |acc, (_, w)| num_integer::lcm(acc, w.denom().magnitude().clone()));
    let scaled: Vec<(usize, BigUint)> = dist
        .iter()
        .map(|(i, w)| {
            let num = w.numer().magnitude() * (&denom / w.denom().magnitude());
            (*i, num)
        })
        .collect();
    let total: BigUint = scaled.iter().map(|(_, n)| n.clone()).sum();
    let draw = rng.gen_biguint_below(&total);
    let mut acc = BigUint::zero();
    for (i, n) in &scaled {
        acc += n;
        if draw < acc {
            return *i;
        }
    }
    unreachable!("cumulative sum covers the draw")
}

/// Samples Y₁..Y_steps of the Markov chain of states-and-cliques started at
/// `state`, using ChaCha8 seeded with the given value; identical seeds give
/// identical runs on every platform. Entering a dead node is an error that
/// names the node.
pub fn sample_execution(
    sys: &ConcurrentSystem,
    pv: &ProbabilisticValuation,
    state: StateId,
    steps: usize,
    seed: u64,
) -> Result<Vec<(StateId, Clique)>> {
    let chain = ChainModel::build(sys, pv);
    sample_from_chain(sys, &chain, state, steps, seed)
}

/// Sampling against a prebuilt chain.
pub fn sample_from_chain(
    sys: &ConcurrentSystem,
    chain: &ChainModel,
    state: StateId,
    steps: usize,
    seed: u64,
) -> Result<Vec<(StateId, Clique)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(steps);
    if steps == 0 {
        return Ok(out);
    }
    let initial = chain.initial(state);
    if initial.is_empty() {
        return Err(Error::DeadNode {
            state: sys.state_name(state).to_string(),
            clique: "ε".to_string(),
        });
    }
    let mut cur = sample_index(initial, &mut rng);
    loop {
        let node = &chain.nodes()[cur];
        out.push((node.state, node.clique.clone()));
        if out.len() == steps {
            return Ok(out);
        }
        match chain.row(cur) {
            Some(row) => cur = sample_index(row, &mut rng),
            None => {
                return Err(Error::DeadNode {
                    state: sys.state_name(node.state).to_string(),
                    clique: node.clique.render(sys.alphabet()),
                })
            }
        }
    }
}
