//! Irreducibility, the spectral property under letter removal, and
//! finiteness classification of execution sets.
//!
//! Reachability and cycle detection run on the labelled multigraph of
//! states, which gives the same answers as the states-and-cliques digraph
//! for these questions and is much smaller.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::alphabet::Letter;
use crate::error::Result;
use crate::growth::{growth_matrix_coefficients, theta};
use crate::root::{smallest_root, strictly_greater, RootBound};
use crate::system::{ConcurrentSystem, StateId};
use crate::trace::Trace;

/// The three defining conditions and their conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Irreducibility {
    /// The dependence graph (Σ, D) is connected.
    pub dependence_connected: bool,
    /// M_{α,β} ≠ ∅ for all α, β: the state multigraph is strongly connected.
    pub states_mutually_reachable: bool,
    /// Every letter occurs in some execution from every state.
    pub letters_always_usable: bool,
}

impl Irreducibility {
    pub fn verdict(&self) -> bool {
        self.dependence_connected && self.states_mutually_reachable && self.letters_always_usable
    }
}

fn reachable_from(sys: &ConcurrentSystem, start: StateId) -> Vec<bool> {
    let mut seen = vec![false; sys.n_states()];
    let mut stack = vec![start];
    seen[start.index()] = true;
    while let Some(s) = stack.pop() {
        for l in sys.alphabet().letters() {
            if let Some(t) = sys.step(Some(s), l) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    stack.push(t);
                }
            }
        }
    }
    seen
}

pub fn is_irreducible(sys: &ConcurrentSystem) -> Irreducibility {
    let dependence_connected = sys.alphabet().dependence_connected();
    let reach: Vec<Vec<bool>> = sys.state_ids().map(|s| reachable_from(sys, s)).collect();
    let states_mutually_reachable =
        reach.iter().all(|row| row.iter().all(|&r| r));
    let letters_always_usable = sys.state_ids().all(|s| {
        sys.alphabet().letters().all(|l| {
            sys.state_ids()
                .any(|t| reach[s.index()][t.index()] && sys.step(Some(t), l).is_some())
        })
    });
    Irreducibility {
        dependence_connected,
        states_mutually_reachable,
        letters_always_usable,
    }
}

/// A loop witnessing that M_α is infinite: `prefix` reaches a state from
/// which the nonempty `cycle` returns to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopWitness {
    pub prefix: Trace,
    pub cycle: Trace,
}

/// Whether M_α is finite, with a pumping witness when it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finiteness {
    pub finite: bool,
    pub witness: Option<LoopWitness>,
}

/// M_α is infinite iff a state lying on a directed cycle of the state
/// multigraph is reachable from α. The search is breadth-first in
/// lexicographic letter order, so the witness is deterministic.
pub fn classify_finiteness(sys: &ConcurrentSystem, state: StateId) -> Finiteness {
    let reach = reachable_from(sys, state);
    // shortest letter-paths from state, BFS over lexicographically ordered letters
    let mut path: Vec<Option<Vec<Letter>>> = vec![None; sys.n_states()];
    path[state.index()] = Some(vec![]);
    let mut queue = std::collections::VecDeque::from([state]);
    while let Some(s) = queue.pop_front() {
        for l in sys.alphabet().letters() {
            if let Some(t) = sys.step(Some(s), l) {
                if path[t.index()].is_none() {
                    let mut p = path[s.index()].clone().unwrap();
                    p.push(l);
                    path[t.index()] = Some(p);
                    queue.push_back(t);
                }
            }
        }
    }
    // look for the reachable state with the shortest cycle through it
    let mut best: Option<(usize, StateId, Vec<Letter>)> = None;
    for s in sys.state_ids().filter(|s| reach[s.index()]) {
        if let Some(cycle) = shortest_cycle(sys, s) {
            let cost = path[s.index()].as_ref().unwrap().len() + cycle.len();
            let candidate = (cost, s, cycle);
            if best.as_ref().map_or(true, |b| candidate.0 < b.0 || (candidate.0 == b.0 && candidate.1 < b.1)) {
                best = Some(candidate);
            }
        }
    }
    match best {
        Some((_, s, cycle)) => Finiteness {
            finite: false,
            witness: Some(LoopWitness {
                prefix: Trace::from_word(sys.alphabet().clone(), path[s.index()].as_ref().unwrap()),
                cycle: Trace::from_word(sys.alphabet().clone(), &cycle),
            }),
        },
        None => Finiteness { finite: true, witness: None },
    }
}

/// Shortest nonempty letter path from `s` back to `s`, if any.
fn shortest_cycle(sys: &ConcurrentSystem, s: StateId) -> Option<Vec<Letter>> {
    let mut path: Vec<Option<Vec<Letter>>> = vec![None; sys.n_states()];
    let mut queue = std::collections::VecDeque::new();
    for l in sys.alphabet().letters() {
        if let Some(t) = sys.step(Some(s), l) {
            if t == s {
                return Some(vec![l]);
            }
            if path[t.index()].is_none() {
                path[t.index()] = Some(vec![l]);
                queue.push_back(t);
            }
        }
    }
    while let Some(cur) = queue.pop_front() {
        for l in sys.alphabet().letters() {
            if let Some(t) = sys.step(Some(cur), l) {
                let mut p = path[cur.index()].clone().unwrap();
                p.push(l);
                if t == s {
                    return Some(p);
                }
                if path[t.index()].is_none() {
                    path[t.index()] = Some(p);
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Eventual emptiness of the execution-count row for α, read off the growth
/// matrix recurrence: a third route to Lemma-4 finiteness, independent of
/// both the graph search and direct enumeration.
pub fn growth_row_vanishes(sys: &ConcurrentSystem, state: StateId, cutoff: usize, window: usize) -> bool {
    let g = growth_matrix_coefficients(sys, cutoff + window);
    (cutoff + 1..=cutoff + window).all(|n| {
        g[n][state.index()].iter().all(|v| v.is_zero())
    })
}

/// Per-letter restriction analysis: the characteristic root r^a of each
/// restricted system, compared strictly against r.
#[derive(Debug, Clone)]
pub struct SpectralEntry {
    pub letter: Letter,
    pub restricted_root: RootBound,
    pub strictly_greater: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralCheck {
    pub root: RootBound,
    pub entries: Vec<SpectralEntry>,
}

impl SpectralCheck {
    /// True when r^a > r for every letter, the spectral property of
    /// irreducible systems.
    pub fn all_strict(&self) -> bool {
        self.entries.iter().all(|e| e.strictly_greater)
    }
}

pub fn spectral_check(sys: &ConcurrentSystem) -> Result<SpectralCheck> {
    let base = theta(sys);
    let root = smallest_root(&base)?;
    let mut entries = Vec::new();
    for l in sys.alphabet().letters() {
        let restricted = sys.restrict(l);
        let th = theta(&restricted);
        entries.push(SpectralEntry {
            letter: l,
            restricted_root: smallest_root(&th)?,
            strictly_greater: strictly_greater(&th, &base)?,
        });
    }
    Ok(SpectralCheck { root, entries })
}

/// Growth classification from enumerated coefficients, used to corroborate
/// the characteristic root; deliberately coarse so it can only flag definite
/// contradictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    /// Counts vanish beyond some length: every execution set is finite.
    EventuallyZero,
    /// Counts keep growing.
    Growing,
}

pub fn growth_class(sys: &ConcurrentSystem, n_terms: usize) -> GrowthClass {
    let g = growth_matrix_coefficients(sys, n_terms);
    let total_at = |n: usize| -> BigInt {
        g[n].iter().flat_map(|row| row.iter()).fold(BigInt::zero(), |acc, v| acc + v)
    };
    if total_at(n_terms).is_zero() && total_at(n_terms - 1).is_zero() {
        GrowthClass::EventuallyZero
    } else {
        GrowthClass::Growing
    }
}

/// Flags a definite contradiction between the isolated root of θ and the
/// enumerated coefficient growth: an infinite radius demands eventually-zero
/// counts and conversely.
pub fn root_growth_consistent(root: &RootBound, class: GrowthClass) -> bool {
    match (root, class) {
        (RootBound::Infinite, GrowthClass::EventuallyZero) => true,
        (RootBound::Infinite, GrowthClass::Growing) => false,
        (RootBound::Bracket { .. }, GrowthClass::EventuallyZero) => false,
        (RootBound::Bracket { .. }, GrowthClass::Growing) => true,
    }
}
