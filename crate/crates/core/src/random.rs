//! Seeded generators for property tests: random alphabets, random valid
//! concurrent systems, deterministic systems by construction, and random
//! eventually periodic traces.
//!
//! Commutation-inconsistent action tables are repaired by resetting the
//! first letter of each conflicting pair to the sink until validation
//! succeeds, so every generated system is valid. All draws go through a
//! seeded ChaCha8 stream and are reproducible across platforms.

use rand::{Rng, SeedableRng};

use std::sync::Arc;

use crate::alphabet::{IndependenceAlphabet, Letter};
use crate::clique::{enumerate_nonempty_cliques, is_normal_pair, Clique};
use crate::system::ConcurrentSystem;
use crate::trace::OmegaTrace;

// ChaCha8 rather than StdRng: the stream is pinned across platforms and
// library versions.
type GenRng = rand_chacha::ChaCha8Rng;

fn rng_for(seed: u64) -> GenRng {
    GenRng::seed_from_u64(seed)
}

/// Random alphabet with 1..=max_letters letters named l0, l1, …, each
/// distinct pair independent with probability 1/2.
pub fn random_alphabet(seed: u64, max_letters: usize) -> Arc<IndependenceAlphabet> {
    let mut rng = rng_for(seed);
    random_alphabet_with(&mut rng, max_letters)
}

fn random_alphabet_with(rng: &mut GenRng, max_letters: usize) -> Arc<IndependenceAlphabet> {
    let n = rng.gen_range(1..=max_letters);
    let names: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    IndependenceAlphabet::new(&names, &pairs).expect("generated alphabet is valid")
}

/// Random valid system with at most the given numbers of states and
/// letters. Roughly half of the (state, letter) slots act, before repair.
pub fn random_system(seed: u64, max_states: usize, max_letters: usize) -> ConcurrentSystem {
    let mut rng = rng_for(seed);
    let alphabet = random_alphabet_with(&mut rng, max_letters);
    let n_states = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut action: Vec<Option<usize>> = (0..n_states * alphabet.len())
        .map(|_| rng.gen_bool(0.5).then(|| rng.gen_range(0..n_states)))
        .collect();
    repair(&alphabet, n_states, &mut action);
    build(alphabet, &states, &action)
}

/// Random deterministic system: per state, a pairwise-independent enabled
/// set is drawn, then joint-enabledness is repaired by disabling letters.
pub fn random_dcs(seed: u64, max_states: usize, max_letters: usize) -> ConcurrentSystem {
    let mut rng = rng_for(seed);
    let alphabet = random_alphabet_with(&mut rng, max_letters);
    let n_states = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut action: Vec<Option<usize>> = vec![None; n_states * alphabet.len()];
    for s in 0..n_states {
        let mut chosen: Vec<Letter> = Vec::new();
        for l in alphabet.letters() {
            if chosen.iter().all(|&c| alphabet.independent(c, l)) && rng.gen_bool(0.7) {
                chosen.push(l);
                action[s * alphabet.len() + l.index()] = Some(rng.gen_range(0..n_states));
            }
        }
    }
    repair(&alphabet, n_states, &mut action);
    // joint-enabledness repair: disable the second letter of any enabled
    // independent pair whose joint action hits the sink
    loop {
        let mut changed = false;
        for s in 0..n_states {
            for (a, b) in alphabet.independent_pairs() {
                let sa = action[s * alphabet.len() + a.index()];
                let sb = action[s * alphabet.len() + b.index()];
                let (Some(sa), Some(_)) = (sa, sb) else { continue };
                if action[sa * alphabet.len() + b.index()].is_none() {
                    action[s * alphabet.len() + b.index()] = None;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        repair(&alphabet, n_states, &mut action);
    }
    let sys = build(alphabet, &states, &action);
    debug_assert!(crate::dcs::is_deterministic(&sys).is_dcs);
    sys
}

/// Resets one defined entry of every conflicting independent pair to the
/// sink until the table is commutation-consistent. Terminates because each
/// round strictly removes defined entries.
fn repair(alphabet: &IndependenceAlphabet, n_states: usize, action: &mut [Option<usize>]) {
    let n = alphabet.len();
    loop {
        let mut changed = false;
        for s in 0..n_states {
            for (a, b) in alphabet.independent_pairs() {
                let step = |ac: &[Option<usize>], st: Option<usize>, l: Letter| {
                    st.and_then(|x| ac[x * n + l.index()])
                };
                let left = step(action, step(action, Some(s), a), b);
                let right = step(action, step(action, Some(s), b), a);
                if left != right {
                    // disable a defined entry feeding the conflict
                    if action[s * n + a.index()].is_some() {
                        action[s * n + a.index()] = None;
                    } else {
                        action[s * n + b.index()] = None;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn build(
    alphabet: Arc<IndependenceAlphabet>,
    states: &[String],
    action: &[Option<usize>],
) -> ConcurrentSystem {
    let n = alphabet.len();
    let mut table = Vec::new();
    for (slot, target) in action.iter().enumerate() {
        if let Some(t) = target {
            let s = slot / n;
            let l = Letter((slot % n) as u16);
            table.push((
                states[s].clone(),
                alphabet.name(l).to_string(),
                states[*t].clone(),
            ));
        }
    }
    ConcurrentSystem::new(alphabet, states, &table).expect("repaired table validates")
}

/// Random eventually periodic trace over the alphabet: a random walk on
/// nonempty cliques along normal pairs until a clique repeats; the segment
/// between the repeats is the cycle. Returns `None` for empty alphabets.
pub fn random_omega(seed: u64, alphabet: &Arc<IndependenceAlphabet>) -> Option<OmegaTrace> {
    let mut rng = rng_for(seed);
    let cliques = enumerate_nonempty_cliques(alphabet);
    if cliques.is_empty() {
        return None;
    }
    let mut walk: Vec<Clique> = vec![cliques[rng.gen_range(0..cliques.len())].clone()];
    loop {
        let last = walk.last().unwrap();
        let successors: Vec<&Clique> = cliques
            .iter()
            .filter(|c| is_normal_pair(alphabet, last, c))
            .collect();
        // every nonempty clique has itself as a normal successor
        let next = successors[rng.gen_range(0..successors.len())].clone();
        if let Some(pos) = walk.iter().position(|c| *c == next) {
            let prefix = walk[..pos].to_vec();
            let cycle = walk[pos..].to_vec();
            return Some(
                OmegaTrace::new(alphabet.clone(), prefix, cycle)
                    .expect("walk along normal pairs is normal"),
            );
        }
        walk.push(next);
    }
}

/// A random pair I ⊆ I′ over shared letters, as two alphabets.
pub fn random_refinement(
    seed: u64,
    max_letters: usize,
) -> (Arc<IndependenceAlphabet>, Arc<IndependenceAlphabet>) {
    let mut rng = rng_for(seed);
    let base = random_alphabet_with(&mut rng, max_letters);
    let names: Vec<String> =
        base.letters().map(|l| base.name(l).to_string()).collect();
    let mut pairs: Vec<(String, String)> = base
        .independent_pairs()
        .map(|(a, b)| (base.name(a).to_string(), base.name(b).to_string()))
        .collect();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let a = base.letter(&names[i]).unwrap();
            let b = base.letter(&names[j]).unwrap();
            if !base.independent(a, b) && rng.gen_bool(0.5) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let finer = IndependenceAlphabet::new(&names, &pairs).expect("valid refinement");
    (base, finer)
}
