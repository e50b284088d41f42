//! Concurrent systems: a trace monoid acting on a finite state set with an
//! absorbing sink, validated for commutation consistency.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alphabet::{IndependenceAlphabet, Letter};
use crate::clique::{enumerate_cliques, Clique};
use crate::error::{Error, Result};
use crate::trace::Trace;

/// Index of a state inside its system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite state set with a total action of the trace monoid into
/// states-or-sink. `None` is the sink ⊥; it absorbs and is excluded from
/// all matrix indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrentSystem {
    alphabet: Arc<IndependenceAlphabet>,
    states: Vec<String>,
    /// action[state * n_letters + letter]
    action: Vec<Option<StateId>>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    alphabet: serde_json::Value,
    states: Vec<String>,
    action: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    markings: Option<BTreeMap<String, Vec<String>>>,
}

impl ConcurrentSystem {
    /// Validates and builds a system from a partial action table; omitted
    /// (state, letter) pairs act as the sink. Rejects duplicate entries and
    /// tables where some independent pair fails α·(ab) = α·(ba).
    pub fn new(
        alphabet: Arc<IndependenceAlphabet>,
        states: &[String],
        table: &[(String, String, String)],
    ) -> Result<Self> {
        let mut names = states.to_vec();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateState(w[0].clone()));
            }
        }
        let n_letters = alphabet.len();
        let mut sys = ConcurrentSystem {
            alphabet,
            states: states.to_vec(),
            action: vec![None; states.len() * n_letters],
        };
        let mut defined = vec![false; states.len() * n_letters];
        for (src, letter, dst) in table {
            let s = sys.state(src)?;
            let l = sys.alphabet.letter(letter)?;
            let d = sys.state(dst)?;
            let slot = s.index() * n_letters + l.index();
            if defined[slot] {
                return Err(Error::DuplicateAction {
                    state: src.clone(),
                    letter: letter.clone(),
                });
            }
            defined[slot] = true;
            sys.action[slot] = Some(d);
        }
        sys.check_commutation()?;
        Ok(sys)
    }

    fn check_commutation(&self) -> Result<()> {
        for s in self.state_ids() {
            for (a, b) in self.alphabet.independent_pairs() {
                let ab = self.step(Some(s), a).and_then(|m| self.step(Some(m), b).map(|_| ()));
                let left = self.step(Some(s), a).and_then(|m| self.step(Some(m), b));
                let right = self.step(Some(s), b).and_then(|m| self.step(Some(m), a));
                let _ = ab;
                if left != right {
                    let show = |t: Option<StateId>| match t {
                        Some(x) => self.states[x.index()].clone(),
                        None => "⊥".to_string(),
                    };
                    return Err(Error::CommutationViolation {
                        state: self.states[s.index()].clone(),
                        a: self.alphabet.name(a).to_string(),
                        b: self.alphabet.name(b).to_string(),
                        left: show(left),
                        right: show(right),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Arc<IndependenceAlphabet> {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// One letter of the action; `None` is the absorbing sink.
    pub fn step(&self, state: Option<StateId>, letter: Letter) -> Option<StateId> {
        let s = state?;
        self.action[s.index() * self.alphabet.len() + letter.index()]
    }

    /// α·x by folding any linearization; the result is independent of the
    /// order by commutation consistency.
    pub fn act(&self, state: StateId, x: &Trace) -> Option<StateId> {
        let mut cur = Some(state);
        for l in x.word() {
            cur = self.step(cur, l);
            if cur.is_none() {
                return None;
            }
        }
        cur
    }

    pub fn act_clique(&self, state: StateId, c: &Clique) -> Option<StateId> {
        let mut cur = Some(state);
        for l in c.iter() {
            cur = self.step(cur, l);
        }
        cur
    }

    /// Σ_α: the letters enabled at a state.
    pub fn enabled_letters(&self, state: StateId) -> Vec<Letter> {
        self.alphabet
            .letters()
            .filter(|&l| self.step(Some(state), l).is_some())
            .collect()
    }

    /// 𝒞_α: cliques c with α·c ≠ ⊥, in canonical clique order (ε included).
    pub fn enabled_cliques(&self, state: StateId) -> Vec<Clique> {
        enumerate_cliques(&self.alphabet)
            .into_iter()
            .filter(|c| self.act_clique(state, c).is_some())
            .collect()
    }

    /// 𝔠_α: nonempty enabled cliques.
    pub fn enabled_nonempty_cliques(&self, state: StateId) -> Vec<Clique> {
        self.enabled_cliques(state).into_iter().filter(|c| !c.is_empty()).collect()
    }

    /// True iff no letter is enabled at any state.
    pub fn is_trivial(&self) -> bool {
        self.state_ids().all(|s| self.enabled_letters(s).is_empty())
    }

    /// All executions from α of exactly length n, each with its terminal
    /// state, in canonical order.
    pub fn executions_of_length(&self, state: StateId, n: usize) -> Vec<(Trace, StateId)> {
        let mut level: BTreeMap<Trace, StateId> = BTreeMap::new();
        level.insert(Trace::empty(self.alphabet.clone()), state);
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (x, end) in &level {
                for l in self.alphabet.letters() {
                    if let Some(target) = self.step(Some(*end), l) {
                        let mut y = x.clone();
                        y.push_letter(l);
                        next.insert(y, target);
                    }
                }
            }
            level = next;
        }
        level.into_iter().collect()
    }

    /// All executions from α of length at most n.
    pub fn executions_up_to(&self, state: StateId, n: usize) -> Vec<(Trace, StateId)> {
        let mut out = Vec::new();
        let mut level: BTreeMap<Trace, StateId> = BTreeMap::new();
        level.insert(Trace::empty(self.alphabet.clone()), state);
        out.extend(level.iter().map(|(t, s)| (t.clone(), *s)));
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (x, end) in &level {
                for l in self.alphabet.letters() {
                    if let Some(target) = self.step(Some(*end), l) {
                        let mut y = x.clone();
                        y.push_letter(l);
                        next.insert(y, target);
                    }
                }
            }
            out.extend(next.iter().map(|(t, s)| (t.clone(), *s)));
            level = next;
        }
        out
    }

    /// Counts of executions from each state to each state, for every length
    /// up to n, by direct enumeration. Oracle counterpart of the growth
    /// matrix inversion.
    pub fn execution_counts(&self, n: usize) -> Vec<Vec<Vec<usize>>> {
        let ns = self.n_states();
        let mut out = vec![vec![vec![0usize; ns]; ns]; n + 1];
        for s in self.state_ids() {
            let mut level: BTreeMap<Trace, StateId> = BTreeMap::new();
            level.insert(Trace::empty(self.alphabet.clone()), s);
            out[0][s.index()][s.index()] = 1;
            for len in 1..=n {
                let mut next = BTreeMap::new();
                for (x, end) in &level {
                    for l in self.alphabet.letters() {
                        if let Some(target) = self.step(Some(*end), l) {
                            let mut y = x.clone();
                            y.push_letter(l);
                            next.insert(y, target);
                        }
                    }
                }
                for (_, end) in &next {
                    out[len][s.index()][end.index()] += 1;
                }
                level = next;
            }
        }
        out
    }

    /// The system induced by removing one letter; states are unchanged.
    pub fn restrict(&self, remove: Letter) -> ConcurrentSystem {
        let keep: BTreeSet<Letter> =
            self.alphabet.letters().filter(|&l| l != remove).collect();
        self.restrict_to(&keep)
    }

    /// Restriction to an arbitrary subset of letters.
    pub fn restrict_to(&self, keep: &BTreeSet<Letter>) -> ConcurrentSystem {
        let alphabet = self.alphabet.restrict_to(keep);
        let mut action = vec![None; self.states.len() * alphabet.len()];
        for s in self.state_ids() {
            for (new_idx, &old) in keep.iter().enumerate() {
                action[s.index() * alphabet.len() + new_idx] = self.step(Some(s), old);
            }
        }
        ConcurrentSystem { alphabet, states: self.states.clone(), action }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        self.to_json_value_with_markings(None)
    }

    /// System JSON with an optional marking map attached, as emitted for
    /// compiled nets; the extra key is ignored when parsing back.
    pub fn to_json_value_with_markings(
        &self,
        markings: Option<BTreeMap<String, Vec<String>>>,
    ) -> serde_json::Value {
        let mut action = Vec::new();
        for s in self.state_ids() {
            for l in self.alphabet.letters() {
                if let Some(d) = self.step(Some(s), l) {
                    action.push((
                        self.states[s.index()].clone(),
                        self.alphabet.name(l).to_string(),
                        self.states[d.index()].clone(),
                    ));
                }
            }
        }
        serde_json::to_value(SystemJson {
            alphabet: self.alphabet.to_json_value(),
            states: self.states.clone(),
            action,
            markings,
        })
        .expect("system serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let parsed: SystemJson = serde_json::from_value(v.clone())?;
        let alphabet = IndependenceAlphabet::from_json_value(&parsed.alphabet)?;
        ConcurrentSystem::new(alphabet, &parsed.states, &parsed.action)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        Self::from_json_value(&v)
    }
}
