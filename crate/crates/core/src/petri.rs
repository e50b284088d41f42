//! 1-safe Petri nets compiled into concurrent systems: letters are
//! transitions, independence is resource disjointness, states are the
//! reachable markings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::alphabet::IndependenceAlphabet;
use crate::error::{Error, Result};
use crate::system::ConcurrentSystem;

/// Index of a place inside its net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlaceId(usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub pre: BTreeSet<PlaceId>,
    pub post: BTreeSet<PlaceId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetriNet {
    places: Vec<String>,
    transitions: BTreeMap<String, Transition>,
    initial: BTreeSet<PlaceId>,
}

#[derive(Deserialize)]
struct TransitionJson {
    #[serde(default)]
    pre: Vec<String>,
    #[serde(default)]
    post: Vec<String>,
}

/// Transition map that rejects duplicate keys instead of silently keeping
/// the last entry.
struct TransitionsJson(Vec<(String, TransitionJson)>);

impl<'de> Deserialize<'de> for TransitionsJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = TransitionsJson;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map of transitions")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut out: Vec<(String, TransitionJson)> = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, TransitionJson>()? {
                    if out.iter().any(|(name, _)| name == &k) {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate transition `{k}`"
                        )));
                    }
                    out.push((k, v));
                }
                Ok(TransitionsJson(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
struct NetJson {
    places: Vec<String>,
    transitions: TransitionsJson,
    #[serde(default)]
    marking: Vec<String>,
}

impl PetriNet {
    pub fn new(
        places: &[String],
        transitions: &[(String, Vec<String>, Vec<String>)],
        marking: &[String],
    ) -> Result<Self> {
        let mut names = places.to_vec();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePlace(w[0].clone()));
            }
        }
        let net_places = names;
        let place = |name: &str| -> Result<PlaceId> {
            net_places
                .binary_search_by(|p| p.as_str().cmp(name))
                .map(PlaceId)
                .map_err(|_| Error::UnknownPlace(name.to_string()))
        };
        let mut net_transitions = BTreeMap::new();
        for (name, pre, post) in transitions {
            let pre: Result<BTreeSet<PlaceId>> = pre.iter().map(|p| place(p)).collect();
            let post: Result<BTreeSet<PlaceId>> = post.iter().map(|p| place(p)).collect();
            if net_transitions
                .insert(name.clone(), Transition { pre: pre?, post: post? })
                .is_some()
            {
                return Err(Error::DuplicateTransition(name.clone()));
            }
        }
        let initial: Result<BTreeSet<PlaceId>> = marking.iter().map(|p| place(p)).collect();
        Ok(PetriNet { places: net_places, transitions: net_transitions, initial: initial? })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: NetJson = serde_json::from_str(s)?;
        let transitions: Vec<(String, Vec<String>, Vec<String>)> = parsed
            .transitions
            .0
            .into_iter()
            .map(|(name, t)| (name, t.pre, t.post))
            .collect();
        PetriNet::new(&parsed.places, &transitions, &parsed.marking)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        Self::from_json(&v.to_string())
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &BTreeMap<String, Transition> {
        &self.transitions
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0]
    }

    fn marking_name(&self, m: &BTreeSet<PlaceId>) -> String {
        let names: Vec<&str> = m.iter().map(|&p| self.place_name(p)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The resource set •t ∪ t• of a transition.
    fn resources(&self, t: &Transition) -> BTreeSet<PlaceId> {
        t.pre.union(&t.post).copied().collect()
    }

    /// Compiles the net: transitions become letters, two transitions are
    /// independent iff their resource sets are disjoint, and the states are
    /// the markings reachable from the initial one by breadth-first firing
    /// in lexicographic transition order. Token doubling is an error.
    ///
    /// Returns the system and the map from state names to marking contents.
    pub fn to_concurrent_system(
        &self,
    ) -> Result<(ConcurrentSystem, BTreeMap<String, Vec<String>>)> {
        let names: Vec<&str> = self.transitions.keys().map(|s| s.as_str()).collect();
        let mut pairs = Vec::new();
        let list: Vec<(&String, &Transition)> = self.transitions.iter().collect();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let ri = self.resources(list[i].1);
                let rj = self.resources(list[j].1);
                if ri.intersection(&rj).next().is_none() {
                    pairs.push((list[i].0.as_str(), list[j].0.as_str()));
                }
            }
        }
        let alphabet = IndependenceAlphabet::new(&names, &pairs)?;

        // breadth-first exploration of reachable markings
        let mut order: Vec<BTreeSet<PlaceId>> = vec![self.initial.clone()];
        let mut seen: BTreeSet<BTreeSet<PlaceId>> = BTreeSet::new();
        seen.insert(self.initial.clone());
        let mut queue = VecDeque::from([self.initial.clone()]);
        let mut table: Vec<(String, String, String)> = Vec::new();
        while let Some(m) = queue.pop_front() {
            for (name, t) in &self.transitions {
                if !t.pre.is_subset(&m) {
                    continue;
                }
                let mut next: BTreeSet<PlaceId> =
                    m.difference(&t.pre).copied().collect();
                for &p in &t.post {
                    if !next.insert(p) {
                        return Err(Error::UnsafeNet {
                            marking: self.marking_name(&m),
                            transition: name.clone(),
                        });
                    }
                }
                table.push((self.marking_name(&m), name.clone(), self.marking_name(&next)));
                if seen.insert(next.clone()) {
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let state_names: Vec<String> = order.iter().map(|m| self.marking_name(m)).collect();
        let sys = ConcurrentSystem::new(alphabet, &state_names, &table)?;
        let markings = order
            .iter()
            .map(|m| {
                (
                    self.marking_name(m),
                    m.iter().map(|&p| self.place_name(p).to_string()).collect(),
                )
            })
            .collect();
        Ok((sys, markings))
    }
}
