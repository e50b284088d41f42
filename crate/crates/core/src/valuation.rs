//! Valuations on concurrent systems: per-state letter weights extended to
//! traces by the chain rule, their per-state Möbius transforms, and the
//! probabilistic-valuation test.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::alphabet::Letter;
use crate::clique::{enumerate_cliques, Clique};
use crate::error::{Error, Result, ValuationViolation};
use crate::rat::{format_rational, parse_rational};
use crate::system::{ConcurrentSystem, StateId};
use crate::trace::Trace;

/// Nonnegative exact weights on (state, letter) pairs. Valid valuations
/// vanish on disabled letters and satisfy the commutation consistency that
/// makes the chain-rule extension to traces well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    n_letters: usize,
    weights: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct ValuationJson {
    weights: Vec<(String, String, String)>,
}

impl Valuation {
    /// Validates weights against a system. Every reported violation names
    /// the offending state and letters.
    pub fn new(
        sys: &ConcurrentSystem,
        weights: &BTreeMap<(StateId, Letter), BigRational>,
    ) -> Result<Self> {
        let n_letters = sys.alphabet().len();
        let mut table = vec![BigRational::zero(); sys.n_states() * n_letters];
        let mut violations = Vec::new();
        for (&(s, l), w) in weights {
            if w.is_negative() {
                violations.push(ValuationViolation::Negative {
                    state: sys.state_name(s).to_string(),
                    letter: sys.alphabet().name(l).to_string(),
                    value: format_rational(w),
                });
                continue;
            }
            if sys.step(Some(s), l).is_none() && !w.is_zero() {
                violations.push(ValuationViolation::WeightOnDisabled {
                    state: sys.state_name(s).to_string(),
                    letter: sys.alphabet().name(l).to_string(),
                    value: format_rational(w),
                });
                continue;
            }
            table[s.index() * n_letters + l.index()] = w.clone();
        }
        let candidate = Valuation { n_letters, weights: table };
        // chain-rule consistency: f_α(a)·f_{α·a}(b) = f_α(b)·f_{α·b}(a)
        // for every independent pair enabled at α
        for s in sys.state_ids() {
            for (a, b) in sys.alphabet().independent_pairs() {
                let (sa, sb) = (sys.step(Some(s), a), sys.step(Some(s), b));
                let (Some(sa), Some(sb)) = (sa, sb) else { continue };
                let lhs = candidate.weight(s, a) * candidate.weight(sa, b);
                let rhs = candidate.weight(s, b) * candidate.weight(sb, a);
                if lhs != rhs {
                    violations.push(ValuationViolation::CommutationInconsistency {
                        state: sys.state_name(s).to_string(),
                        a: sys.alphabet().name(a).to_string(),
                        b: sys.alphabet().name(b).to_string(),
                        lhs: format_rational(&lhs),
                        rhs: format_rational(&rhs),
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(candidate)
        } else {
            Err(Error::InvalidValuation(violations))
        }
    }

    /// The dominant valuation: weight 1 on every enabled letter.
    pub fn dominant(sys: &ConcurrentSystem) -> Self {
        let n_letters = sys.alphabet().len();
        let mut table = vec![BigRational::zero(); sys.n_states() * n_letters];
        for s in sys.state_ids() {
            for l in sys.enabled_letters(s) {
                table[s.index() * n_letters + l.index()] = BigRational::one();
            }
        }
        Valuation { n_letters, weights: table }
    }

    pub fn weight(&self, s: StateId, l: Letter) -> &BigRational {
        &self.weights[s.index() * self.n_letters + l.index()]
    }

    /// f_α(x): the product of letter weights along any linearization,
    /// following the action; 0 as soon as the sink is reached.
    pub fn evaluate(&self, sys: &ConcurrentSystem, state: StateId, x: &Trace) -> BigRational {
        let mut cur = state;
        let mut acc = BigRational::one();
        for l in x.word() {
            acc *= self.weight(cur, l);
            match sys.step(Some(cur), l) {
                Some(next) => cur = next,
                None => return BigRational::zero(),
            }
            if acc.is_zero() {
                return BigRational::zero();
            }
        }
        acc
    }

    pub fn to_json_value(&self, sys: &ConcurrentSystem) -> serde_json::Value {
        let mut rows = Vec::new();
        for s in sys.state_ids() {
            for l in sys.alphabet().letters() {
                let w = self.weight(s, l);
                if !w.is_zero() {
                    rows.push((
                        sys.state_name(s).to_string(),
                        sys.alphabet().name(l).to_string(),
                        format_rational(w),
                    ));
                }
            }
        }
        serde_json::to_value(ValuationJson { weights: rows }).expect("valuation serializes")
    }

    pub fn from_json_value(sys: &ConcurrentSystem, v: &serde_json::Value) -> Result<Self> {
        let parsed: ValuationJson = serde_json::from_value(v.clone())?;
        let mut weights = BTreeMap::new();
        for (state, letter, value) in &parsed.weights {
            let s = sys.state(state)?;
            let l = sys.alphabet().letter(letter)?;
            if weights.insert((s, l), parse_rational(value)?).is_some() {
                return Err(Error::DuplicateAction {
                    state: state.clone(),
                    letter: letter.clone(),
                });
            }
        }
        Valuation::new(sys, &weights)
    }

    pub fn from_json(sys: &ConcurrentSystem, s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        Self::from_json_value(sys, &v)
    }
}

/// The per-state Möbius transforms h_α of a valuation, tabulated on the
/// full clique set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMobius {
    tables: Vec<BTreeMap<Clique, BigRational>>,
}

impl StateMobius {
    pub fn get(&self, s: StateId, c: &Clique) -> &BigRational {
        &self.tables[s.index()][c]
    }

    pub fn table(&self, s: StateId) -> &BTreeMap<Clique, BigRational> {
        &self.tables[s.index()]
    }
}

/// h_α(c) = Σ_{c′ ⊇ c} (−1)^{|c′|−|c|} f_α(c′) for every state α.
pub fn mobius_of_valuation(sys: &ConcurrentSystem, val: &Valuation) -> StateMobius {
    let cliques = enumerate_cliques(sys.alphabet());
    let mut tables = Vec::with_capacity(sys.n_states());
    for s in sys.state_ids() {
        let f: Vec<BigRational> = cliques
            .iter()
            .map(|c| val.evaluate(sys, s, &Trace::clique(sys.alphabet().clone(), c.clone())))
            .collect();
        let mut table = BTreeMap::new();
        for c in cliques.iter() {
            let mut acc = BigRational::zero();
            for (j, c2) in cliques.iter().enumerate() {
                if c.is_subset(c2) {
                    if (c2.len() - c.len()) % 2 == 0 {
                        acc += &f[j];
                    } else {
                        acc -= &f[j];
                    }
                }
            }
            table.insert(c.clone(), acc);
        }
        tables.push(table);
    }
    StateMobius { tables }
}

/// One failed condition of the probabilistic-valuation criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilisticViolation {
    pub state: StateId,
    pub clique: Clique,
    pub value: BigRational,
}

/// Exact check of the criterion: h_α(ε) = 0 and h_α ≥ 0 on nonempty
/// cliques, at every state. Returns all violations.
pub fn probabilistic_violations(
    sys: &ConcurrentSystem,
    mobius: &StateMobius,
) -> Vec<ProbabilisticViolation> {
    let mut out = Vec::new();
    for s in sys.state_ids() {
        for (c, v) in mobius.table(s) {
            let bad = if c.is_empty() { !v.is_zero() } else { v.is_negative() };
            if bad {
                out.push(ProbabilisticViolation {
                    state: s,
                    clique: c.clone(),
                    value: v.clone(),
                });
            }
        }
    }
    out
}

pub fn is_probabilistic(sys: &ConcurrentSystem, val: &Valuation) -> bool {
    probabilistic_violations(sys, &mobius_of_valuation(sys, val)).is_empty()
}

/// A valuation together with its Möbius tables, certified probabilistic at
/// construction. Chain building and sampling require this proof.
#[derive(Debug, Clone)]
pub struct ProbabilisticValuation {
    valuation: Valuation,
    mobius: StateMobius,
}

impl ProbabilisticValuation {
    pub fn try_new(sys: &ConcurrentSystem, valuation: Valuation) -> Result<Self> {
        let mobius = mobius_of_valuation(sys, &valuation);
        let violations = probabilistic_violations(sys, &mobius);
        if let Some(v) = violations.first() {
            return Err(Error::NotProbabilistic {
                state: sys.state_name(v.state).to_string(),
                clique: v.clique.render(sys.alphabet()),
                value: format_rational(&v.value),
            });
        }
        Ok(ProbabilisticValuation { valuation, mobius })
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn mobius(&self) -> &StateMobius {
        &self.mobius
    }

    /// ν_α(↑x) = f_α(x): the measure of the visual cylinder above x.
    pub fn cylinder_probability(
        &self,
        sys: &ConcurrentSystem,
        state: StateId,
        x: &Trace,
    ) -> BigRational {
        self.valuation.evaluate(sys, state, x)
    }
}
