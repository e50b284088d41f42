//! Deterministic concurrent systems: the local-commutativity criterion,
//! lattice checks, the maximal execution T_α, boundary cardinality, and the
//! letter-exclusion property of first cliques.

use std::collections::BTreeSet;

use crate::alphabet::Letter;
use crate::clique::Clique;
use crate::error::{Error, Result};
use crate::system::{ConcurrentSystem, StateId};
use crate::trace::{OmegaTrace, Trace};

/// Outcome of the determinism decision.
///
/// The letter criterion requires, at every state, that any two distinct
/// enabled letters are independent *and* jointly enabled. The second half
/// makes the criterion equivalent to the powerset property of 𝒞_α and to
/// the lattice property of M_α: independence alone admits systems where a
/// pair commutes but its clique is disabled, which are not deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcsVerdict {
    pub is_dcs: bool,
    /// First failing triple (α, a, b) of the letter criterion.
    pub witness: Option<(StateId, Letter, Letter)>,
    /// Whether 𝒞_α is the full powerset of Σ_α at every state; provably
    /// equal to `is_dcs`, recomputed independently as a cross-check.
    pub powerset_check: bool,
    /// Depth-bounded common-upper-bound test, recorded for the report.
    pub bounded_lattice_check: bool,
    /// The maximum clique c_α = Σ_α of each state; present only on a DCS.
    pub max_cliques: Option<Vec<Clique>>,
}

/// Letter criterion: all distinct a, b ∈ Σ_α independent and α·(ab) ≠ ⊥.
fn letter_criterion(sys: &ConcurrentSystem) -> Option<(StateId, Letter, Letter)> {
    for s in sys.state_ids() {
        let enabled = sys.enabled_letters(s);
        for (i, &a) in enabled.iter().enumerate() {
            for &b in &enabled[i + 1..] {
                if !sys.alphabet().independent(a, b) {
                    return Some((s, a, b));
                }
                let joint = sys.step(Some(s), a).and_then(|m| sys.step(Some(m), b));
                if joint.is_none() {
                    return Some((s, a, b));
                }
            }
        }
    }
    None
}

/// 𝒞_α = P(Σ_α) at every state.
fn powerset_criterion(sys: &ConcurrentSystem) -> bool {
    sys.state_ids().all(|s| {
        let enabled = sys.enabled_letters(s);
        sys.enabled_cliques(s).len() == 1usize << enabled.len()
    })
}

pub fn is_deterministic(sys: &ConcurrentSystem) -> DcsVerdict {
    let witness = letter_criterion(sys);
    let powerset_check = powerset_criterion(sys);
    let is_dcs = witness.is_none();
    assert_eq!(
        is_dcs, powerset_check,
        "letter and powerset criteria are equivalent"
    );
    let bounded_lattice_check =
        sys.state_ids().all(|s| bounded_lub_check(sys, s, 3).is_none());
    let max_cliques = is_dcs.then(|| {
        sys.state_ids()
            .map(|s| {
                Clique::new(sys.alphabet(), &sys.enabled_letters(s))
                    .expect("enabled letters of a DCS state form a clique")
            })
            .collect()
    });
    DcsVerdict {
        is_dcs,
        witness,
        powerset_check,
        bounded_lattice_check,
        max_cliques,
    }
}

/// Exhaustive test that every pair of executions of length ≤ depth from α
/// has a common upper bound in M_α; returns the first counterexample pair.
/// Pairs are scanned by increasing combined length, so a failure exits
/// before the quadratic scan grows; a state passing the scan has a
/// deterministic cone with polynomially many executions.
pub fn bounded_lub_check(
    sys: &ConcurrentSystem,
    state: StateId,
    depth: usize,
) -> Option<(Trace, Trace)> {
    let mut by_len: Vec<Vec<Trace>> = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        by_len.push(sys.executions_of_length(state, n).into_iter().map(|(t, _)| t).collect());
    }
    for total in 0..=2 * depth {
        for i in 0..=total.min(depth) {
            let j = total - i;
            if j > depth || j < i {
                continue;
            }
            for x in &by_len[i] {
                for y in &by_len[j] {
                    let ok = match x.lub(y).expect("same alphabet") {
                        Some(z) => sys.act(state, &z).is_some(),
                        None => false,
                    };
                    if !ok {
                        return Some((x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    None
}

/// The maximal execution from a state of a DCS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaximalExecution {
    /// Some Σ_{α_i} was empty: the orbit halts after finitely many cliques.
    Finite(Trace),
    /// The state orbit revisited a state: prefix·cycle^ω.
    Periodic(OmegaTrace),
}

impl MaximalExecution {
    /// The first `n` cliques as a finite trace.
    pub fn unfold(&self, n: usize) -> Trace {
        match self {
            MaximalExecution::Finite(t) => {
                let cliques = t.cliques();
                let take = cliques.len().min(n);
                let mut out = Trace::empty(t.alphabet().clone());
                for c in &cliques[..take] {
                    out = out
                        .concat(&Trace::clique(t.alphabet().clone(), c.clone()))
                        .expect("same alphabet");
                }
                out
            }
            MaximalExecution::Periodic(om) => om.unfold(n),
        }
    }

    /// Whether the finite trace x divides the maximal execution.
    pub fn dominates(&self, x: &Trace) -> Result<bool> {
        match self {
            MaximalExecution::Finite(t) => x.leq(t),
            MaximalExecution::Periodic(om) => om.divides(x),
        }
    }

    pub fn render(&self) -> String {
        match self {
            MaximalExecution::Finite(t) => t.render(),
            MaximalExecution::Periodic(om) => om.render(),
        }
    }
}

/// T_α: fire the full enabled clique c_{α_i} repeatedly. States are finite
/// so the orbit either halts on an empty clique or becomes periodic.
pub fn maximal_execution(sys: &ConcurrentSystem, state: StateId) -> Result<MaximalExecution> {
    let verdict = is_deterministic(sys);
    if let Some((s, a, b)) = verdict.witness {
        return Err(Error::NotDeterministic {
            state: sys.state_name(s).to_string(),
            a: sys.alphabet().name(a).to_string(),
            b: sys.alphabet().name(b).to_string(),
        });
    }
    let max_cliques = verdict.max_cliques.expect("DCS has max cliques");
    let mut cliques: Vec<Clique> = Vec::new();
    let mut visited: Vec<StateId> = vec![state];
    let mut cur = state;
    loop {
        let c = max_cliques[cur.index()].clone();
        if c.is_empty() {
            return Ok(MaximalExecution::Finite(cliques_to_trace(sys, &cliques)));
        }
        let next = sys.act_clique(cur, &c).expect("maximum clique is enabled");
        cliques.push(c);
        if let Some(pos) = visited.iter().position(|&v| v == next) {
            let prefix = cliques[..pos].to_vec();
            let cycle = cliques[pos..].to_vec();
            return Ok(MaximalExecution::Periodic(OmegaTrace::new(
                sys.alphabet().clone(),
                prefix,
                cycle,
            )?));
        }
        visited.push(next);
        cur = next;
    }
}

fn cliques_to_trace(sys: &ConcurrentSystem, cliques: &[Clique]) -> Trace {
    let mut out = Trace::empty(sys.alphabet().clone());
    for c in cliques {
        out = out
            .concat(&Trace::clique(sys.alphabet().clone(), c.clone()))
            .expect("same alphabet");
    }
    out
}

/// Cardinality classification of the set of infinite executions from a
/// state, with the justification that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryCardinality {
    /// M_α is finite, so there are no infinite executions.
    Empty,
    /// The system is deterministic: at most countably many.
    Countable,
    /// Two loops with distinct dependent first letters generate a free
    /// submonoid of M_α.
    Uncountable { at: StateId, loop_a: Trace, loop_b: Trace },
    /// None of the covered cases applies.
    Unknown,
}

/// Searches the states reachable from α for a pair of loops x_a = a·x,
/// x_b = b·y with distinct dependent first letters; such a pair generates a
/// free submonoid, which makes the boundary uncountable.
pub fn free_submonoid_witness(
    sys: &ConcurrentSystem,
    state: StateId,
) -> Option<(StateId, Trace, Trace)> {
    let reachable = reachable_states(sys, state);
    for &s in &reachable {
        let enabled = sys.enabled_letters(s);
        for (i, &a) in enabled.iter().enumerate() {
            for &b in &enabled[i + 1..] {
                if sys.alphabet().independent(a, b) {
                    continue;
                }
                let (Some(sa), Some(sb)) = (sys.step(Some(s), a), sys.step(Some(s), b)) else {
                    continue;
                };
                let (Some(back_a), Some(back_b)) =
                    (letter_path(sys, sa, s), letter_path(sys, sb, s))
                else {
                    continue;
                };
                let mut wa = vec![a];
                wa.extend(back_a);
                let mut wb = vec![b];
                wb.extend(back_b);
                return Some((
                    s,
                    Trace::from_word(sys.alphabet().clone(), &wa),
                    Trace::from_word(sys.alphabet().clone(), &wb),
                ));
            }
        }
    }
    None
}

fn reachable_states(sys: &ConcurrentSystem, from: StateId) -> Vec<StateId> {
    let mut seen = vec![false; sys.n_states()];
    let mut order = vec![from];
    seen[from.index()] = true;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for l in sys.alphabet().letters() {
            if let Some(t) = sys.step(Some(s), l) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    order.push(t);
                }
            }
        }
    }
    order
}

/// Shortest letter path between two states, breadth-first in letter order.
fn letter_path(sys: &ConcurrentSystem, from: StateId, to: StateId) -> Option<Vec<Letter>> {
    if from == to {
        return Some(vec![]);
    }
    let mut paths: Vec<Option<Vec<Letter>>> = vec![None; sys.n_states()];
    paths[from.index()] = Some(vec![]);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for l in sys.alphabet().letters() {
            if let Some(t) = sys.step(Some(s), l) {
                if paths[t.index()].is_none() {
                    let mut p = paths[s.index()].clone().unwrap();
                    p.push(l);
                    if t == to {
                        return Some(p);
                    }
                    paths[t.index()] = Some(p);
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Classification per the covered cases: finite ⇒ empty; deterministic ⇒
/// countable; a free-submonoid witness ⇒ uncountable; otherwise unknown.
/// Irreducible non-deterministic systems always yield a witness.
pub fn boundary_cardinality(sys: &ConcurrentSystem, state: StateId) -> BoundaryCardinality {
    if crate::analysis::classify_finiteness(sys, state).finite {
        return BoundaryCardinality::Empty;
    }
    if is_deterministic(sys).is_dcs {
        return BoundaryCardinality::Countable;
    }
    match free_submonoid_witness(sys, state) {
        Some((at, loop_a, loop_b)) => BoundaryCardinality::Uncountable { at, loop_a, loop_b },
        None => BoundaryCardinality::Unknown,
    }
}

/// Exhaustively verifies, over all executions from α of length ≤ depth
/// whose first clique is exactly `c`, that the letter `a` never occurs.
/// Requires a DCS, c ∈ 𝒞_α, a ∈ Σ_α and a ∉ c. A false return would
/// contradict the first-clique exclusion property and signals a bug.
pub fn lemma2_check(
    sys: &ConcurrentSystem,
    state: StateId,
    c: &Clique,
    a: Letter,
    depth: usize,
) -> Result<bool> {
    if !is_deterministic(sys).is_dcs {
        return Err(Error::Input("first-clique exclusion requires a deterministic system".into()));
    }
    if sys.act_clique(state, c).is_none() {
        return Err(Error::Input(format!(
            "clique {} is not enabled at {}",
            c.render(sys.alphabet()),
            sys.state_name(state)
        )));
    }
    if sys.step(Some(state), a).is_none() {
        return Err(Error::Input(format!(
            "letter {} is not enabled at {}",
            sys.alphabet().name(a),
            sys.state_name(state)
        )));
    }
    if c.contains(a) {
        return Err(Error::Input("the excluded letter must lie outside the clique".into()));
    }
    for (x, _) in sys.executions_up_to(state, depth) {
        if x.first_clique() == *c && x.contains_letter(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All admissible (state, clique, letter) triples of the exclusion check.
pub fn lemma2_admissible_triples(
    sys: &ConcurrentSystem,
) -> Vec<(StateId, Clique, Letter)> {
    let mut out = Vec::new();
    for s in sys.state_ids() {
        let enabled: BTreeSet<Letter> = sys.enabled_letters(s).into_iter().collect();
        for c in sys.enabled_nonempty_cliques(s) {
            for &a in &enabled {
                if !c.contains(a) {
                    out.push((s, c.clone(), a));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sys_b_is_deterministic() {
        let sys = fixtures::sys_b();
        let v = is_deterministic(&sys);
        assert!(v.is_dcs && v.powerset_check && v.bounded_lattice_check);
        let zero = sys.state("0").unwrap();
        let c0 = &v.max_cliques.as_ref().unwrap()[zero.index()];
        assert_eq!(c0.render(sys.alphabet()), "a0 a2");
    }

    #[test]
    fn sys_a_witness_is_first_conflicting_pair() {
        let sys = fixtures::sys_a();
        let v = is_deterministic(&sys);
        assert!(!v.is_dcs);
        let (s, a, b) = v.witness.unwrap();
        assert_eq!(sys.state_name(s), "α0");
        assert_eq!(sys.alphabet().name(a), "a");
        assert_eq!(sys.alphabet().name(b), "b");
        assert!(v.max_cliques.is_none());
    }

    #[test]
    fn sys_c_is_deterministic() {
        assert!(is_deterministic(&fixtures::sys_c()).is_dcs);
    }

    #[test]
    fn jointly_disabled_pair_is_not_deterministic() {
        // a, b independent and both enabled at s, but s·(ab) = ⊥: M_s is
        // not a lattice even though enabled letters commute
        let al = crate::alphabet::IndependenceAlphabet::new(&["a", "b"], &[("a", "b")]).unwrap();
        let states: Vec<String> = vec!["s".into(), "t".into()];
        let table: Vec<(String, String, String)> = vec![
            ("s".into(), "a".into(), "t".into()),
            ("s".into(), "b".into(), "t".into()),
        ];
        let sys = ConcurrentSystem::new(al, &states, &table).unwrap();
        let v = is_deterministic(&sys);
        assert!(!v.is_dcs);
        assert!(!v.powerset_check);
        assert!(!v.bounded_lattice_check);
        let s = sys.state("s").unwrap();
        assert!(bounded_lub_check(&sys, s, 1).is_some());
    }

    #[test]
    fn bounded_lub_examples() {
        let b = fixtures::sys_b();
        assert!(bounded_lub_check(&b, b.state("0").unwrap(), 5).is_none());

        let a = fixtures::sys_a();
        let a0 = a.state("α0").unwrap();
        let cx = bounded_lub_check(&a, a0, 1).unwrap();
        assert_eq!((cx.0.render(), cx.1.render()), ("a".into(), "b".into()));

        let t = fixtures::trivial_system();
        assert!(bounded_lub_check(&t, t.state_ids().next().unwrap(), 4).is_none());
    }

    #[test]
    fn maximal_execution_of_sys_b() {
        let sys = fixtures::sys_b();
        let t0 = maximal_execution(&sys, sys.state("0").unwrap()).unwrap();
        match &t0 {
            MaximalExecution::Periodic(om) => {
                assert!(om.prefix().is_empty());
                let cycle: Vec<String> =
                    om.cycle().iter().map(|c| c.render(sys.alphabet())).collect();
                assert_eq!(cycle, vec!["a0 a2", "a1 a3", "a2", "a1"]);
            }
            other => panic!("expected periodic, got {other:?}"),
        }
    }

    #[test]
    fn maximal_execution_of_sys_c() {
        let sys = fixtures::sys_c();
        let t = maximal_execution(&sys, sys.state("α0").unwrap()).unwrap();
        match &t {
            MaximalExecution::Periodic(om) => {
                let prefix: Vec<String> =
                    om.prefix().iter().map(|c| c.render(sys.alphabet())).collect();
                let cycle: Vec<String> =
                    om.cycle().iter().map(|c| c.render(sys.alphabet())).collect();
                assert_eq!(prefix, vec!["a c"]);
                assert_eq!(cycle, vec!["b", "a"]);
            }
            other => panic!("expected periodic, got {other:?}"),
        }
    }

    #[test]
    fn maximal_execution_halts_on_empty_enabled_set() {
        let al = crate::alphabet::IndependenceAlphabet::free(&["a"]).unwrap();
        let states: Vec<String> = vec!["s".into(), "t".into()];
        let table: Vec<(String, String, String)> =
            vec![("s".into(), "a".into(), "t".into())];
        let sys = ConcurrentSystem::new(al, &states, &table).unwrap();
        let t = maximal_execution(&sys, sys.state("s").unwrap()).unwrap();
        match &t {
            MaximalExecution::Finite(x) => assert_eq!(x.render(), "a"),
            other => panic!("expected finite, got {other:?}"),
        }
        let from_t = maximal_execution(&sys, sys.state("t").unwrap()).unwrap();
        match &from_t {
            MaximalExecution::Finite(x) => assert!(x.is_empty()),
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn maximal_execution_requires_dcs() {
        let sys = fixtures::sys_a();
        assert!(matches!(
            maximal_execution(&sys, sys.state("α0").unwrap()),
            Err(Error::NotDeterministic { .. })
        ));
    }

    #[test]
    fn maximal_execution_dominates_all_executions() {
        for sys in [fixtures::sys_b(), fixtures::sys_c()] {
            for s in sys.state_ids() {
                let t = maximal_execution(&sys, s).unwrap();
                for (x, _) in sys.executions_up_to(s, 6) {
                    assert!(t.dominates(&x).unwrap(), "{} from {}", x, sys.state_name(s));
                }
            }
        }
    }

    #[test]
    fn boundary_classification() {
        let b = fixtures::sys_b();
        for s in b.state_ids() {
            assert_eq!(boundary_cardinality(&b, s), BoundaryCardinality::Countable);
        }
        let a = fixtures::sys_a();
        let a0 = a.state("α0").unwrap();
        match boundary_cardinality(&a, a0) {
            BoundaryCardinality::Uncountable { at, loop_a, loop_b } => {
                assert_eq!(a.state_name(at), "α0");
                assert_eq!(loop_a.render(), "a");
                assert_eq!(loop_b.render(), "b | c");
                // both are loops at α0 with distinct dependent first letters
                assert_eq!(a.act(at, &loop_a), Some(at));
                assert_eq!(a.act(at, &loop_b), Some(at));
            }
            other => panic!("expected uncountable, got {other:?}"),
        }
        let t = fixtures::trivial_system();
        assert_eq!(
            boundary_cardinality(&t, t.state_ids().next().unwrap()),
            BoundaryCardinality::Empty
        );
    }

    #[test]
    fn first_clique_exclusion_on_fixtures() {
        let sys = fixtures::sys_b();
        let zero = sys.state("0").unwrap();
        let a0 = sys.alphabet().letter("a0").unwrap();
        let a2 = sys.alphabet().letter("a2").unwrap();
        let c = Clique::singleton(a2);
        assert!(lemma2_check(&sys, zero, &c, a0, 8).unwrap());
        // vacuous: no execution of positive length has first clique {a2}
        // and contains a0, but also every triple must verify
        for (s, c, a) in lemma2_admissible_triples(&sys) {
            assert!(lemma2_check(&sys, s, &c, a, 6).unwrap());
        }
    }

    #[test]
    fn lemma2_preconditions() {
        let b = fixtures::sys_b();
        let zero = b.state("0").unwrap();
        let a0 = b.alphabet().letter("a0").unwrap();
        let a1 = b.alphabet().letter("a1").unwrap();
        // a1 not enabled at 0
        assert!(lemma2_check(&b, zero, &Clique::singleton(a0), a1, 4).is_err());
        // letter inside the clique
        assert!(lemma2_check(&b, zero, &Clique::singleton(a0), a0, 4).is_err());
        // non-DCS host
        let a = fixtures::sys_a();
        let s = a.state("α0").unwrap();
        let la = a.alphabet().letter("a").unwrap();
        let lb = a.alphabet().letter("b").unwrap();
        assert!(lemma2_check(&a, s, &Clique::singleton(la), lb, 4).is_err());
    }
}
