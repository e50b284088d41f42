//! Shared example monoids and systems used in tests, docs and benches.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::alphabet::IndependenceAlphabet;
use crate::rat::parse_rational;
use crate::system::ConcurrentSystem;
use crate::valuation::Valuation;

fn table(rows: &[(&str, &str, &str)]) -> Vec<(String, String, String)> {
    rows.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect()
}

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// ⟨a,b,c,d | ad=da, bd=db⟩.
pub fn m1() -> Arc<IndependenceAlphabet> {
    IndependenceAlphabet::new(&["a", "b", "c", "d"], &[("a", "d"), ("b", "d")])
        .expect("valid alphabet")
}

/// Five letters a0..a4 with (ai,aj) independent iff |i−j| ≥ 2.
pub fn m2() -> Arc<IndependenceAlphabet> {
    let names = ["a0", "a1", "a2", "a3", "a4"];
    let mut pairs = Vec::new();
    for i in 0..5usize {
        for j in i + 2..5usize {
            pairs.push((names[i], names[j]));
        }
    }
    IndependenceAlphabet::new(&names, &pairs).expect("valid alphabet")
}

/// The running example: M1 acting on two states, obtained from the 1-safe
/// net with markings α0 = {A,C} and α1 = {B,C}.
pub fn sys_a() -> ConcurrentSystem {
    ConcurrentSystem::new(
        m1(),
        &strings(&["α0", "α1"]),
        &table(&[
            ("α0", "a", "α0"),
            ("α0", "b", "α1"),
            ("α0", "d", "α0"),
            ("α1", "c", "α0"),
            ("α1", "d", "α1"),
        ]),
    )
    .expect("valid system")
}

/// Irreducible deterministic system on nine states over letters a0..a3 with
/// (ai,aj) independent iff |i−j| ≥ 2.
pub fn sys_b() -> ConcurrentSystem {
    let names = ["a0", "a1", "a2", "a3"];
    let mut pairs = Vec::new();
    for i in 0..4usize {
        for j in i + 2..4usize {
            pairs.push((names[i], names[j]));
        }
    }
    let alphabet = IndependenceAlphabet::new(&names, &pairs).expect("valid alphabet");
    ConcurrentSystem::new(
        alphabet,
        &strings(&["0", "1", "2", "3", "4", "5", "6", "7", "8"]),
        &table(&[
            ("0", "a0", "1"),
            ("0", "a2", "2"),
            ("1", "a2", "3"),
            ("2", "a0", "3"),
            ("2", "a3", "5"),
            ("3", "a1", "4"),
            ("3", "a3", "6"),
            ("4", "a3", "7"),
            ("5", "a0", "6"),
            ("6", "a1", "7"),
            ("7", "a2", "8"),
            ("8", "a1", "0"),
        ]),
    )
    .expect("valid system")
}

/// Deterministic but not irreducible: a—b dependent, c independent of both,
/// four states α0, α1, β0, β1.
pub fn sys_c() -> ConcurrentSystem {
    let alphabet = IndependenceAlphabet::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")])
        .expect("valid alphabet");
    ConcurrentSystem::new(
        alphabet,
        &strings(&["α0", "α1", "β0", "β1"]),
        &table(&[
            ("α0", "a", "α1"),
            ("α0", "c", "β0"),
            ("α1", "b", "α0"),
            ("α1", "c", "β1"),
            ("β0", "a", "β1"),
            ("β1", "b", "β0"),
        ]),
    )
    .expect("valid system")
}

/// One state, every letter a self-loop: the free action of the monoid.
pub fn single_state(alphabet: Arc<IndependenceAlphabet>) -> ConcurrentSystem {
    let rows: Vec<(String, String, String)> = alphabet
        .letters()
        .map(|l| ("*".to_string(), alphabet.name(l).to_string(), "*".to_string()))
        .collect();
    ConcurrentSystem::new(alphabet, &strings(&["*"]), &rows).expect("valid system")
}

/// One state, nothing enabled.
pub fn trivial_system() -> ConcurrentSystem {
    ConcurrentSystem::new(m1(), &strings(&["s"]), &[]).expect("valid system")
}

/// The running-example valuation with parameters p = f_{α0}(a),
/// q = f_{α0}(b), s = f_{α0}(d) = f_{α1}(d), t = f_{α1}(c).
pub fn sys_a_valuation(
    sys: &ConcurrentSystem,
    p: &str,
    q: &str,
    s: &str,
    t: &str,
) -> crate::error::Result<Valuation> {
    let al = sys.alphabet();
    let a0 = sys.state("α0")?;
    let a1 = sys.state("α1")?;
    let mut weights = BTreeMap::new();
    weights.insert((a0, al.letter("a")?), parse_rational(p)?);
    weights.insert((a0, al.letter("b")?), parse_rational(q)?);
    weights.insert((a0, al.letter("d")?), parse_rational(s)?);
    weights.insert((a1, al.letter("c")?), parse_rational(t)?);
    weights.insert((a1, al.letter("d")?), parse_rational(s)?);
    Valuation::new(sys, &weights)
}

/// The one-parameter family of probabilistic valuations of [`sys_c`];
/// p = 1 is the dominant valuation.
pub fn sys_c_valuation(sys: &ConcurrentSystem, p: &str) -> crate::error::Result<Valuation> {
    let al = sys.alphabet();
    let mut weights = BTreeMap::new();
    for (state, letter, w) in [
        ("α0", "a", "1"),
        ("α0", "c", p),
        ("α1", "b", "1"),
        ("α1", "c", p),
        ("β0", "a", "1"),
        ("β1", "b", "1"),
    ] {
        weights.insert((sys.state(state)?, al.letter(letter)?), parse_rational(w)?);
    }
    Valuation::new(sys, &weights)
}

/// JSON document of the running-example net: places A, B, C; transitions
/// a: A→A, b: A→B, c: BC→AC, d: C→C; initial marking {A,C}.
pub fn fig2_net_json() -> serde_json::Value {
    serde_json::json!({
        "places": ["A", "B", "C"],
        "transitions": {
            "a": {"pre": ["A"], "post": ["A"]},
            "b": {"pre": ["A"], "post": ["B"]},
            "c": {"pre": ["B", "C"], "post": ["A", "C"]},
            "d": {"pre": ["C"], "post": ["C"]}
        },
        "marking": ["A", "C"]
    })
}
