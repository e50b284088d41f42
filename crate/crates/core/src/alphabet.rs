//! Alphabets with an independence relation.
//!
//! Letters are interned: an [`IndependenceAlphabet`] owns the sorted list of
//! letter names and every other type refers to letters by index. The
//! independence relation is symmetric and irreflexive; the dependence
//! relation is its complement and contains the diagonal.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite alphabet together with a symmetric irreflexive independence
/// relation. Letter names are stored sorted, so letter indices give a total
/// order that is stable across runs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndependenceAlphabet {
    letters: Vec<String>,
    /// Unordered independent pairs, stored as (min, max) index pairs.
    pairs: BTreeSet<(Letter, Letter)>,
    /// n×n adjacency matrix of the independence relation.
    matrix: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct AlphabetJson {
    letters: Vec<String>,
    #[serde(default)]
    independent: Vec<(String, String)>,
}

impl IndependenceAlphabet {
    /// Builds an alphabet from letter names and independent name pairs.
    /// Names are sorted and deduplication is an error; reflexive pairs are
    /// rejected; symmetry holds by construction.
    pub fn new<S: AsRef<str>>(letters: &[S], independent: &[(S, S)]) -> Result<Arc<Self>> {
        let mut names: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLetter(w[0].clone()));
            }
        }
        let n = names.len();
        let mut alphabet = IndependenceAlphabet {
            letters: names,
            pairs: BTreeSet::new(),
            matrix: vec![false; n * n],
        };
        for (a, b) in independent {
            let ia = alphabet.letter(a.as_ref())?;
            let ib = alphabet.letter(b.as_ref())?;
            if ia == ib {
                return Err(Error::ReflexivePair(a.as_ref().to_string()));
            }
            let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
            alphabet.pairs.insert((lo, hi));
            alphabet.matrix[ia.index() * n + ib.index()] = true;
            alphabet.matrix[ib.index() * n + ia.index()] = true;
        }
        Ok(Arc::new(alphabet))
    }

    /// Free monoid: no independent pairs.
    pub fn free<S: AsRef<str>>(letters: &[S]) -> Result<Arc<Self>> {
        Self::new(letters, &[])
    }

    /// Free commutative monoid: all distinct pairs independent.
    pub fn free_commutative<S: AsRef<str>>(letters: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let mut pairs = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
        Self::new(&names, &pairs)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(|i| Letter(i as u16))
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.letters[l.index()]
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.letters
            .binary_search_by(|x| x.as_str().cmp(name))
            .map(|i| Letter(i as u16))
            .map_err(|_| Error::UnknownLetter(name.to_string()))
    }

    /// True iff the two letters are distinct and independent (commute).
    pub fn independent(&self, a: Letter, b: Letter) -> bool {
        self.matrix[a.index() * self.letters.len() + b.index()]
    }

    /// True iff the letters are dependent; contains the diagonal.
    pub fn dependent(&self, a: Letter, b: Letter) -> bool {
        !self.independent(a, b)
    }

    pub fn independent_pairs(&self) -> impl Iterator<Item = (Letter, Letter)> + '_ {
        self.pairs.iter().copied()
    }

    /// Distinct dependent pairs (lo < hi), the edges of the Coxeter graph.
    pub fn dependent_pairs(&self) -> Vec<(Letter, Letter)> {
        let mut out = Vec::new();
        for i in 0..self.letters.len() {
            for j in i + 1..self.letters.len() {
                let (a, b) = (Letter(i as u16), Letter(j as u16));
                if self.dependent(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// True iff the independence relation of `self` is contained in the one
    /// of `other` (letter names must coincide).
    pub fn refines(&self, other: &IndependenceAlphabet) -> bool {
        self.letters == other.letters && self.pairs.is_subset(&other.pairs)
    }

    /// The dependence graph on letters, connected iff the monoid is
    /// irreducible. Alphabets with at most one letter count as connected.
    pub fn dependence_connected(&self) -> bool {
        let n = self.letters.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && !seen[j] && self.dependent(Letter(i as u16), Letter(j as u16)) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Restriction to a subset of letters, keeping the induced independence.
    pub fn restrict_to(&self, keep: &BTreeSet<Letter>) -> Arc<IndependenceAlphabet> {
        let names: Vec<String> = keep.iter().map(|&l| self.name(l).to_string()).collect();
        let mut pairs = Vec::new();
        for &a in keep {
            for &b in keep {
                if a < b && self.independent(a, b) {
                    pairs.push((self.name(a).to_string(), self.name(b).to_string()));
                }
            }
        }
        IndependenceAlphabet::new(&names, &pairs).expect("restriction of a valid alphabet")
    }

    /// Same letters, with all distinct pairs independent.
    pub fn commutative_closure(&self) -> Arc<IndependenceAlphabet> {
        IndependenceAlphabet::free_commutative(&self.letters).expect("valid alphabet")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let independent: Vec<(String, String)> = self
            .pairs
            .iter()
            .map(|&(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
            .collect();
        serde_json::to_value(AlphabetJson {
            letters: self.letters.clone(),
            independent,
        })
        .expect("alphabet serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Arc<Self>> {
        let parsed: AlphabetJson = serde_json::from_value(v.clone())?;
        let pairs: Vec<(&str, &str)> = parsed
            .independent
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let letters: Vec<&str> = parsed.letters.iter().map(|s| s.as_str()).collect();
        IndependenceAlphabet::new(&letters, &pairs)
    }

    pub fn from_json(s: &str) -> Result<Arc<Self>> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        Self::from_json_value(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1() -> Arc<IndependenceAlphabet> {
        IndependenceAlphabet::new(&["a", "b", "c", "d"], &[("a", "d"), ("b", "d")]).unwrap()
    }

    #[test]
    fn interning_and_lookup() {
        let al = m1();
        assert_eq!(al.len(), 4);
        assert_eq!(al.name(al.letter("c").unwrap()), "c");
        assert!(al.letter("z").is_err());
    }

    #[test]
    fn independence_is_symmetric_and_irreflexive() {
        let al = m1();
        let a = al.letter("a").unwrap();
        let d = al.letter("d").unwrap();
        assert!(al.independent(a, d));
        assert!(al.independent(d, a));
        assert!(al.dependent(a, a));
        assert_eq!(al.independent_pairs().count(), 2);
    }

    #[test]
    fn dependence_complement_contains_diagonal() {
        let al = m1();
        let n = al.len();
        let mut dep = 0;
        for i in 0..n {
            for j in 0..n {
                if al.dependent(Letter(i as u16), Letter(j as u16)) {
                    dep += 1;
                }
            }
        }
        // |D| = n² − 2·|I|
        assert_eq!(dep, n * n - 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            IndependenceAlphabet::new(&["a", "a"], &[]),
            Err(Error::DuplicateLetter(_))
        ));
        assert!(matches!(
            IndependenceAlphabet::new(&["a", "b"], &[("a", "a")]),
            Err(Error::ReflexivePair(_))
        ));
        assert!(matches!(
            IndependenceAlphabet::new(&["a", "b"], &[("a", "z")]),
            Err(Error::UnknownLetter(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let al = m1();
        let v = al.to_json_value();
        let back = IndependenceAlphabet::from_json_value(&v).unwrap();
        assert_eq!(*al, *back);
    }

    #[test]
    fn connectivity() {
        assert!(m1().dependence_connected());
        // a—b dependent, c isolated under dependence
        let al =
            IndependenceAlphabet::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        assert!(!al.dependence_connected());
        assert!(IndependenceAlphabet::free::<&str>(&[]).unwrap().dependence_connected());
        assert!(IndependenceAlphabet::free(&["x"]).unwrap().dependence_connected());
    }

    #[test]
    fn refinement() {
        let al = m1();
        let comm = al.commutative_closure();
        assert!(al.refines(&comm));
        assert!(!comm.refines(&al));
    }
}
