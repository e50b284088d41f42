//! Cliques: traces of pairwise-independent letters, identified with letter
//! sets. The empty clique is the unit ε.

use std::fmt;

use crate::alphabet::{IndependenceAlphabet, Letter};
use crate::error::{Error, Result};

/// A set of pairwise-independent letters, stored sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique {
    letters: Vec<Letter>,
}

impl Clique {
    pub fn empty() -> Self {
        Clique::default()
    }

    pub fn singleton(l: Letter) -> Self {
        Clique { letters: vec![l] }
    }

    /// Builds a clique from letters, checking pairwise independence.
    pub fn new(alphabet: &IndependenceAlphabet, letters: &[Letter]) -> Result<Self> {
        let mut ls = letters.to_vec();
        ls.sort();
        ls.dedup();
        if ls.len() != letters.len() {
            return Err(Error::NotAClique(render(alphabet, letters)));
        }
        for i in 0..ls.len() {
            for j in i + 1..ls.len() {
                if alphabet.dependent(ls[i], ls[j]) {
                    return Err(Error::NotAClique(render(alphabet, &ls)));
                }
            }
        }
        Ok(Clique { letters: ls })
    }

    /// Internal constructor for letters already known to be sorted, distinct
    /// and pairwise independent.
    pub(crate) fn from_sorted_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] < w[1]));
        Clique { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.letters.binary_search(&l).is_ok()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    pub fn is_subset(&self, other: &Clique) -> bool {
        self.letters.iter().all(|&l| other.contains(l))
    }

    pub fn intersection(&self, other: &Clique) -> Clique {
        Clique {
            letters: self.letters.iter().copied().filter(|&l| other.contains(l)).collect(),
        }
    }

    /// Set difference self∖other; the result is again a clique.
    pub fn difference(&self, other: &Clique) -> Clique {
        Clique {
            letters: self.letters.iter().copied().filter(|&l| !other.contains(l)).collect(),
        }
    }

    /// Union, valid only when the union is again a clique; checked.
    pub fn union(&self, other: &Clique, alphabet: &IndependenceAlphabet) -> Result<Clique> {
        let mut ls = self.letters.clone();
        ls.extend(other.iter());
        ls.sort();
        ls.dedup();
        Clique::new(alphabet, &ls)
    }

    /// Two cliques are parallel when all cross pairs are independent (which
    /// forces disjointness).
    pub fn parallel(&self, other: &Clique, alphabet: &IndependenceAlphabet) -> bool {
        self.iter().all(|a| other.iter().all(|b| alphabet.independent(a, b)))
    }

    pub fn render(&self, alphabet: &IndependenceAlphabet) -> String {
        render(alphabet, &self.letters)
    }
}

fn render(alphabet: &IndependenceAlphabet, letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "ε".to_string();
    }
    letters
        .iter()
        .map(|&l| alphabet.name(l))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "ε")
        } else {
            write!(
                f,
                "{}",
                self.letters.iter().map(|l| format!("#{}", l.0)).collect::<Vec<_>>().join(" ")
            )
        }
    }
}

/// The normal-pair relation c → d: every letter of `d` depends on some
/// letter of `c`. In particular x → ε always holds and ε → y only for y = ε.
pub fn is_normal_pair(alphabet: &IndependenceAlphabet, c: &Clique, d: &Clique) -> bool {
    d.iter().all(|b| c.iter().any(|a| alphabet.dependent(a, b)))
}

/// All cliques of the alphabet, ε included, ordered by size then
/// lexicographically by letter indices. The result is downward closed.
pub fn enumerate_cliques(alphabet: &IndependenceAlphabet) -> Vec<Clique> {
    let n = alphabet.len();
    let mut out: Vec<Vec<Letter>> = vec![vec![]];
    let mut cur: Vec<Letter> = Vec::new();
    fn grow(
        alphabet: &IndependenceAlphabet,
        start: usize,
        cur: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
    ) {
        for i in start..alphabet.len() {
            let l = Letter(i as u16);
            if cur.iter().all(|&p| alphabet.independent(p, l)) {
                cur.push(l);
                out.push(cur.clone());
                grow(alphabet, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    grow(alphabet, 0, &mut cur, &mut out);
    let _ = n;
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    out.into_iter().map(Clique::from_sorted_unchecked).collect()
}

/// Nonempty cliques only, same order.
pub fn enumerate_nonempty_cliques(alphabet: &IndependenceAlphabet) -> Vec<Clique> {
    enumerate_cliques(alphabet).into_iter().filter(|c| !c.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn m1_cliques() {
        let al = fixtures::m1();
        let cliques = enumerate_cliques(&al);
        let names: Vec<String> = cliques.iter().map(|c| c.render(&al)).collect();
        assert_eq!(names, vec!["ε", "a", "b", "c", "d", "a d", "b d"]);
    }

    #[test]
    fn m2_cliques_match_figure() {
        // ε, five letters, six pairs, one triple
        let al = fixtures::m2();
        let cliques = enumerate_cliques(&al);
        assert_eq!(cliques.len(), 13);
        let names: Vec<String> = cliques.iter().map(|c| c.render(&al)).collect();
        assert_eq!(
            names,
            vec![
                "ε", "a0", "a1", "a2", "a3", "a4", "a0 a2", "a0 a3", "a0 a4", "a1 a3", "a1 a4",
                "a2 a4", "a0 a2 a4"
            ]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
        );
    }

    #[test]
    fn empty_alphabet_has_only_epsilon() {
        let al = crate::alphabet::IndependenceAlphabet::free::<&str>(&[]).unwrap();
        let cliques = enumerate_cliques(&al);
        assert_eq!(cliques.len(), 1);
        assert!(cliques[0].is_empty());
    }

    #[test]
    fn cliques_downward_closed() {
        let al = fixtures::m2();
        let cliques = enumerate_cliques(&al);
        for c in &cliques {
            for drop in c.iter() {
                let sub: Vec<Letter> = c.iter().filter(|&l| l != drop).collect();
                let sub = Clique::from_sorted_unchecked(sub);
                assert!(cliques.contains(&sub));
            }
        }
    }

    #[test]
    fn normal_pairs() {
        let al = fixtures::m1();
        let cl = |s: &str| {
            let letters: Vec<Letter> =
                s.split_whitespace().map(|n| al.letter(n).unwrap()).collect();
            Clique::new(&al, &letters).unwrap()
        };
        // every letter of {b} depends on some letter of {a,d}: (a,b) dependent
        assert!(is_normal_pair(&al, &cl("a d"), &cl("b")));
        // (a,d) independent: d does not rest on a
        assert!(!is_normal_pair(&al, &cl("a"), &cl("d")));
        // x → ε for all x, ε → y only for y = ε
        assert!(is_normal_pair(&al, &cl("a"), &Clique::empty()));
        assert!(is_normal_pair(&al, &Clique::empty(), &Clique::empty()));
        assert!(!is_normal_pair(&al, &Clique::empty(), &cl("a")));
    }

    #[test]
    fn clique_construction_rejects_dependent_letters() {
        let al = fixtures::m1();
        let a = al.letter("a").unwrap();
        let b = al.letter("b").unwrap();
        assert!(Clique::new(&al, &[a, b]).is_err());
        assert!(Clique::new(&al, &[a, a]).is_err());
    }
}
