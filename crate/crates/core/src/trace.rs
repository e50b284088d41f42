//! Traces in canonical Cartier–Foata normal form, the divisibility order,
//! and eventually periodic infinite traces.
//!
//! A trace is stored as its normal form: a sequence of nonempty cliques in
//! which every consecutive pair is a normal pair. That makes equality of
//! congruence classes plain structural equality.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{IndependenceAlphabet, Letter};
use crate::clique::{is_normal_pair, Clique};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace {
    alphabet: Arc<IndependenceAlphabet>,
    cliques: Vec<Clique>,
}

impl Trace {
    pub fn empty(alphabet: Arc<IndependenceAlphabet>) -> Self {
        Trace { alphabet, cliques: Vec::new() }
    }

    pub fn letter(alphabet: Arc<IndependenceAlphabet>, l: Letter) -> Self {
        Trace { alphabet, cliques: vec![Clique::singleton(l)] }
    }

    pub fn clique(alphabet: Arc<IndependenceAlphabet>, c: Clique) -> Self {
        if c.is_empty() {
            Trace::empty(alphabet)
        } else {
            Trace { alphabet, cliques: vec![c] }
        }
    }

    /// Normal form of a word, one letter at a time. Two words of the same
    /// congruence class yield identical traces.
    pub fn from_word(alphabet: Arc<IndependenceAlphabet>, word: &[Letter]) -> Self {
        let mut t = Trace::empty(alphabet);
        for &l in word {
            t.push_letter(l);
        }
        t
    }

    /// Parses names separated by whitespace as a word and normalizes it.
    pub fn from_names(alphabet: Arc<IndependenceAlphabet>, word: &[&str]) -> Result<Self> {
        let mut letters = Vec::with_capacity(word.len());
        for name in word {
            letters.push(alphabet.letter(name)?);
        }
        Ok(Trace::from_word(alphabet, &letters))
    }

    /// Parses the text form: cliques separated by `|`, letters separated by
    /// spaces, e.g. `a0 a3 | a0 a2`. The letters are read as a word and
    /// renormalized, so non-canonical clique splits are accepted. `ε` and
    /// the empty string denote the empty trace.
    pub fn parse(alphabet: Arc<IndependenceAlphabet>, text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "ε" {
            return Ok(Trace::empty(alphabet));
        }
        let mut letters = Vec::new();
        for part in trimmed.split('|') {
            for name in part.split_whitespace() {
                letters.push(
                    alphabet.letter(name).map_err(|_| Error::BadTraceText(text.to_string()))?,
                );
            }
        }
        Ok(Trace::from_word(alphabet, &letters))
    }

    pub fn alphabet(&self) -> &Arc<IndependenceAlphabet> {
        &self.alphabet
    }

    /// Number of letters, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Height τ: the number of cliques in the normal form.
    pub fn height(&self) -> usize {
        self.cliques.len()
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    /// C_i of the generalised normal form (1-indexed; ε beyond the height).
    pub fn clique_at(&self, i: usize) -> Clique {
        assert!(i >= 1);
        self.cliques.get(i - 1).cloned().unwrap_or_default()
    }

    pub fn first_clique(&self) -> Clique {
        self.clique_at(1)
    }

    pub fn contains_letter(&self, l: Letter) -> bool {
        self.cliques.iter().any(|c| c.contains(l))
    }

    /// A canonical linearization: cliques in order, letters sorted inside.
    pub fn word(&self) -> Vec<Letter> {
        self.cliques.iter().flat_map(|c| c.iter()).collect()
    }

    /// Appends one letter to the normal form. The letter falls, heap-style,
    /// onto the highest clique holding a letter it depends on.
    pub fn push_letter(&mut self, l: Letter) {
        let mut level = self.cliques.len();
        while level > 0
            && self.cliques[level - 1].iter().all(|b| self.alphabet.independent(l, b))
        {
            level -= 1;
        }
        if level == self.cliques.len() {
            self.cliques.push(Clique::singleton(l));
        } else {
            let mut letters = self.cliques[level].letters().to_vec();
            let pos = letters.binary_search(&l).expect_err("letter independent of itself");
            letters.insert(pos, l);
            self.cliques[level] = Clique::from_sorted_unchecked(letters);
        }
    }

    fn check_same_alphabet(&self, other: &Trace) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Concatenation x·y in normal form.
    pub fn concat(&self, other: &Trace) -> Result<Trace> {
        self.check_same_alphabet(other)?;
        let mut out = self.clone();
        for l in other.word() {
            out.push_letter(l);
        }
        Ok(out)
    }

    /// Left divisibility: x ≤ y iff y = x·z for some z.
    pub fn leq(&self, other: &Trace) -> Result<bool> {
        Ok(self.residual(other).is_ok())
    }

    /// The unique z with self·z = other (left cancellation x\y).
    pub fn residual(&self, other: &Trace) -> Result<Trace> {
        self.check_same_alphabet(other)?;
        let mut rest = other.clone();
        for l in self.word() {
            rest = rest.cancel_first_letter(l)?;
        }
        Ok(rest)
    }

    /// Removes one occurrence of `l` from the first clique; errors when `l`
    /// is not a minimal letter. The remainder is renormalized.
    fn cancel_first_letter(&self, l: Letter) -> Result<Trace> {
        if self.cliques.is_empty() || !self.cliques[0].contains(l) {
            return Err(Error::NotAPrefix);
        }
        let mut word: Vec<Letter> =
            self.cliques[0].iter().filter(|&x| x != l).collect();
        for c in &self.cliques[1..] {
            word.extend(c.iter());
        }
        Ok(Trace::from_word(self.alphabet.clone(), &word))
    }

    /// Greatest lower bound x∧y; always exists.
    pub fn glb(&self, other: &Trace) -> Result<Trace> {
        self.check_same_alphabet(other)?;
        let mut x = self.clone();
        let mut y = other.clone();
        let mut out = Trace::empty(self.alphabet.clone());
        loop {
            let common = x.first_clique().intersection(&y.first_clique());
            if common.is_empty() {
                return Ok(out);
            }
            let c = Trace::clique(self.alphabet.clone(), common);
            x = c.residual(&x)?;
            y = c.residual(&y)?;
            out = out.concat(&c)?;
        }
    }

    /// Least upper bound x∨y when a common upper bound exists.
    ///
    /// Recursion on first cliques: every upper bound z satisfies
    /// C₁(z) ⊇ C₁(x) ∪ C₁(y), so the union must be a clique `e`, and
    /// z = e·w with w ranging over the common upper bounds of the two
    /// minimal cofactors of the operands past `e`.
    pub fn lub(&self, other: &Trace) -> Result<Option<Trace>> {
        self.check_same_alphabet(other)?;
        if self.is_empty() {
            return Ok(Some(other.clone()));
        }
        if other.is_empty() {
            return Ok(Some(self.clone()));
        }
        let c = self.first_clique();
        let d = other.first_clique();
        let e = match c.union(&d, &self.alphabet) {
            Ok(e) => e,
            Err(_) => return Ok(None),
        };
        let head = Trace::clique(self.alphabet.clone(), e.clone());
        let x_rest = Trace::clique(self.alphabet.clone(), c.clone()).residual(self)?;
        let y_rest = Trace::clique(self.alphabet.clone(), d.clone()).residual(other)?;
        let u = match x_rest.min_cofactor(&e.difference(&c)) {
            Some(u) => u,
            None => return Ok(None),
        };
        let v = match y_rest.min_cofactor(&e.difference(&d)) {
            Some(v) => v,
            None => return Ok(None),
        };
        match u.lub(&v)? {
            Some(w) => Ok(Some(head.concat(&w)?)),
            None => Ok(None),
        }
    }

    /// The minimal w with self ≤ p·w for a clique `p`, when one exists.
    ///
    /// Letters of `p` lying in the first clique cancel; once no first-clique
    /// letter remains in `p`, a solution exists iff every remaining letter
    /// of the trace is independent of every remaining letter of `p`, and
    /// then the minimal w is the remaining trace itself.
    fn min_cofactor(&self, p: &Clique) -> Option<Trace> {
        let mut x = self.clone();
        let mut p = p.clone();
        loop {
            let g = p.intersection(&x.first_clique());
            if g.is_empty() {
                break;
            }
            let g_trace = Trace::clique(self.alphabet.clone(), g.clone());
            x = g_trace.residual(&x).expect("g divides x");
            p = p.difference(&g);
        }
        let clash = x
            .cliques
            .iter()
            .flat_map(|c| c.iter())
            .any(|a| p.iter().any(|b| self.alphabet.dependent(a, b)));
        if clash {
            None
        } else {
            Some(x)
        }
    }

    /// True iff the stored clique sequence really is a normal form; used by
    /// tests and debug assertions.
    pub fn is_normal_form(&self) -> bool {
        self.cliques.iter().all(|c| !c.is_empty())
            && self
                .cliques
                .windows(2)
                .all(|w| is_normal_pair(&self.alphabet, &w[0], &w[1]))
    }

    pub fn render(&self) -> String {
        if self.cliques.is_empty() {
            return "ε".to_string();
        }
        self.cliques
            .iter()
            .map(|c| c.render(&self.alphabet))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// An eventually periodic infinite normal sequence prefix·cycle^ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaTrace {
    alphabet: Arc<IndependenceAlphabet>,
    prefix: Vec<Clique>,
    cycle: Vec<Clique>,
}

impl OmegaTrace {
    /// Validates that all cliques are nonempty and that prefix·cycle·cycle
    /// is normal, which covers both junctions.
    pub fn new(
        alphabet: Arc<IndependenceAlphabet>,
        prefix: Vec<Clique>,
        cycle: Vec<Clique>,
    ) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        let mut seq: Vec<&Clique> = prefix.iter().collect();
        seq.extend(cycle.iter());
        seq.extend(cycle.iter());
        for (i, c) in seq.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::NotNormal(i));
            }
        }
        for (i, w) in seq.windows(2).enumerate() {
            if !is_normal_pair(&alphabet, w[0], w[1]) {
                return Err(Error::NotNormal(i + 1));
            }
        }
        Ok(OmegaTrace { alphabet, prefix, cycle })
    }

    pub fn alphabet(&self) -> &Arc<IndependenceAlphabet> {
        &self.alphabet
    }

    pub fn prefix(&self) -> &[Clique] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Clique] {
        &self.cycle
    }

    /// The i-th clique of the infinite normal sequence (1-indexed).
    pub fn clique_at(&self, i: usize) -> &Clique {
        assert!(i >= 1);
        let i = i - 1;
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Product of the first `n` cliques, as a finite trace. Since the clique
    /// sequence is normal this is already a normal form.
    pub fn unfold(&self, n: usize) -> Trace {
        let cliques: Vec<Clique> = (1..=n).map(|i| self.clique_at(i).clone()).collect();
        let t = Trace { alphabet: self.alphabet.clone(), cliques };
        debug_assert!(t.is_normal_form());
        t
    }

    /// Finite x divides ω iff it divides the product of the first |x|
    /// cliques of ω: a prefix occurrence at clique level m needs a dependent
    /// chain of m occurrences inside x, so m ≤ |x|.
    pub fn divides(&self, x: &Trace) -> Result<bool> {
        if *x.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let depth = x.len().max(1);
        x.leq(&self.unfold(depth))
    }

    pub fn render(&self) -> String {
        let part = |cs: &[Clique]| {
            cs.iter().map(|c| c.render(&self.alphabet)).collect::<Vec<_>>().join(" | ")
        };
        if self.prefix.is_empty() {
            format!("({})^ω", part(&self.cycle))
        } else {
            format!("{} | ({})^ω", part(&self.prefix), part(&self.cycle))
        }
    }
}

impl fmt::Display for OmegaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
