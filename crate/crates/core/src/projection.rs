//! Canonical surjections between trace monoids over the same letters, their
//! one-sided inverses along a fixed generalised trace, and sub-trace
//! counting.
//!
//! For independence relations I ⊆ I' there is a natural surjection
//! π : M(Σ,I) → M(Σ,I'). Restricted to the divisors of a fixed ω the map is
//! injective, and the inverse image can be rebuilt clique by clique: the
//! first clique of the preimage is d₁ ∩ C₁(ω) where d₁ is the first clique
//! of the image.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::binomial;

use crate::alphabet::IndependenceAlphabet;
use crate::error::{Error, Result};
use crate::trace::{OmegaTrace, Trace};

use std::sync::Arc;

fn check_refines(src: &IndependenceAlphabet, dst: &IndependenceAlphabet) -> Result<()> {
    if src.refines(dst) {
        Ok(())
    } else {
        Err(Error::NotIndependenceSubset)
    }
}

/// Image of a trace under the canonical surjection onto a monoid with more
/// commutations. Length is preserved and the map is a homomorphism.
pub fn project(x: &Trace, target: &Arc<IndependenceAlphabet>) -> Result<Trace> {
    check_refines(x.alphabet(), target)?;
    Ok(Trace::from_word(target.clone(), &x.word()))
}

/// The unique x ≤ ω with π(x) = y, if any.
///
/// Candidate cliques are peeled off as d₁ ∩ C₁(ω); the candidate is then
/// verified, so absence of a preimage is detected rather than guessed.
pub fn lift(y: &Trace, omega: &OmegaTrace) -> Result<Option<Trace>> {
    check_refines(omega.alphabet(), y.alphabet())?;
    let source = omega.alphabet().clone();
    let mut u = omega.unfold(y.len().max(1));
    let mut rest = y.clone();
    let mut word = Vec::with_capacity(y.len());
    while !rest.is_empty() {
        let c = rest.first_clique().intersection(&u.first_clique());
        if c.is_empty() {
            return Ok(None);
        }
        let c_src = Trace::clique(source.clone(), c.clone());
        let c_dst = Trace::clique(y.alphabet().clone(), c.clone());
        rest = match c_dst.residual(&rest) {
            Ok(r) => r,
            Err(_) => return Ok(None),
        };
        u = c_src.residual(&u).expect("c divides the unfolded prefix");
        word.extend(c.iter());
    }
    let candidate = Trace::from_word(source, &word);
    if project(&candidate, y.alphabet())? == *y && omega.divides(&candidate)? {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

/// All divisors of ω with exactly `n` letters, in canonical order.
///
/// Works on the unfolded prefix of n cliques; each frontier entry carries
/// its residual, so the extension test x·a ≤ ω is one first-clique lookup.
pub fn enumerate_subtraces(omega: &OmegaTrace, n: usize) -> Vec<Trace> {
    let u = omega.unfold(n);
    let alphabet = omega.alphabet().clone();
    let mut level: BTreeSet<(Trace, Trace)> = BTreeSet::new();
    level.insert((Trace::empty(alphabet.clone()), u));
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for (x, rest) in &level {
            for a in rest.first_clique().iter() {
                let mut extended = x.clone();
                extended.push_letter(a);
                let rest = Trace::letter(alphabet.clone(), a)
                    .residual(rest)
                    .expect("first-clique letter divides");
                next.insert((extended, rest));
            }
        }
        level = next;
    }
    level.into_iter().map(|(x, _)| x).collect()
}

/// p_n = #{x ∈ M : x ≤ ω, |x| = n}. Only the first n cliques of ω matter.
pub fn count_subtraces(omega: &OmegaTrace, n: usize) -> usize {
    enumerate_subtraces(omega, n).len()
}

/// The polynomial bound of the sub-trace counting result:
/// binomial(n + N − 1, N − 1) with N the alphabet size.
pub fn subtrace_bound(alphabet: &IndependenceAlphabet, n: usize) -> BigUint {
    let n_letters = alphabet.len();
    if n_letters == 0 {
        return if n == 0 { BigUint::from(1u32) } else { BigUint::from(0u32) };
    }
    binomial(BigUint::from(n + n_letters - 1), BigUint::from(n_letters - 1))
}
