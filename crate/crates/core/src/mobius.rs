//! Möbius transform on the clique poset, Möbius polynomials, and growth
//! series coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::alphabet::IndependenceAlphabet;
use crate::clique::{enumerate_cliques, Clique};
use crate::poly::Polynomial;

/// An exact rational function on the full clique set of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueFunction {
    values: BTreeMap<Clique, BigRational>,
}

impl CliqueFunction {
    /// Builds the function from per-clique values; cliques absent from the
    /// map default to zero, and the domain is the full clique set.
    pub fn new(alphabet: &IndependenceAlphabet, mut values: BTreeMap<Clique, BigRational>) -> Self {
        let mut out = BTreeMap::new();
        for c in enumerate_cliques(alphabet) {
            let v = values.remove(&c).unwrap_or_else(BigRational::zero);
            out.insert(c, v);
        }
        CliqueFunction { values: out }
    }

    /// The multiplicative extension of letter weights to cliques.
    pub fn from_letter_weights(
        alphabet: &IndependenceAlphabet,
        weight: impl Fn(crate::alphabet::Letter) -> BigRational,
    ) -> Self {
        let mut values = BTreeMap::new();
        for c in enumerate_cliques(alphabet) {
            let v = c.iter().map(&weight).fold(BigRational::one(), |acc, w| acc * w);
            values.insert(c, v);
        }
        CliqueFunction { values }
    }

    pub fn get(&self, c: &Clique) -> &BigRational {
        &self.values[c]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Clique, &BigRational)> {
        self.values.iter()
    }

    pub fn total(&self) -> BigRational {
        self.values.values().fold(BigRational::zero(), |acc, v| acc + v)
    }
}

/// h(c) = Σ_{c′ ⊇ c} (−1)^{|c′|−|c|} f(c′), the alternating sum over
/// super-cliques.
pub fn mobius_transform(alphabet: &IndependenceAlphabet, f: &CliqueFunction) -> CliqueFunction {
    let cliques = enumerate_cliques(alphabet);
    let mut values = BTreeMap::new();
    for c in &cliques {
        let mut acc = BigRational::zero();
        for c2 in &cliques {
            if c.is_subset(c2) {
                let v = f.get(c2);
                if (c2.len() - c.len()) % 2 == 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
        }
        values.insert(c.clone(), acc);
    }
    CliqueFunction { values }
}

/// Inverse of the transform: f(c) = Σ_{c′ ⊇ c} h(c′).
pub fn mobius_inverse(alphabet: &IndependenceAlphabet, h: &CliqueFunction) -> CliqueFunction {
    let cliques = enumerate_cliques(alphabet);
    let mut values = BTreeMap::new();
    for c in &cliques {
        let mut acc = BigRational::zero();
        for c2 in &cliques {
            if c.is_subset(c2) {
                acc += h.get(c2);
            }
        }
        values.insert(c.clone(), acc);
    }
    CliqueFunction { values }
}

/// μ(z) = Σ_c (−1)^{|c|} z^{|c|}.
pub fn mobius_polynomial(alphabet: &IndependenceAlphabet) -> Polynomial {
    let mut counts: Vec<i64> = Vec::new();
    for c in enumerate_cliques(alphabet) {
        if counts.len() <= c.len() {
            counts.resize(c.len() + 1, 0);
        }
        counts[c.len()] += 1;
    }
    Polynomial::new(
        counts
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                BigRational::from_integer(BigInt::from(sign * n))
            })
            .collect(),
    )
}

/// Coefficients g₀..g_{n_max} of the growth series G(z), computed from the
/// linear recurrence G(z)·μ(z) = 1. g_n counts the traces of length n.
pub fn growth_coefficients(alphabet: &IndependenceAlphabet, n_max: usize) -> Vec<BigInt> {
    let mu = mobius_polynomial(alphabet);
    let mut out: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n == 0 {
            out.push(BigRational::one());
            continue;
        }
        let mut acc = BigRational::zero();
        for k in 1..=n.min(mu.degree().unwrap_or(0)) {
            acc -= mu.coeff(k) * &out[n - k];
        }
        out.push(acc);
    }
    out.into_iter()
        .map(|g| {
            assert!(g.is_integer(), "growth coefficients are integers");
            g.to_integer()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::parse_rational;
    use crate::trace::Trace;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn probabilistic_valuation_example() {
        // a=b=1/3, c=d=1/4 is normalized: h(ε) = 0 exactly
        let al = fixtures::m1();
        let f = CliqueFunction::from_letter_weights(&al, |l| match al.name(l) {
            "a" | "b" => q("1/3"),
            _ => q("1/4"),
        });
        let h = mobius_transform(&al, &f);
        assert_eq!(*h.get(&Clique::empty()), q("0"));
        // h(a) = f(a) − f(ad) = 1/3 − 1/12
        let a = Clique::singleton(al.letter("a").unwrap());
        assert_eq!(*h.get(&a), q("1/4"));
        // Σ_c h(c) = f(ε) = 1
        assert_eq!(h.total(), q("1"));
    }

    #[test]
    fn constant_function_gives_mobius_value() {
        let al = fixtures::m1();
        let f = CliqueFunction::from_letter_weights(&al, |_| q("1"));
        let h = mobius_transform(&al, &f);
        // μ evaluated at 1: 1 − 4 + 2 = −1
        assert_eq!(*h.get(&Clique::empty()), q("-1"));
    }

    #[test]
    fn mobius_polynomials_of_fixtures() {
        let m1 = mobius_polynomial(&fixtures::m1());
        assert_eq!(m1, Polynomial::from_ints(&[1, -4, 2]));
        let m2 = mobius_polynomial(&fixtures::m2());
        assert_eq!(m2, Polynomial::from_ints(&[1, -5, 6, -1]));
        for n in 0..5usize {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let comm = IndependenceAlphabet::free_commutative(&names).unwrap();
            let mut expect = Polynomial::one();
            for _ in 0..n {
                expect = &expect * &Polynomial::from_ints(&[1, -1]);
            }
            assert_eq!(mobius_polynomial(&comm), expect, "(1-z)^{n}");
        }
    }

    #[test]
    fn mobius_polynomial_shape_invariants() {
        for al in [fixtures::m1(), fixtures::m2()] {
            let mu = mobius_polynomial(&al);
            assert_eq!(mu.coeff(0), q("1"));
            assert_eq!(mu.coeff(1), -BigRational::from_integer(BigInt::from(al.len())));
        }
    }

    /// Counts traces of a given length by brute-force word enumeration and
    /// normal-form deduplication; independent of the recurrence.
    fn count_traces_brute(al: &std::sync::Arc<IndependenceAlphabet>, n: usize) -> usize {
        let letters: Vec<_> = al.letters().collect();
        let mut seen: BTreeSet<Trace> = BTreeSet::new();
        let mut word = vec![0usize; n];
        loop {
            let ls: Vec<_> = word.iter().map(|&i| letters[i]).collect();
            seen.insert(Trace::from_word(al.clone(), &ls));
            // odometer
            let mut k = 0;
            loop {
                if k == n {
                    return seen.len();
                }
                word[k] += 1;
                if word[k] < letters.len() {
                    break;
                }
                word[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn growth_matches_brute_force_enumeration() {
        let al = fixtures::m1();
        let g = growth_coefficients(&al, 6);
        assert_eq!(
            g[..4],
            [BigInt::from(1), BigInt::from(4), BigInt::from(14), BigInt::from(48)]
        );
        for n in 0..=6 {
            assert_eq!(g[n], BigInt::from(count_traces_brute(&al, n)), "n={n}");
        }
        let m2 = fixtures::m2();
        let g2 = growth_coefficients(&m2, 5);
        for n in 0..=5 {
            assert_eq!(g2[n], BigInt::from(count_traces_brute(&m2, n)), "m2 n={n}");
        }
    }

    #[test]
    fn growth_of_commutative_and_empty_monoids() {
        let comm = IndependenceAlphabet::free_commutative(&["x", "y"]).unwrap();
        let g = growth_coefficients(&comm, 8);
        for (n, v) in g.iter().enumerate() {
            assert_eq!(*v, BigInt::from(n + 1));
        }
        let empty = IndependenceAlphabet::free::<&str>(&[]).unwrap();
        let g0 = growth_coefficients(&empty, 4);
        assert_eq!(g0, vec![1, 0, 0, 0, 0].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn transform_inverse_round_trip(nums in proptest::collection::vec(-20i64..20, 13),
                                        dens in proptest::collection::vec(1i64..8, 13)) {
            let al = fixtures::m2();
            let cliques = enumerate_cliques(&al);
            let mut values = BTreeMap::new();
            for (i, c) in cliques.iter().enumerate() {
                values.insert(c.clone(), BigRational::new(nums[i].into(), dens[i].into()));
            }
            let f = CliqueFunction::new(&al, values);
            let h = mobius_transform(&al, &f);
            // Eq. f(ε) = Σ h(c)
            prop_assert_eq!(h.total(), f.get(&Clique::empty()).clone());
            let back = mobius_inverse(&al, &h);
            prop_assert_eq!(back, f.clone());
            // and the other composition order
            let forth = mobius_transform(&al, &mobius_inverse(&al, &f));
            prop_assert_eq!(forth, f);
        }
    }
}
