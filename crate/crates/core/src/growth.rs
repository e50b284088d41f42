//! The Möbius matrix of a concurrent system, its determinant θ(z), the
//! characteristic root, and growth-matrix coefficients from the matrix
//! recurrence G(z)·μ(z) = Id.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::poly::Polynomial;
use crate::root::{smallest_root, RootBound};
use crate::system::ConcurrentSystem;

/// Square matrix of polynomials indexed by state pairs; entry (α,β) is
/// Σ_{c ∈ 𝒞_{α,β}} (−1)^{|c|} z^{|c|}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMatrix {
    n: usize,
    entries: Vec<Polynomial>,
}

impl MobiusMatrix {
    pub fn of(sys: &ConcurrentSystem) -> Self {
        let n = sys.n_states();
        let mut entries = vec![Polynomial::zero(); n * n];
        for s in sys.state_ids() {
            for c in sys.enabled_cliques(s) {
                let target = sys.act_clique(s, &c).expect("enabled clique");
                let sign = if c.len() % 2 == 0 { 1 } else { -1 };
                let term = Polynomial::monomial(
                    BigRational::from_integer(BigInt::from(sign)),
                    c.len(),
                );
                let slot = s.index() * n + target.index();
                entries[slot] = &entries[slot] + &term;
            }
        }
        MobiusMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.n + col]
    }

    /// Determinant by fraction-free Bareiss elimination; divisions are exact
    /// in the polynomial ring.
    pub fn determinant(&self) -> Polynomial {
        let n = self.n;
        if n == 0 {
            return Polynomial::one();
        }
        let mut m: Vec<Polynomial> = self.entries.clone();
        let mut prev = Polynomial::one();
        let mut sign = false;
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let pivot_row = (k + 1..n).find(|&r| !m[r * n + k].is_zero());
                match pivot_row {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(k * n + c, r * n + c);
                        }
                        sign = !sign;
                    }
                    None => return Polynomial::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k * n + k] * &m[i * n + j]) - &(&m[i * n + k] * &m[k * n + j]);
                    m[i * n + j] = num.div_exact(&prev);
                }
                m[i * n + k] = Polynomial::zero();
            }
            prev = m[k * n + k].clone();
        }
        let det = m[(n - 1) * n + (n - 1)].clone();
        if sign {
            -&det
        } else {
            det
        }
    }

    /// Coefficient matrix of z^k.
    fn coefficient_matrix(&self, k: usize) -> Vec<BigRational> {
        self.entries.iter().map(|p| p.coeff(k)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }
}

/// θ(z) = det μ(z).
pub fn theta(sys: &ConcurrentSystem) -> Polynomial {
    MobiusMatrix::of(sys).determinant()
}

/// The smallest positive real root of θ in (0,1], or ∞ when none exists.
pub fn characteristic_root(sys: &ConcurrentSystem) -> Result<RootBound> {
    smallest_root(&theta(sys))
}

/// Coefficients of the growth matrix G(z) for n = 0..n_max, from
/// G₀ = Id and G_n = −Σ_{k≥1} G_{n−k}·M_k. Entry (α,β) of the n-th matrix
/// counts the executions of length n from α ending in β.
pub fn growth_matrix_coefficients(sys: &ConcurrentSystem, n_max: usize) -> Vec<Vec<Vec<BigInt>>> {
    let mu = MobiusMatrix::of(sys);
    let n = mu.dim();
    let deg = mu.max_degree();
    let ms: Vec<Vec<BigRational>> = (0..=deg).map(|k| mu.coefficient_matrix(k)).collect();
    let mut gs: Vec<Vec<BigRational>> = Vec::with_capacity(n_max + 1);
    let mut identity = vec![BigRational::zero(); n * n];
    for i in 0..n {
        identity[i * n + i] = BigRational::one();
    }
    gs.push(identity);
    for step in 1..=n_max {
        let mut next = vec![BigRational::zero(); n * n];
        for k in 1..=deg.min(step) {
            let g = &gs[step - k];
            let m = &ms[k];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = next[i * n + j].clone();
                    for t in 0..n {
                        if !g[i * n + t].is_zero() && !m[t * n + j].is_zero() {
                            acc -= &g[i * n + t] * &m[t * n + j];
                        }
                    }
                    next[i * n + j] = acc;
                }
            }
        }
        gs.push(next);
    }
    gs.into_iter()
        .map(|mat| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let v = &mat[i * n + j];
                            assert!(
                                v.is_integer() && v >= &BigRational::zero(),
                                "growth coefficients are nonnegative integers"
                            );
                            v.to_integer()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}
