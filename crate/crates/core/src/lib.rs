//! Exact-arithmetic modelling of concurrent systems as trace-monoid actions
//! on finite state sets.
//!
//! The crate provides:
//! - trace monoids with canonical Cartier–Foata normal forms and the left
//!   divisibility order ([`trace`]),
//! - clique combinatorics, Möbius transforms and growth series ([`mobius`]),
//! - exact polynomial arithmetic and real root isolation ([`poly`], [`root`]),
//! - concurrent systems with their states-and-cliques digraph, Möbius
//!   matrix, characteristic root and irreducibility analysis ([`system`],
//!   [`growth`], [`analysis`]),
//! - determinism analysis with maximal executions and boundary cardinality
//!   ([`dcs`]),
//! - valuations, probabilistic verification, the Markov chain of
//!   states-and-cliques and seeded sampling ([`valuation`], [`chain`]),
//! - 1-safe Petri net ingestion ([`petri`]).
//!
//! All arithmetic is exact over arbitrary-precision rationals; nothing in
//! the analysis path touches floating point.

pub mod alphabet;
pub mod chain;
pub mod analysis;
pub mod clique;
pub mod dcs;
pub mod digraph;
pub mod error;
pub mod fixtures;
pub mod growth;
pub mod heap;
pub mod mobius;
pub mod petri;
pub mod poly;
pub mod projection;
pub mod random;
pub mod rat;
pub mod report;
pub mod root;
pub mod system;
pub mod trace;
pub mod valuation;

pub use alphabet::{IndependenceAlphabet, Letter};
pub use analysis::{classify_finiteness, is_irreducible, spectral_check, Finiteness, Irreducibility, SpectralCheck};
pub use chain::{sample_execution, sample_from_chain, ChainModel};
pub use clique::{enumerate_cliques, enumerate_nonempty_cliques, is_normal_pair, Clique};
pub use dcs::{boundary_cardinality, bounded_lub_check, is_deterministic, lemma2_check, maximal_execution, BoundaryCardinality, DcsVerdict, MaximalExecution};
pub use digraph::StatesCliquesDigraph;
pub use error::{Error, Result};
pub use growth::{characteristic_root, growth_matrix_coefficients, theta, MobiusMatrix};
pub use heap::render_heap;
pub use mobius::{growth_coefficients, mobius_inverse, mobius_polynomial, mobius_transform, CliqueFunction};
pub use petri::PetriNet;
pub use poly::Polynomial;
pub use projection::{count_subtraces, enumerate_subtraces, lift, project, subtrace_bound};
pub use system::{ConcurrentSystem, StateId};
pub use report::{full_report, AnalysisReport};
pub use root::{smallest_root, smallest_root_with_width, strictly_greater, RootBound};
pub use valuation::{is_probabilistic, mobius_of_valuation, ProbabilisticValuation, StateMobius, Valuation};
pub use trace::{OmegaTrace, Trace};
