//! The combined analysis report: Möbius matrix, θ, characteristic root,
//! irreducibility, determinism, dominant-valuation check, boundary
//! cardinalities, spectral table, and the cross-checked theorem
//! implications.
//!
//! Every implication applicable to the input is asserted; a violation
//! would be a bug in this library, not a property of the input, so it
//! panics rather than reporting. The root is corroborated against the
//! enumerated growth of execution counts; a definite disagreement between
//! the two routes is flagged in the report instead of silently preferring
//! one.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::analysis::{
    classify_finiteness, growth_class, is_irreducible, root_growth_consistent, spectral_check,
    GrowthClass, Irreducibility, SpectralCheck,
};
use crate::dcs::{boundary_cardinality, is_deterministic, BoundaryCardinality, DcsVerdict};
use crate::error::Result;
use crate::growth::{theta, MobiusMatrix};
use crate::root::{smallest_root, RootBound};
use crate::system::ConcurrentSystem;
use crate::valuation::{is_probabilistic, Valuation};

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub name: &'static str,
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub mobius_matrix: MobiusMatrix,
    pub theta: crate::poly::Polynomial,
    pub characteristic_root: RootBound,
    pub growth_class: GrowthClass,
    pub root_growth_consistent: bool,
    pub irreducible: Irreducibility,
    pub dcs: DcsVerdict,
    pub dominant_probabilistic: bool,
    pub boundary: Vec<BoundaryCardinality>,
    pub finite_executions: Vec<bool>,
    pub spectral: SpectralCheck,
    pub theorem_checks: Vec<TheoremCheck>,
}

/// Exact test for r = 1: the isolated root collapses to the point 1.
pub fn root_is_one(root: &RootBound) -> bool {
    root.is_exactly(&BigRational::one())
}

pub fn full_report(sys: &ConcurrentSystem) -> Result<AnalysisReport> {
    let mobius_matrix = MobiusMatrix::of(sys);
    let th = theta(sys);
    let characteristic_root = smallest_root(&th)?;
    let gclass = growth_class(sys, 12);
    let consistent = root_growth_consistent(&characteristic_root, gclass);
    let irreducible = is_irreducible(sys);
    let dcs = is_deterministic(sys);
    let dominant_probabilistic = is_probabilistic(sys, &Valuation::dominant(sys));
    let boundary: Vec<BoundaryCardinality> =
        sys.state_ids().map(|s| boundary_cardinality(sys, s)).collect();
    let finite_executions: Vec<bool> =
        sys.state_ids().map(|s| classify_finiteness(sys, s).finite).collect();
    let spectral = spectral_check(sys)?;

    let non_trivial = !sys.is_trivial();
    let all_states_live = sys.state_ids().all(|s| !sys.enabled_letters(s).is_empty());
    let all_countable = boundary
        .iter()
        .all(|b| matches!(b, BoundaryCardinality::Empty | BoundaryCardinality::Countable));
    let some_countable = boundary
        .iter()
        .any(|b| matches!(b, BoundaryCardinality::Empty | BoundaryCardinality::Countable));
    let root_one_or_infinite =
        root_is_one(&characteristic_root) || characteristic_root.is_infinite();

    let mut checks = Vec::new();
    let mut push = |name: &'static str, applicable: bool, holds: bool| {
        checks.push(TheoremCheck { name, applicable, holds });
    };
    // determinism ⟺ the dominant valuation is probabilistic, for
    // non-trivial systems with every state live
    push(
        "dcs_iff_dominant_probabilistic",
        non_trivial && all_states_live,
        dcs.is_dcs == dominant_probabilistic,
    );
    // a DCS has characteristic root 1 or ∞ …
    push("dcs_implies_root_one_or_infinite", dcs.is_dcs, root_one_or_infinite);
    // … and at most countably many infinite executions everywhere
    push("dcs_implies_boundaries_countable", dcs.is_dcs, all_countable);
    // for irreducible non-trivial systems the three views coincide
    let irr = irreducible.verdict() && non_trivial;
    push("irreducible_dcs_iff_root_one", irr, dcs.is_dcs == root_is_one(&characteristic_root));
    push("irreducible_dcs_iff_boundary_countable", irr, dcs.is_dcs == all_countable);
    push("irreducible_one_countable_iff_all_countable", irr, some_countable == all_countable);
    // removing any letter of an irreducible system strictly raises the root
    push("irreducible_spectral_property", irreducible.verdict(), spectral.all_strict());
    // finiteness of M_α agrees with the vanishing of the growth row
    let lemma4 = sys.state_ids().zip(&finite_executions).all(|(s, &fin)| {
        fin == crate::analysis::growth_row_vanishes(sys, s, sys.n_states() + 1, 3)
    });
    push("finiteness_iff_growth_row_vanishes", true, lemma4);

    for c in &checks {
        assert!(
            !c.applicable || c.holds,
            "internal inconsistency: {} failed on a system where it applies",
            c.name
        );
    }

    Ok(AnalysisReport {
        mobius_matrix,
        theta: th,
        characteristic_root,
        growth_class: gclass,
        root_growth_consistent: consistent,
        irreducible,
        dcs,
        dominant_probabilistic,
        boundary,
        finite_executions,
        spectral,
        theorem_checks: checks,
    })
}

impl AnalysisReport {
    pub fn to_json_value(&self, sys: &ConcurrentSystem) -> serde_json::Value {
        let n = sys.n_states();
        let mu: Vec<Vec<serde_json::Value>> = (0..n)
            .map(|i| (0..n).map(|j| self.mobius_matrix.entry(i, j).to_json_value()).collect())
            .collect();
        let boundary: serde_json::Map<String, serde_json::Value> = sys
            .state_ids()
            .map(|s| {
                let v = match &self.boundary[s.index()] {
                    BoundaryCardinality::Empty => serde_json::json!({"class": "empty"}),
                    BoundaryCardinality::Countable => serde_json::json!({"class": "countable"}),
                    BoundaryCardinality::Uncountable { at, loop_a, loop_b } => serde_json::json!({
                        "class": "uncountable",
                        "witness": {
                            "state": sys.state_name(*at),
                            "loop_a": loop_a.render(),
                            "loop_b": loop_b.render(),
                        }
                    }),
                    BoundaryCardinality::Unknown => serde_json::json!({"class": "unknown"}),
                };
                (sys.state_name(s).to_string(), v)
            })
            .collect();
        let spectral: Vec<serde_json::Value> = self
            .spectral
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "letter": sys.alphabet().name(e.letter),
                    "restricted_root": e.restricted_root.to_json_value(),
                    "strictly_greater": e.strictly_greater,
                })
            })
            .collect();
        let dcs_witness = self.dcs.witness.map(|(s, a, b)| {
            serde_json::json!({
                "state": sys.state_name(s),
                "a": sys.alphabet().name(a),
                "b": sys.alphabet().name(b),
            })
        });
        let max_cliques = self.dcs.max_cliques.as_ref().map(|mc| {
            let m: serde_json::Map<String, serde_json::Value> = sys
                .state_ids()
                .map(|s| {
                    (
                        sys.state_name(s).to_string(),
                        serde_json::json!(mc[s.index()]
                            .iter()
                            .map(|l| sys.alphabet().name(l).to_string())
                            .collect::<Vec<_>>()),
                    )
                })
                .collect();
            serde_json::Value::Object(m)
        });
        let finite: serde_json::Map<String, serde_json::Value> = sys
            .state_ids()
            .map(|s| {
                (
                    sys.state_name(s).to_string(),
                    serde_json::json!(self.finite_executions[s.index()]),
                )
            })
            .collect();
        serde_json::json!({
            "system": {
                "states": sys.state_names(),
                "alphabet": sys.alphabet().to_json_value(),
            },
            "mobius_matrix": mu,
            "theta": self.theta.to_json_value(),
            "characteristic_root": self.characteristic_root.to_json_value(),
            "growth_check": {
                "classification": match self.growth_class {
                    GrowthClass::EventuallyZero => "eventually_zero",
                    GrowthClass::Growing => "growing",
                },
                "consistent_with_root": self.root_growth_consistent,
            },
            "irreducible": {
                "dependence_connected": self.irreducible.dependence_connected,
                "states_mutually_reachable": self.irreducible.states_mutually_reachable,
                "letters_always_usable": self.irreducible.letters_always_usable,
                "verdict": self.irreducible.verdict(),
            },
            "deterministic": {
                "is_dcs": self.dcs.is_dcs,
                "witness": dcs_witness,
                "powerset_check": self.dcs.powerset_check,
                "bounded_lattice_check": self.dcs.bounded_lattice_check,
                "max_cliques": max_cliques,
            },
            "dominant_probabilistic": self.dominant_probabilistic,
            "boundary": boundary,
            "finite_executions": finite,
            "spectral": spectral,
            "theorem_checks": serde_json::to_value(&self.theorem_checks).expect("serializes"),
        })
    }

    /// Human-readable rendering; the theorem table is printed in full.
    pub fn render_text(&self, sys: &ConcurrentSystem) -> String {
        let mut out = String::new();
        let n = sys.n_states();
        out.push_str(&format!(
            "states: {}\nletters: {}\n",
            sys.state_names().join(", "),
            sys.alphabet()
                .letters()
                .map(|l| sys.alphabet().name(l).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str("mobius matrix:\n");
        for i in 0..n {
            let row: Vec<String> =
                (0..n).map(|j| self.mobius_matrix.entry(i, j).to_string()).collect();
            out.push_str(&format!("  [{}]\n", row.join(", ")));
        }
        out.push_str(&format!("theta: {}\n", self.theta));
        out.push_str(&format!(
            "characteristic root: {}\n",
            self.characteristic_root.render()
        ));
        out.push_str(&format!(
            "irreducible: {} (dependence graph {}, strong connectivity {}, letter liveness {})\n",
            self.irreducible.verdict(),
            self.irreducible.dependence_connected,
            self.irreducible.states_mutually_reachable,
            self.irreducible.letters_always_usable,
        ));
        match self.dcs.witness {
            None => out.push_str("deterministic: true\n"),
            Some((s, a, b)) => out.push_str(&format!(
                "deterministic: false (conflict at {}: {}, {})\n",
                sys.state_name(s),
                sys.alphabet().name(a),
                sys.alphabet().name(b)
            )),
        }
        out.push_str(&format!(
            "dominant valuation probabilistic: {}\n",
            self.dominant_probabilistic
        ));
        for s in sys.state_ids() {
            let class = match &self.boundary[s.index()] {
                BoundaryCardinality::Empty => "empty".to_string(),
                BoundaryCardinality::Countable => "countable".to_string(),
                BoundaryCardinality::Uncountable { loop_a, loop_b, .. } => {
                    format!("uncountable (loops: {} and {})", loop_a.render(), loop_b.render())
                }
                BoundaryCardinality::Unknown => "unknown".to_string(),
            };
            out.push_str(&format!(
                "boundary at {}: {}\n",
                sys.state_name(s),
                class
            ));
        }
        out.push_str("spectral table:\n");
        for e in &self.spectral.entries {
            out.push_str(&format!(
                "  remove {}: root {} (> r: {})\n",
                sys.alphabet().name(e.letter),
                e.restricted_root.render(),
                e.strictly_greater
            ));
        }
        out.push_str("theorem checks:\n");
        for c in &self.theorem_checks {
            let status = if !c.applicable {
                "n/a"
            } else if c.holds {
                "holds"
            } else {
                "VIOLATED"
            };
            out.push_str(&format!("  {:<42} {}\n", c.name, status));
        }
        out
    }
}
