//! Reference evaluators and seeded instance generators for the oracle test
//! suites. Built only with the `testkit` feature and carries no stability
//! promises.
//!
//! Everything here favors the most literal implementation available: plain
//! scans over the raw triple set with no indexes, no delta tracking, and no
//! registry shortcuts, so a defect in the production paths cannot hide in
//! the comparison.

pub mod generate;
pub mod reference;

pub use generate::{permuted, random_kb, random_ontology, random_query, random_ruleset, Universe};
pub use reference::{brute_force_metrics, naive_fixpoint, nested_loop_query};
