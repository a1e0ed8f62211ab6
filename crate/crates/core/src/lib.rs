//! Ontology-driven attack knowledge base.
//!
//! The crate turns CAPEC/CWE/CVE-style catalogs into a triple-based
//! knowledge graph, asserts sensor events into it, forward-chains Horn rules
//! until fixpoint to mark nodes as Vulnerable, UnderPotentialAttackSystem,
//! or UnderAttackSystem, answers the canonical attack queries, aggregates
//! everything into prediction reports, and computes ontology-quality
//! metrics with exact rational arithmetic.
//!
//! Modules, in dependency order:
//!
//! * [`term`] and [`vocab`]: resources, literals, triples, core vocabulary.
//! * [`kb`]: the indexed triple store with schema bookkeeping.
//! * [`rules`]: Horn rule model, text format, and the forward chainer.
//! * [`query`]: pattern queries and the canonical query builders.
//! * [`ingest`]: catalog parsing, the intermediate concept graph, ontology
//!   emission, and attack rule generation.
//! * [`events`]: sensor event streams, attack step registries, temporal
//!   ordering.
//! * [`predict`]: system state plus prediction reports.
//! * [`metrics`]: schema and instance metrics over the knowledge base.

pub mod error;
pub mod events;
pub mod ingest;
pub mod metrics;
pub mod predict;
pub mod query;
pub mod rules;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod kb;
pub mod term;
pub mod vocab;

pub use error::{Error, Result};
pub use kb::{Bindings, KnowledgeBase};
pub use query::{evaluate, parse_query, Query};
pub use rules::{forward_chain, parse_rules, ChainLimits, DerivationReport, Rule, RuleSet};
pub use term::{Datatype, Literal, Pattern, Resource, Term, Triple, Variable};
