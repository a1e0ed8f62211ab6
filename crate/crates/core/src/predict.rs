//! The prediction pipeline: infer, query, group, filter against system
//! state, and rank.
//!
//! After forward chaining, candidate `(attack, node)` pairs are collected
//! from three sources: weakness observations (via the by-weakness query),
//! vulnerability observations (via the chain query), and attack-marker
//! individuals left behind by fired detection rules. Candidates are grouped
//! by exact `(attack, node)` key, nodes that are inactive or unreachable in
//! the [`SystemState`] are dropped, and each surviving group is scored by
//! prerequisite coverage: how many of the attack's catalog-linked
//! weaknesses and vulnerabilities the node actually bears. Scores are exact
//! rationals; an entry reports `UnderAttackSystem` only when a detection
//! marker exists and its score is 1, so partial evidence can never claim a
//! completed attack.
//!
//! Report identifiers are namespaced resource strings (`node:s1`,
//! `capec:CAPEC-111`, `cwe:CWE-345`), and entries sort by score descending,
//! then attack id, then node id. Serialization is stable, so identical
//! inputs give byte-identical reports.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::events::StepTracker;
use crate::ingest::attack_marker;
use crate::kb::KnowledgeBase;
use crate::query::{evaluate, q_attacks_of_type, q_by_vulnerability, q_by_weakness};
use crate::rules::{base_rule_name, forward_chain, ChainLimits, RuleSet};
use crate::term::{Pattern, Resource, Term, Triple, Variable};
use crate::vocab;

/// Per-node slice of the system state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub reachable: bool,
    pub weaknesses: BTreeSet<Resource>,
    pub vulnerabilities: BTreeSet<Resource>,
}

impl Default for NodeState {
    fn default() -> Self {
        NodeState { reachable: true, weaknesses: BTreeSet::new(), vulnerabilities: BTreeSet::new() }
    }
}

/// The network state predictions are matched against: which nodes are
/// active, whether they are reachable, and the security issues observed on
/// them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemState {
    nodes: BTreeMap<Resource, NodeState>,
}

impl SystemState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mirrors the KB: every individual typed under `core:System` becomes an
    /// active, reachable node carrying its observed weaknesses and
    /// vulnerabilities.
    pub fn from_kb(kb: &KnowledgeBase) -> Result<Self> {
        let mut state = SystemState::new();
        for node in kb.instances_of(&vocab::res(vocab::SYSTEM), true)? {
            let mut entry = NodeState::default();
            for issue in objects_of(kb, &node, vocab::HAS_WEAKNESS)? {
                entry.weaknesses.insert(issue);
            }
            for issue in objects_of(kb, &node, vocab::HAS_VULNERABILITY)? {
                entry.vulnerabilities.insert(issue);
            }
            state.nodes.insert(node, entry);
        }
        Ok(state)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Resource, &NodeState)> {
        self.nodes.iter()
    }

    /// Active and reachable: the only nodes predictions may mention.
    pub fn admits(&self, node: &Resource) -> bool {
        self.nodes.get(node).is_some_and(|n| n.reachable)
    }

    pub fn set_reachable(&mut self, node: &Resource, reachable: bool) {
        if let Some(entry) = self.nodes.get_mut(node) {
            entry.reachable = reachable;
        }
    }

    pub fn deactivate(&mut self, node: &Resource) {
        self.nodes.remove(node);
    }

    /// Applies a parsed state file. Overrides must reference nodes the KB
    /// already knows as individuals.
    pub fn apply_overrides(
        &mut self,
        kb: &KnowledgeBase,
        overrides: &[NodeOverride],
    ) -> Result<()> {
        for item in overrides {
            let node = vocab::qualify(vocab::PREFIX_NODE, &item.id)?;
            if !kb.individuals().contains(&node) {
                return Err(Error::parse(0, format!("state references unknown node {node}")));
            }
            if !item.active {
                self.deactivate(&node);
            } else {
                self.nodes.entry(node.clone()).or_default();
                self.set_reachable(&node, item.reachable);
            }
        }
        Ok(())
    }

    fn observed_weaknesses(&self) -> BTreeSet<&Resource> {
        self.nodes.values().flat_map(|n| n.weaknesses.iter()).collect()
    }

    fn observed_vulnerabilities(&self) -> BTreeSet<&Resource> {
        self.nodes.values().flat_map(|n| n.vulnerabilities.iter()).collect()
    }
}

/// One entry of the optional state file.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct NodeOverride {
    pub id: String,
    #[serde(default = "default_true")]
    pub active: bool,
    #[serde(default = "default_true")]
    pub reachable: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
struct StateDocument {
    nodes: Vec<NodeOverride>,
}

/// Parses the state-file JSON, `{"nodes": [{"id", "active", "reachable"}]}`.
pub fn parse_state(input: &str) -> Result<Vec<NodeOverride>> {
    let doc: StateDocument = serde_json::from_str(input)
        .map_err(|e| Error::parse(e.line(), format!("state: {e}")))?;
    Ok(doc.nodes)
}

/// Report status, ordered weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Status {
    Vulnerable,
    UnderPotentialAttackSystem,
    UnderAttackSystem,
}

/// Exact prerequisite-coverage ratio, serialized as `{"num", "den"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Score(pub Ratio<i64>);

impl Score {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Score(Ratio::new(numerator, denominator))
    }

    fn is_full(&self) -> bool {
        self.0 == Ratio::from_integer(1)
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Score", 2)?;
        s.serialize_field("num", self.0.numer())?;
        s.serialize_field("den", self.0.denom())?;
        s.end()
    }
}

/// One ranked `(node, attack)` finding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub node: String,
    pub attack: String,
    pub status: Status,
    pub score: Score,
    pub satisfied: Vec<String>,
    pub missing: Vec<String>,
    pub consequences: Vec<String>,
    pub provenance: Vec<String>,
}

/// The ranked prediction report. `generated_at` is the latest event
/// timestamp in the KB, 0 when no events are loaded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionReport {
    pub generated_at: i64,
    pub entries: Vec<ReportEntry>,
}

impl PredictionReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

fn objects_of(kb: &KnowledgeBase, subject: &Resource, predicate: &str) -> Result<Vec<Resource>> {
    let v = Variable::new("?x").expect("static variable");
    let pattern = Pattern::new(
        Term::Resource(subject.clone()),
        Term::Resource(vocab::res(predicate)),
        Term::Variable(v.clone()),
    );
    let mut out = Vec::new();
    for bindings in kb.match_pattern(&pattern)? {
        if let Some(Term::Resource(r)) = bindings.get(&v) {
            out.push(r.clone());
        }
    }
    Ok(out)
}

fn consequence_name(class: &Resource) -> Option<&'static str> {
    match class.as_str() {
        vocab::UNAUTHORIZED_DISCLOSURE => Some("unauthorized_disclosure"),
        vocab::DECEPTION => Some("deception"),
        vocab::DISRUPTION => Some("disruption"),
        vocab::USURPATION => Some("usurpation"),
        _ => None,
    }
}

/// Runs the full pipeline: forward-chain, collect candidates from
/// observations and markers, filter by state, score, and rank.
pub fn run_prediction(
    kb: &mut KnowledgeBase,
    rules: &RuleSet,
    state: &SystemState,
    limits: ChainLimits,
) -> Result<PredictionReport> {
    let base = vocab::res(vocab::ATTACK_PATTERN);
    let mut attacks = match kb.subclass_closure(&base) {
        Ok(closure) => closure,
        Err(Error::UnknownClass(_)) => return Err(Error::EmptyOntology),
        Err(other) => return Err(other),
    };
    attacks.remove(&base);
    if attacks.is_empty() {
        return Err(Error::EmptyOntology);
    }

    let derivation = forward_chain(kb, rules, limits)?;

    // Marker pairs double as candidates and as the detection evidence that
    // lets an entry claim UnderAttackSystem status.
    let mut candidates: BTreeSet<(Resource, Resource)> = BTreeSet::new();
    let mut markers: BTreeSet<(Resource, Resource)> = BTreeSet::new();
    for attack in &attacks {
        for row in evaluate(kb, &q_attacks_of_type(attack))? {
            if let [_, Term::Resource(node)] = row.as_slice() {
                markers.insert((attack.clone(), node.clone()));
                candidates.insert((attack.clone(), node.clone()));
            }
        }
    }
    for weakness in state.observed_weaknesses() {
        for row in evaluate(kb, &q_by_weakness(weakness))? {
            if let [Term::Resource(attack), Term::Resource(node)] = row.as_slice() {
                if attacks.contains(attack) {
                    candidates.insert((attack.clone(), node.clone()));
                }
            }
        }
    }
    for vulnerability in state.observed_vulnerabilities() {
        for row in evaluate(kb, &q_by_vulnerability(vulnerability))? {
            if let [Term::Resource(attack), Term::Resource(node)] = row.as_slice() {
                if attacks.contains(attack) {
                    candidates.insert((attack.clone(), node.clone()));
                }
            }
        }
    }

    let weakness_classes = kb.subclass_closure(&vocab::res(vocab::WEAKNESS))?;
    let vulnerability_classes = kb.subclass_closure(&vocab::res(vocab::VULNERABILITY))?;
    let vulnerable = kb.instances_of(&vocab::res(vocab::VULNERABLE), true)?;
    let potential = kb.instances_of(&vocab::res(vocab::UNDER_POTENTIAL_ATTACK), true)?;

    let mut entries = Vec::new();
    for (attack, node) in candidates {
        if !state.admits(&node) {
            continue;
        }
        let mut satisfied = Vec::new();
        let mut missing = Vec::new();
        for linked in objects_of(kb, &attack, vocab::RELATED_TO)? {
            let property = if weakness_classes.contains(&linked) {
                vocab::HAS_WEAKNESS
            } else if vulnerability_classes.contains(&linked) {
                vocab::HAS_VULNERABILITY
            } else {
                continue;
            };
            let held = Triple::resources(node.clone(), vocab::res(property), linked.clone());
            if kb.contains(&held) {
                satisfied.push(linked.as_str().to_string());
            } else {
                missing.push(linked.as_str().to_string());
            }
        }
        let total = satisfied.len() + missing.len();
        let score = if total == 0 {
            Score::new(0, 1)
        } else {
            Score::new(satisfied.len() as i64, total as i64)
        };

        let marked = markers.contains(&(attack.clone(), node.clone()));
        let status = if marked && score.is_full() {
            Status::UnderAttackSystem
        } else if potential.contains(&node) {
            Status::UnderPotentialAttackSystem
        } else if vulnerable.contains(&node) {
            Status::Vulnerable
        } else {
            continue;
        };

        let mut consequences: Vec<String> = objects_of(kb, &attack, vocab::HAS_CONSEQUENCE)?
            .iter()
            .filter_map(consequence_name)
            .map(str::to_string)
            .collect();
        consequences.sort_unstable();
        consequences.dedup();

        let marker = attack_marker(&attack);
        let mut provenance: BTreeSet<String> = BTreeSet::new();
        for triple in [
            Triple::resources(node.clone(), vocab::res(vocab::TYPE), vocab::res(vocab::VULNERABLE)),
            Triple::resources(
                node.clone(),
                vocab::res(vocab::TYPE),
                vocab::res(vocab::UNDER_POTENTIAL_ATTACK),
            ),
            Triple::resources(
                node.clone(),
                vocab::res(vocab::TYPE),
                vocab::res(vocab::UNDER_ATTACK),
            ),
            Triple::resources(marker.clone(), vocab::res(vocab::TYPE), attack.clone()),
            Triple::resources(marker, vocab::res(vocab::TARGETS), node.clone()),
        ] {
            if let Some(rules) = derivation.derived_by(&triple) {
                provenance.extend(rules.iter().map(|name| base_rule_name(name).to_string()));
            }
        }

        entries.push(ReportEntry {
            node: node.as_str().to_string(),
            attack: attack.as_str().to_string(),
            status,
            score,
            satisfied,
            missing,
            consequences,
            provenance: provenance.into_iter().collect(),
        });
    }

    entries.sort_by(|a, b| {
        b.score.cmp(&a.score).then_with(|| a.attack.cmp(&b.attack)).then_with(|| a.node.cmp(&b.node))
    });

    let generated_at = latest_event_timestamp(kb)?;
    Ok(PredictionReport { generated_at, entries })
}

fn latest_event_timestamp(kb: &KnowledgeBase) -> Result<i64> {
    let e = Variable::new("?e").expect("static variable");
    let t = Variable::new("?t").expect("static variable");
    let pattern = Pattern::new(
        Term::Variable(e),
        Term::Resource(vocab::res(vocab::OCCURRED_AT)),
        Term::Variable(t.clone()),
    );
    let mut latest = 0;
    for bindings in kb.match_pattern(&pattern)? {
        if let Some(Term::Literal(l)) = bindings.get(&t) {
            if let Some(value) = l.as_i64() {
                latest = latest.max(value);
            }
        }
    }
    Ok(latest)
}

/// Multi-step attack progress for one `(attack, node)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepProgress {
    pub completed: usize,
    pub total: usize,
    pub next: Option<usize>,
    pub in_order: bool,
}

/// Summarizes the tracker for one attack on one node: steps completed, the
/// next expected step, and whether the recorded sequence is an in-order
/// prefix of the registered step list.
pub fn step_progress(
    tracker: &StepTracker,
    attack: &Resource,
    node: &Resource,
) -> Result<StepProgress> {
    let (completed, total) = tracker.progress(node, attack)?;
    let observed = tracker.observations(node, attack);
    let sequence: Vec<usize> = observed.iter().map(|o| o.index).collect();
    let distinct: BTreeSet<usize> = sequence.iter().copied().collect();
    let prefix = distinct.iter().copied().eq(1..=distinct.len());
    let non_decreasing = sequence.windows(2).all(|w| w[0] <= w[1]);
    let next = (1..=total).find(|index| !distinct.contains(index));
    Ok(StepProgress { completed, total, next, in_order: prefix && non_decreasing })
}
