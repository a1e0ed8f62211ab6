//! Sensor events: parsing the JSONL stream, converting records to triples,
//! and tracking multi-step attack progress.
//!
//! Every event becomes an individual in the `ev:` namespace, typed by its
//! event class, stamped with `occurredAt`, and linked to the observed node
//! with `targets`. Attributes named `weakness_id` and `vulnerability_id`
//! turn into `hasWeakness`/`hasVulnerability` observations on the node
//! itself; any other attribute is kept as a data-property literal on the
//! event. All event-derived triples are tagged retractable so observations
//! can be withdrawn later without touching catalog knowledge.
//!
//! Multi-step attacks bring a step registry mapping event classes to step
//! indexes. The [`StepTracker`] stores, per node and attack, which steps
//! have been seen and when, ordered by timestamp. `sensor_id` is carried on
//! the record for provenance but produces no triple.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::term::{Literal, Resource, Triple};
use crate::vocab::{self, qualify as resource_in};

/// One normalized sensor event.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct EventRecord {
    pub event_id: String,
    pub timestamp: i64,
    pub sensor_id: String,
    pub node_id: String,
    pub event_class: String,
    #[serde(default)]
    pub attributes: BTreeMap<String, String>,
}

/// Parses a line-delimited JSON event stream. Blank lines are skipped,
/// order is preserved, and event ids must be unique within the stream.
pub fn parse_events(input: &str) -> Result<Vec<EventRecord>> {
    let mut seen = BTreeSet::new();
    let mut records = Vec::new();
    for (number, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let record: EventRecord = serde_json::from_str(line)
            .map_err(|e| Error::parse(number + 1, format!("event: {e}")))?;
        if record.timestamp < 0 {
            return Err(Error::parse(number + 1, "event timestamp must be non-negative"));
        }
        if !seen.insert(record.event_id.clone()) {
            return Err(Error::DuplicateEventId(record.event_id));
        }
        records.push(record);
    }
    Ok(records)
}


impl EventRecord {
    pub fn resource(&self) -> Result<Resource> {
        resource_in(vocab::PREFIX_EVENT, &self.event_id)
    }

    pub fn node_resource(&self) -> Result<Resource> {
        resource_in(vocab::PREFIX_NODE, &self.node_id)
    }

    pub fn class_resource(&self) -> Result<Resource> {
        resource_in(vocab::PREFIX_EVENT, &self.event_class)
    }
}

/// Converts one record into its triple set. Event classes the KB does not
/// know stay warnings: the event is stored typed as plain `core:Event`.
/// The conversion is pure, so identical inputs yield identical output.
pub fn to_triples(kb: &KnowledgeBase, event: &EventRecord) -> Result<(Vec<Triple>, Vec<String>)> {
    let mut triples = Vec::new();
    let mut warnings = Vec::new();
    let subject = event.resource()?;
    let node = event.node_resource()?;

    let class = event.class_resource()?;
    let class = if kb.is_class(&class) {
        class
    } else {
        warnings.push(format!(
            "event {}: unknown event class {}, stored as core:Event",
            event.event_id, class
        ));
        vocab::res(vocab::EVENT)
    };
    triples.push(Triple::resources(subject.clone(), vocab::res(vocab::TYPE), class));
    triples.push(Triple::literal(
        subject.clone(),
        vocab::res(vocab::OCCURRED_AT),
        Literal::integer(event.timestamp),
    ));
    triples.push(Triple::resources(subject.clone(), vocab::res(vocab::TARGETS), node.clone()));
    triples.push(Triple::resources(
        node.clone(),
        vocab::res(vocab::TYPE),
        vocab::res(vocab::SYSTEM),
    ));

    for (key, value) in &event.attributes {
        match key.as_str() {
            "weakness_id" => triples.push(Triple::resources(
                node.clone(),
                vocab::res(vocab::HAS_WEAKNESS),
                resource_in(vocab::PREFIX_CWE, value)?,
            )),
            "vulnerability_id" => triples.push(Triple::resources(
                node.clone(),
                vocab::res(vocab::HAS_VULNERABILITY),
                resource_in(vocab::PREFIX_CVE, value)?,
            )),
            _ => {
                let property = resource_in(vocab::PREFIX_EVENT, key)?;
                triples.push(Triple::resources(
                    property.clone(),
                    vocab::res(vocab::TYPE),
                    vocab::res(vocab::DATA_PROPERTY),
                ));
                triples.push(Triple::literal(
                    subject.clone(),
                    property,
                    Literal::string(value),
                ));
            }
        }
    }
    Ok((triples, warnings))
}

/// One step-registry document: which event classes make up which step of a
/// multi-phase attack.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct StepRegistry {
    pub attack_id: String,
    pub steps: Vec<StepEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct StepEntry {
    pub index: usize,
    pub event_class: String,
}

/// Parses a step-registry document and validates the step indexes: 1-based,
/// unique, with at least one step.
pub fn parse_registry(input: &str) -> Result<StepRegistry> {
    let mut registry: StepRegistry = serde_json::from_str(input)
        .map_err(|e| Error::parse(e.line(), format!("step registry: {e}")))?;
    if registry.steps.is_empty() {
        return Err(Error::parse(1, format!("registry {}: no steps", registry.attack_id)));
    }
    registry.steps.sort_by_key(|s| s.index);
    let mut seen = BTreeSet::new();
    for step in &registry.steps {
        if step.index == 0 {
            return Err(Error::parse(1, format!("registry {}: step index 0", registry.attack_id)));
        }
        if !seen.insert(step.index) {
            return Err(Error::parse(
                1,
                format!("registry {}: duplicate step index {}", registry.attack_id, step.index),
            ));
        }
    }
    Ok(registry)
}

/// One observed step of one attack on one node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StepObservation {
    pub timestamp: i64,
    pub index: usize,
    pub event_id: String,
}

/// Stores observed attack-step progress per `(node, attack)` pair. Events
/// are deduplicated by id across calls so replays leave the tracker
/// unchanged; observation lists stay sorted by timestamp.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepTracker {
    step_counts: BTreeMap<Resource, usize>,
    by_class: BTreeMap<Resource, Vec<(Resource, usize)>>,
    observed: BTreeMap<(Resource, Resource), Vec<StepObservation>>,
    seen_events: BTreeSet<String>,
}

impl StepTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a step registry with the tracker only. Most callers want
    /// [`install_registry`], which also declares the step classes in the KB.
    pub fn register(&mut self, registry: &StepRegistry) -> Result<()> {
        let attack = resource_in(vocab::PREFIX_CAPEC, &registry.attack_id)?;
        self.step_counts.insert(attack.clone(), registry.steps.len());
        for step in &registry.steps {
            let class = resource_in(vocab::PREFIX_EVENT, &step.event_class)?;
            let entries = self.by_class.entry(class).or_default();
            if !entries.contains(&(attack.clone(), step.index)) {
                entries.push((attack.clone(), step.index));
            }
        }
        Ok(())
    }

    /// Steps of `attack` observed on `node`, sorted by timestamp.
    pub fn observations(&self, node: &Resource, attack: &Resource) -> &[StepObservation] {
        self.observed
            .get(&(node.clone(), attack.clone()))
            .map(Vec::as_slice)
            .unwrap_or_default()
    }

    /// `(distinct steps seen, total steps)` of `attack` on `node`.
    pub fn progress(&self, node: &Resource, attack: &Resource) -> Result<(usize, usize)> {
        let total = self
            .step_counts
            .get(attack)
            .copied()
            .ok_or_else(|| Error::UnknownAttack(attack.as_str().to_string()))?;
        let distinct: BTreeSet<usize> =
            self.observations(node, attack).iter().map(|o| o.index).collect();
        Ok((distinct.len(), total))
    }

    /// Registered attacks, with their total step counts.
    pub fn attacks(&self) -> impl Iterator<Item = (&Resource, usize)> {
        self.step_counts.iter().map(|(attack, count)| (attack, *count))
    }

    /// `(node, attack)` pairs with at least one observation.
    pub fn observed_pairs(&self) -> impl Iterator<Item = (&Resource, &Resource)> {
        self.observed.keys().map(|(node, attack)| (node, attack))
    }

    fn record(&mut self, event: &EventRecord) -> Result<()> {
        if !self.seen_events.insert(event.event_id.clone()) {
            return Ok(());
        }
        let class = event.class_resource()?;
        let node = event.node_resource()?;
        let hits = match self.by_class.get(&class) {
            Some(hits) => hits.clone(),
            None => return Ok(()),
        };
        for (attack, index) in hits {
            let observation = StepObservation {
                timestamp: event.timestamp,
                index,
                event_id: event.event_id.clone(),
            };
            let list = self.observed.entry((node.clone(), attack)).or_default();
            let position = list.partition_point(|o| o.timestamp <= observation.timestamp);
            list.insert(position, observation);
        }
        Ok(())
    }
}

/// Declares a registry's step classes in the KB (classes under
/// `core:AttackStep`, `partOf` their attack) and registers it with the
/// tracker. Returns how many triples were new.
pub fn install_registry(
    kb: &mut KnowledgeBase,
    tracker: &mut StepTracker,
    registry: &StepRegistry,
) -> Result<usize> {
    let attack = resource_in(vocab::PREFIX_CAPEC, &registry.attack_id)?;
    let mut new = 0;
    for step in &registry.steps {
        let class = resource_in(vocab::PREFIX_EVENT, &step.event_class)?;
        for triple in [
            Triple::resources(class.clone(), vocab::res(vocab::TYPE), vocab::res(vocab::CLASS)),
            Triple::resources(
                class.clone(),
                vocab::res(vocab::SUB_CLASS_OF),
                vocab::res(vocab::ATTACK_STEP),
            ),
            Triple::resources(class, vocab::res(vocab::PART_OF), attack.clone()),
        ] {
            if kb.assert_triple(triple)? {
                new += 1;
            }
        }
    }
    tracker.register(registry)?;
    Ok(new)
}

/// Outcome of [`assert_events`]: new-triple count plus conversion warnings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventReport {
    pub new_triples: usize,
    pub warnings: Vec<String>,
}

/// Asserts every event's triples (tagged retractable) and updates the
/// tracker for events whose class is a registered attack step. Replaying a
/// stream adds nothing: the KB deduplicates triples and the tracker
/// deduplicates event ids.
pub fn assert_events(
    kb: &mut KnowledgeBase,
    events: &[EventRecord],
    tracker: &mut StepTracker,
) -> Result<EventReport> {
    let mut report = EventReport::default();
    for event in events {
        let (triples, warnings) = to_triples(kb, event)?;
        report.warnings.extend(warnings);
        for triple in triples {
            if kb.assert_retractable(triple)? {
                report.new_triples += 1;
            }
        }
        tracker.record(event)?;
    }
    Ok(report)
}

/// Strict temporal order: true iff `e1`'s timestamp is less than `e2`'s.
pub fn before(kb: &KnowledgeBase, e1: &Resource, e2: &Resource) -> Result<bool> {
    let t1 = kb
        .timestamp_of(e1)
        .ok_or_else(|| Error::MissingTimestamp(e1.as_str().to_string()))?;
    let t2 = kb
        .timestamp_of(e2)
        .ok_or_else(|| Error::MissingTimestamp(e2.as_str().to_string()))?;
    Ok(t1 < t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MITNICK_REGISTRY: &str = r#"{
        "attack_id": "MITNICK",
        "steps": [
            {"index": 1, "event_class": "SynFlood"},
            {"index": 2, "event_class": "SequencePrediction"},
            {"index": 3, "event_class": "RemoteShell"}
        ]
    }"#;

    fn seeded() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.load_core_ontology().unwrap();
        kb
    }

    fn event(id: &str, ts: i64, node: &str, class: &str) -> EventRecord {
        EventRecord {
            event_id: id.into(),
            timestamp: ts,
            sensor_id: "ids-1".into(),
            node_id: node.into(),
            event_class: class.into(),
            attributes: BTreeMap::new(),
        }
    }

    #[test]
    fn parse_preserves_order_and_validates_lines() {
        assert_eq!(parse_events("").unwrap(), Vec::new());
        assert_eq!(parse_events("\n  \n").unwrap(), Vec::new());

        let input = concat!(
            r#"{"event_id": "e1", "timestamp": 10, "sensor_id": "ids-1", "node_id": "s1", "event_class": "core:WeaknessObserved", "attributes": {"weakness_id": "CWE-345"}}"#,
            "\n",
            r#"{"event_id": "e2", "timestamp": 20, "sensor_id": "ids-1", "node_id": "s2", "event_class": "SynFlood"}"#,
            "\n",
        );
        let records = parse_events(input).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].event_id, "e1");
        assert_eq!(records[0].attributes["weakness_id"], "CWE-345");
        assert_eq!(records[1].timestamp, 20);

        let missing = r#"{"event_id": "e1", "timestamp": 1, "sensor_id": "x", "event_class": "c"}"#;
        let err = parse_events(&format!("\n{missing}")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "got {err:?}");

        let duplicated = r#"{"event_id": "e1", "timestamp": 1, "sensor_id": "x", "node_id": "s1", "event_class": "c"}"#;
        assert_eq!(
            parse_events(&format!("{duplicated}\n{duplicated}")),
            Err(Error::DuplicateEventId("e1".into()))
        );

        let negative = r#"{"event_id": "e1", "timestamp": -5, "sensor_id": "x", "node_id": "s1", "event_class": "c"}"#;
        assert!(matches!(parse_events(negative), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn minimal_event_produces_exactly_the_link_triples() {
        let kb = seeded();
        let record = event("e1", 10, "s1", "core:WeaknessObserved");
        let (triples, warnings) = to_triples(&kb, &record).unwrap();
        assert!(warnings.is_empty());
        let lines: Vec<String> = triples.iter().map(|t| t.to_line()).collect();
        assert_eq!(
            lines,
            vec![
                "ev:e1 core:type core:WeaknessObserved .",
                "ev:e1 core:occurredAt \"10\"^^integer .",
                "ev:e1 core:targets node:s1 .",
                "node:s1 core:type core:System .",
            ]
        );
        assert_eq!(to_triples(&kb, &record).unwrap().0, triples);
    }

    #[test]
    fn weakness_and_vulnerability_attributes_land_on_the_node() {
        let kb = seeded();
        let mut record = event("e1", 10, "s1", "core:WeaknessObserved");
        record.attributes.insert("weakness_id".into(), "CWE-345".into());
        record.attributes.insert("vulnerability_id".into(), "CVE-2009-0217".into());
        record.attributes.insert("source_ip".into(), "10.0.0.9".into());
        let (triples, _) = to_triples(&kb, &record).unwrap();
        let lines: BTreeSet<String> = triples.iter().map(|t| t.to_line()).collect();
        for expected in [
            "node:s1 core:hasWeakness cwe:CWE-345 .",
            "node:s1 core:hasVulnerability cve:CVE-2009-0217 .",
            "ev:source_ip core:type core:DataProperty .",
            "ev:e1 ev:source_ip \"10.0.0.9\"^^string .",
        ] {
            assert!(lines.contains(expected), "missing {expected}");
        }
    }

    #[test]
    fn unknown_event_classes_fall_back_to_core_event() {
        let kb = seeded();
        let record = event("e1", 10, "s1", "PortScan");
        let (triples, warnings) = to_triples(&kb, &record).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("ev:PortScan"));
        assert_eq!(triples[0].to_line(), "ev:e1 core:type core:Event .");
    }

    #[test]
    fn assertion_is_idempotent_and_retractable() {
        let mut kb = seeded();
        let mut tracker = StepTracker::new();
        assert_eq!(assert_events(&mut kb, &[], &mut tracker).unwrap().new_triples, 0);

        let mut record = event("e1", 10, "s1", "core:WeaknessObserved");
        record.attributes.insert("weakness_id".into(), "CWE-345".into());
        let events = vec![record];
        let first = assert_events(&mut kb, &events, &mut tracker).unwrap();
        assert_eq!(first.new_triples, 5);
        let replay = assert_events(&mut kb, &events, &mut tracker).unwrap();
        assert_eq!(replay.new_triples, 0);

        let observation =
            Triple::parse_line("node:s1 core:hasWeakness cwe:CWE-345 .").unwrap();
        kb.retract(&observation).unwrap();
        assert!(!kb.contains(&observation));
    }

    #[test]
    fn registry_installation_declares_step_classes() {
        let mut kb = seeded();
        let mut tracker = StepTracker::new();
        let registry = parse_registry(MITNICK_REGISTRY).unwrap();
        let new = install_registry(&mut kb, &mut tracker, &registry).unwrap();
        assert_eq!(new, 9);
        assert!(kb.is_class(&Resource::new("ev:SynFlood").unwrap()));
        assert!(kb.contains(
            &Triple::parse_line("ev:SynFlood core:partOf capec:MITNICK .").unwrap()
        ));
        assert_eq!(install_registry(&mut kb, &mut tracker, &registry).unwrap(), 0);
    }

    #[test]
    fn registry_validation_rejects_bad_step_indexes() {
        for bad in [
            r#"{"attack_id": "A", "steps": []}"#,
            r#"{"attack_id": "A", "steps": [{"index": 0, "event_class": "X"}]}"#,
            r#"{"attack_id": "A", "steps": [{"index": 1, "event_class": "X"},
                                            {"index": 1, "event_class": "Y"}]}"#,
        ] {
            assert!(matches!(parse_registry(bad), Err(Error::Parse { .. })), "accepted {bad}");
        }
    }

    #[test]
    fn tracker_records_steps_sorted_by_timestamp() {
        let mut kb = seeded();
        let mut tracker = StepTracker::new();
        let registry = parse_registry(MITNICK_REGISTRY).unwrap();
        install_registry(&mut kb, &mut tracker, &registry).unwrap();

        let events = vec![
            event("e2", 30, "h1", "SequencePrediction"),
            event("e1", 10, "h1", "SynFlood"),
            event("e3", 20, "h2", "SynFlood"),
        ];
        assert_events(&mut kb, &events, &mut tracker).unwrap();

        let node = Resource::new("node:h1").unwrap();
        let attack = Resource::new("capec:MITNICK").unwrap();
        let observed = tracker.observations(&node, &attack);
        let stamps: Vec<i64> = observed.iter().map(|o| o.timestamp).collect();
        assert_eq!(stamps, vec![10, 30]);
        assert_eq!(observed[0].index, 1);
        assert_eq!(tracker.progress(&node, &attack).unwrap(), (2, 3));

        let other = Resource::new("node:h2").unwrap();
        assert_eq!(tracker.progress(&other, &attack).unwrap(), (1, 3));
        assert_eq!(
            tracker.progress(&node, &Resource::new("capec:NONE").unwrap()),
            Err(Error::UnknownAttack("capec:NONE".into()))
        );
    }

    #[test]
    fn before_is_strict_and_needs_timestamps() {
        let mut kb = seeded();
        let mut tracker = StepTracker::new();
        let events = vec![
            event("e1", 10, "s1", "core:WeaknessObserved"),
            event("e2", 20, "s1", "core:WeaknessObserved"),
            event("e3", 20, "s2", "core:WeaknessObserved"),
        ];
        assert_events(&mut kb, &events, &mut tracker).unwrap();
        let e = |id: &str| Resource::new(format!("ev:{id}")).unwrap();
        assert!(before(&kb, &e("e1"), &e("e2")).unwrap());
        assert!(!before(&kb, &e("e2"), &e("e1")).unwrap());
        assert!(!before(&kb, &e("e2"), &e("e3")).unwrap());
        assert_eq!(
            before(&kb, &e("e1"), &e("e9")),
            Err(Error::MissingTimestamp("ev:e9".into()))
        );
    }
}
