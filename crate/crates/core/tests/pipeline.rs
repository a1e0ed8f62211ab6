//! End-to-end pipeline coverage from catalog and event text to the ranked
//! prediction report: parse, build the concept graph, emit the ontology,
//! generate rules, assert events, infer, and predict.

use aokb_core::events::{assert_events, parse_events, parse_registry, install_registry, StepTracker};
use aokb_core::ingest::{
    build_graph, emit_ontology, generate_attack_rules, parse_catalog, CatalogKind,
};
use aokb_core::predict::{run_prediction, step_progress, Score, Status, SystemState};
use aokb_core::{ChainLimits, KnowledgeBase, Resource, RuleSet, Triple};

const ATTACKS: &str = r#"{
  "kind": "attack_pattern",
  "records": [
    {
      "id": "CAPEC-111",
      "name": "JSON Hijacking",
      "description": "Luring a logged-in victim to a page that reads JSON responses.",
      "related_weakness_ids": ["CWE-345", "CWE-346", "CWE-352"],
      "prerequisites": ["victim holds an authenticated session"],
      "consequences": ["unauthorized_disclosure"]
    },
    {
      "id": "MITNICK",
      "name": "Session hijack via sequence prediction",
      "description": "Three-phase takeover of a trusted host connection.",
      "related_weakness_ids": ["CWE-400", "CWE-330"],
      "steps": [
        "flood the trusted host",
        "predict TCP sequence numbers",
        "open a spoofed remote shell"
      ],
      "consequences": ["usurpation", "disruption"]
    }
  ]
}"#;

const WEAKNESSES: &str = r#"{
  "kind": "weakness",
  "records": [
    {"id": "CWE-345", "name": "Insufficient Verification of Data Authenticity"},
    {"id": "CWE-346", "name": "Origin Validation Error", "parent_ids": ["CWE-345"]},
    {"id": "CWE-352", "name": "Cross-Site Request Forgery", "parent_ids": ["CWE-345"]},
    {"id": "CWE-400", "name": "Uncontrolled Resource Consumption"},
    {"id": "CWE-330", "name": "Use of Insufficiently Random Values"}
  ]
}"#;

const MITNICK_REGISTRY: &str = r#"{
  "attack_id": "MITNICK",
  "steps": [
    {"index": 1, "event_class": "SynFlood"},
    {"index": 2, "event_class": "SequencePrediction"},
    {"index": 3, "event_class": "RemoteShell"}
  ]
}"#;

fn event_line(id: &str, ts: i64, class: &str, node: &str, weakness: Option<&str>) -> String {
    let attributes = match weakness {
        Some(w) => format!(r#", "attributes": {{"weakness_id": "{w}"}}"#),
        None => String::new(),
    };
    format!(
        r#"{{"event_id": "{id}", "timestamp": {ts}, "sensor_id": "ids-1", "node_id": "{node}", "event_class": "{class}"{attributes}}}"#
    )
}

/// Parses the catalogs, emits the ontology, generates attack rules, and
/// asserts the given event stream.
fn build(events_jsonl: &str) -> (KnowledgeBase, RuleSet, StepTracker) {
    let mut entries = parse_catalog(ATTACKS, CatalogKind::AttackPattern).unwrap();
    entries.extend(parse_catalog(WEAKNESSES, CatalogKind::Weakness).unwrap());
    let graph = build_graph(&entries).unwrap();

    let mut kb = KnowledgeBase::new();
    emit_ontology(&graph, &mut kb).unwrap();
    let generated = generate_attack_rules(&graph).unwrap();
    let rules = RuleSet::new(generated.rules).unwrap();

    let mut tracker = StepTracker::new();
    let registry = parse_registry(MITNICK_REGISTRY).unwrap();
    install_registry(&mut kb, &mut tracker, &registry).unwrap();

    let events = parse_events(events_jsonl).unwrap();
    let report = assert_events(&mut kb, &events, &mut tracker).unwrap();
    assert!(report.warnings.is_empty(), "unexpected warnings: {:?}", report.warnings);

    (kb, rules, tracker)
}

fn res(name: &str) -> Resource {
    Resource::new(name).unwrap()
}

#[test]
fn full_weakness_coverage_reports_an_attack_in_progress() {
    let events = [
        event_line("e1", 100, "core:WeaknessObserved", "s1", Some("CWE-345")),
        event_line("e2", 140, "core:WeaknessObserved", "s1", Some("CWE-346")),
        event_line("e3", 180, "core:WeaknessObserved", "s1", Some("CWE-352")),
    ]
    .join("\n");
    let (mut kb, rules, _) = build(&events);
    let state = SystemState::from_kb(&kb).unwrap();
    let report = run_prediction(&mut kb, &rules, &state, ChainLimits::default()).unwrap();

    assert_eq!(report.generated_at, 180);
    let entry = report
        .entries
        .iter()
        .find(|e| e.node == "node:s1" && e.attack == "capec:CAPEC-111")
        .expect("CAPEC-111 entry for s1");
    assert_eq!(entry.status, Status::UnderAttackSystem);
    assert_eq!(entry.score, Score::new(1, 1));
    assert!(entry.missing.is_empty());
    assert_eq!(entry.consequences, ["unauthorized_disclosure"]);
    assert!(entry.provenance.iter().any(|rule| rule.starts_with("detect-w-CAPEC-111")));
}

#[test]
fn partial_coverage_reports_a_potential_attack_with_the_gap() {
    let events = [
        event_line("e1", 100, "core:WeaknessObserved", "s1", Some("CWE-345")),
        event_line("e2", 140, "core:WeaknessObserved", "s1", Some("CWE-346")),
    ]
    .join("\n");
    let (mut kb, rules, _) = build(&events);
    let state = SystemState::from_kb(&kb).unwrap();
    let report = run_prediction(&mut kb, &rules, &state, ChainLimits::default()).unwrap();

    let entry = report
        .entries
        .iter()
        .find(|e| e.node == "node:s1" && e.attack == "capec:CAPEC-111")
        .expect("CAPEC-111 entry for s1");
    assert_eq!(entry.status, Status::UnderPotentialAttackSystem);
    assert_eq!(entry.score, Score::new(2, 3));
    assert_eq!(entry.missing, ["cwe:CWE-352"]);
}

#[test]
fn unreachable_nodes_disappear_from_the_report() {
    let events = [
        event_line("e1", 100, "core:WeaknessObserved", "s1", Some("CWE-345")),
        event_line("e2", 140, "core:WeaknessObserved", "s1", Some("CWE-346")),
        event_line("e3", 180, "core:WeaknessObserved", "s1", Some("CWE-352")),
    ]
    .join("\n");
    let (mut kb, rules, _) = build(&events);
    let mut state = SystemState::from_kb(&kb).unwrap();
    state.set_reachable(&res("node:s1"), false);
    let report = run_prediction(&mut kb, &rules, &state, ChainLimits::default()).unwrap();
    assert!(report.entries.iter().all(|e| e.node != "node:s1"));
}

#[test]
fn detection_always_implies_the_potential_marking() {
    for subset in 1u8..8 {
        let weaknesses = ["CWE-345", "CWE-346", "CWE-352"];
        let lines: Vec<String> = weaknesses
            .iter()
            .enumerate()
            .filter(|(bit, _)| subset & (1 << bit) != 0)
            .map(|(bit, w)| {
                event_line(&format!("e{bit}"), 100 + bit as i64, "core:WeaknessObserved", "s1", Some(w))
            })
            .collect();
        let (mut kb, rules, _) = build(&lines.join("\n"));
        let state = SystemState::from_kb(&kb).unwrap();
        let report = run_prediction(&mut kb, &rules, &state, ChainLimits::default()).unwrap();

        let potential =
            Triple::parse_line("node:s1 core:type core:UnderPotentialAttackSystem .").unwrap();
        assert!(kb.contains(&potential), "subset {subset:03b}: no potential marking");
        for entry in report.entries.iter().filter(|e| e.status == Status::UnderAttackSystem) {
            let line = format!("{} core:type core:UnderPotentialAttackSystem .", entry.node);
            assert!(
                kb.contains(&Triple::parse_line(&line).unwrap()),
                "subset {subset:03b}: {} detected without potential marking",
                entry.node
            );
        }
    }
}

#[test]
fn the_staged_attack_is_tracked_step_by_step() {
    let stages = [
        ("m1", 100, "SynFlood"),
        ("m2", 200, "SequencePrediction"),
        ("m3", 300, "RemoteShell"),
    ];
    for upto in 1..=stages.len() {
        let lines: Vec<String> = stages[..upto]
            .iter()
            .map(|(id, ts, class)| event_line(id, *ts, class, "trusted-host", None))
            .collect();
        let (kb, _, tracker) = build(&lines.join("\n"));

        let progress =
            step_progress(&tracker, &res("capec:MITNICK"), &res("node:trusted-host")).unwrap();
        assert_eq!(progress.completed, upto);
        assert_eq!(progress.total, 3);
        assert_eq!(progress.next, if upto == 3 { None } else { Some(upto + 1) });
        assert!(progress.in_order);

        let typed = format!("ev:m{upto} core:type ev:{} .", stages[upto - 1].2);
        assert!(kb.contains(&Triple::parse_line(&typed).unwrap()));
    }
}

#[test]
fn out_of_order_steps_are_flagged() {
    let events = [
        event_line("m2", 100, "SequencePrediction", "trusted-host", None),
        event_line("m1", 200, "SynFlood", "trusted-host", None),
    ]
    .join("\n");
    let (_, _, tracker) = build(&events);
    let progress =
        step_progress(&tracker, &res("capec:MITNICK"), &res("node:trusted-host")).unwrap();
    assert_eq!(progress.completed, 2);
    assert!(!progress.in_order);
}

#[test]
fn identical_inputs_produce_byte_identical_reports() {
    let events = [
        event_line("e1", 100, "core:WeaknessObserved", "s1", Some("CWE-345")),
        event_line("e2", 140, "core:WeaknessObserved", "s2", Some("CWE-346")),
    ]
    .join("\n");
    let render = || {
        let (mut kb, rules, _) = build(&events);
        let state = SystemState::from_kb(&kb).unwrap();
        run_prediction(&mut kb, &rules, &state, ChainLimits::default()).unwrap().to_json()
    };
    assert_eq!(render(), render());
}
