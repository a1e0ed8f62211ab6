//! Ontology and knowledge-base quality metrics with exact arithmetic.
//!
//! The ontology side measures the schema: relationship richness (declared
//! properties against all relations including inheritance links),
//! inheritance richness (subclass links per class), attribute richness
//! (functional object properties plus data properties per class), the
//! property-per-class medium, hierarchy depth, and fanout rankings for the
//! subclass and part-of hierarchies. The knowledge-base side measures how
//! individuals populate that schema: class richness, per-class
//! connectivity, per-class importance, connected components of the
//! individual graph, and per-class object-property utilization.
//!
//! Every ratio is an exact rational; a zero denominator reports value 0
//! with an `undefined` flag instead of failing, so lifecycle tracking
//! tolerates empty snapshots. Rank lists and maps keep only non-zero
//! entries. Computation never mutates the KB.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kb::{KnowledgeBase, PropertyKind};
use crate::term::{Resource, Term};
use crate::vocab;

/// An exact ratio, `{"num", "den", "undefined"}` in JSON. A zero input
/// denominator yields `0/1` with the flag set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational {
    numerator: i64,
    denominator: i64,
    undefined: bool,
}

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        if denominator == 0 {
            return Rational { numerator: 0, denominator: 1, undefined: true };
        }
        let reduced = Ratio::new(numerator, denominator);
        Rational {
            numerator: *reduced.numer(),
            denominator: *reduced.denom(),
            undefined: false,
        }
    }

    pub fn zero() -> Self {
        Rational::new(0, 1)
    }

    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn is_undefined(&self) -> bool {
        self.undefined
    }

    /// Exact difference, undefined when either side is.
    pub fn delta(later: Rational, earlier: Rational) -> Rational {
        if later.undefined || earlier.undefined {
            return Rational { numerator: 0, denominator: 1, undefined: true };
        }
        let diff = later.value() - earlier.value();
        Rational { numerator: *diff.numer(), denominator: *diff.denom(), undefined: false }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Rational", 3)?;
        s.serialize_field("num", &self.numerator)?;
        s.serialize_field("den", &self.denominator)?;
        s.serialize_field("undefined", &self.undefined)?;
        s.end()
    }
}

/// Schema-side metrics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OntologyMetrics {
    pub object_properties_richness: Rational,
    pub inheritance_richness: Rational,
    pub data_properties_richness: Rational,
    pub class_count: usize,
    pub medium_po: Rational,
    pub isa_depth: usize,
    pub isa_fanout_rank: Vec<(String, usize)>,
    pub partof_fanout_rank: Vec<(String, usize)>,
}

/// Instance-side metrics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KbMetrics {
    pub class_richness: Rational,
    pub class_connectivity: BTreeMap<String, usize>,
    pub class_importance: BTreeMap<String, Rational>,
    pub individual_graph_components: usize,
    pub kb_object_properties_richness: BTreeMap<String, Rational>,
}

/// Both metric families, serialized as `{"ontology": ..., "kb": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub ontology: OntologyMetrics,
    pub kb: KbMetrics,
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("metrics serialize");
        out.push('\n');
        out
    }
}

/// Computes both metric families.
pub fn compute_metrics(kb: &KnowledgeBase) -> Result<MetricsReport> {
    Ok(MetricsReport { ontology: compute_ontology_metrics(kb)?, kb: compute_kb_metrics(kb) })
}

fn rank(counts: BTreeMap<Resource, usize>) -> Vec<(String, usize)> {
    let mut out: Vec<(String, usize)> = counts
        .into_iter()
        .filter(|(_, count)| *count > 0)
        .map(|(class, count)| (class.as_str().to_string(), count))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Schema metrics. `P` counts every declared property (object and data),
/// `H` counts subclass links, `C` counts classes.
pub fn compute_ontology_metrics(kb: &KnowledgeBase) -> Result<OntologyMetrics> {
    let classes = kb.classes();
    if classes.is_empty() {
        return Err(Error::EmptyOntology);
    }
    let c = classes.len() as i64;
    let p = kb.properties().len() as i64;
    let h = kb.subclass_edge_count() as i64;
    let functional_object = kb
        .properties()
        .values()
        .filter(|d| d.kind == PropertyKind::Object && d.functional)
        .count() as i64;
    let data = kb.properties().values().filter(|d| d.kind == PropertyKind::Data).count() as i64;

    let isa_counts: BTreeMap<Resource, usize> =
        classes.iter().map(|class| (class.clone(), kb.direct_children(class).len())).collect();

    let mut partof_counts: BTreeMap<Resource, usize> = BTreeMap::new();
    for triple in kb.triples() {
        if triple.predicate.as_str() != vocab::PART_OF {
            continue;
        }
        if let Term::Resource(object) = &triple.object {
            if kb.is_class(object) {
                *partof_counts.entry(object.clone()).or_default() += 1;
            }
        }
    }

    Ok(OntologyMetrics {
        object_properties_richness: Rational::new(p, p + h),
        inheritance_richness: Rational::new(h, c),
        data_properties_richness: Rational::new(functional_object + data, c),
        class_count: classes.len(),
        medium_po: Rational::new(p, c),
        isa_depth: kb.hierarchy_depth(),
        isa_fanout_rank: rank(isa_counts),
        partof_fanout_rank: rank(partof_counts),
    })
}

/// A triple between two individuals over a declared, non-structural object
/// property: the edge set behind connectivity and the component count.
fn individual_links(kb: &KnowledgeBase) -> Vec<(&Resource, &Resource)> {
    kb.triples()
        .filter_map(|triple| {
            if vocab::STRUCTURAL_PREDICATES.contains(&triple.predicate.as_str()) {
                return None;
            }
            let decl = kb.property_decl(&triple.predicate)?;
            if decl.kind != PropertyKind::Object {
                return None;
            }
            let Term::Resource(object) = &triple.object else {
                return None;
            };
            if kb.individuals().contains(&triple.subject) && kb.individuals().contains(object) {
                Some((&triple.subject, object))
            } else {
                None
            }
        })
        .collect()
}

/// Instance metrics. A KB without classes or individuals produces zeros and
/// empty maps rather than an error.
pub fn compute_kb_metrics(kb: &KnowledgeBase) -> KbMetrics {
    let classes = kb.classes();
    let individuals = kb.individuals();
    let total_individuals = individuals.len() as i64;

    let direct: BTreeMap<&Resource, BTreeSet<Resource>> = classes
        .iter()
        .map(|class| {
            let members =
                kb.instances_of(class, false).expect("registered class has direct instances");
            (class, members)
        })
        .collect();
    let nonempty = direct.values().filter(|members| !members.is_empty()).count() as i64;
    let class_richness = if classes.is_empty() {
        Rational::new(0, 0)
    } else {
        Rational::new(nonempty, classes.len() as i64)
    };

    let links = individual_links(kb);
    let mut class_connectivity: BTreeMap<String, usize> = BTreeMap::new();
    for (subject, object) in &links {
        for (class, members) in &direct {
            if members.contains(subject) != members.contains(object) {
                *class_connectivity.entry(class.as_str().to_string()).or_default() += 1;
            }
        }
    }

    let mut class_importance: BTreeMap<String, Rational> = BTreeMap::new();
    for class in classes {
        let subtree =
            kb.instances_of(class, true).expect("registered class has inherited instances");
        if !subtree.is_empty() {
            class_importance.insert(
                class.as_str().to_string(),
                Rational::new(subtree.len() as i64, total_individuals),
            );
        }
    }

    let individual_graph_components = count_components(individuals, &links);

    let object_property_count =
        kb.properties().values().filter(|d| d.kind == PropertyKind::Object).count() as i64;
    let mut used: BTreeMap<&Resource, BTreeSet<&Resource>> = BTreeMap::new();
    for triple in kb.triples() {
        if vocab::STRUCTURAL_PREDICATES.contains(&triple.predicate.as_str()) {
            continue;
        }
        let is_object = kb
            .property_decl(&triple.predicate)
            .is_some_and(|decl| decl.kind == PropertyKind::Object);
        if is_object && individuals.contains(&triple.subject) {
            used.entry(&triple.subject).or_default().insert(&triple.predicate);
        }
    }
    let mut kb_object_properties_richness: BTreeMap<String, Rational> = BTreeMap::new();
    for (class, members) in &direct {
        if members.is_empty() {
            continue;
        }
        let used_total: i64 =
            members.iter().map(|i| used.get(i).map_or(0, |props| props.len() as i64)).sum();
        kb_object_properties_richness.insert(
            class.as_str().to_string(),
            Rational::new(used_total, members.len() as i64 * object_property_count),
        );
    }

    KbMetrics {
        class_richness,
        class_connectivity,
        class_importance,
        individual_graph_components,
        kb_object_properties_richness,
    }
}

/// Distinct object properties used by one individual (subject position)
/// over all declared object properties: the per-individual view behind the
/// class-level utilization metric.
pub fn individual_object_property_richness(kb: &KnowledgeBase, individual: &Resource) -> Rational {
    let object_property_count =
        kb.properties().values().filter(|d| d.kind == PropertyKind::Object).count() as i64;
    let mut used: BTreeSet<&Resource> = BTreeSet::new();
    for triple in kb.triples() {
        if triple.subject != *individual
            || vocab::STRUCTURAL_PREDICATES.contains(&triple.predicate.as_str())
        {
            continue;
        }
        if kb.property_decl(&triple.predicate).is_some_and(|d| d.kind == PropertyKind::Object) {
            used.insert(&triple.predicate);
        }
    }
    Rational::new(used.len() as i64, object_property_count)
}

fn count_components(
    individuals: &BTreeSet<Resource>,
    links: &[(&Resource, &Resource)],
) -> usize {
    let index: BTreeMap<&Resource, usize> =
        individuals.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut parent: Vec<usize> = (0..individuals.len()).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for (a, b) in links {
        let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let roots: BTreeSet<usize> =
        (0..individuals.len()).map(|i| find(&mut parent, i)).collect();
    roots.len()
}

/// Differences between two rank lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RankDiff {
    pub entered: Vec<(String, usize)>,
    pub left: Vec<(String, usize)>,
    pub moved: Vec<(String, usize, usize)>,
}

fn diff_rank(earlier: &[(String, usize)], later: &[(String, usize)]) -> RankDiff {
    let from: BTreeMap<&String, usize> = earlier.iter().map(|(c, n)| (c, *n)).collect();
    let to: BTreeMap<&String, usize> = later.iter().map(|(c, n)| (c, *n)).collect();
    let mut diff = RankDiff::default();
    for (class, count) in &to {
        match from.get(class) {
            None => diff.entered.push(((*class).clone(), *count)),
            Some(old) if old != count => diff.moved.push(((*class).clone(), *old, *count)),
            Some(_) => {}
        }
    }
    for (class, count) in &from {
        if !to.contains_key(class) {
            diff.left.push(((*class).clone(), *count));
        }
    }
    diff
}

fn diff_int_map(
    earlier: &BTreeMap<String, usize>,
    later: &BTreeMap<String, usize>,
) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    let keys: BTreeSet<&String> = earlier.keys().chain(later.keys()).collect();
    for key in keys {
        let delta = later.get(key).copied().unwrap_or(0) as i64
            - earlier.get(key).copied().unwrap_or(0) as i64;
        if delta != 0 {
            out.insert(key.clone(), delta);
        }
    }
    out
}

fn diff_rational_map(
    earlier: &BTreeMap<String, Rational>,
    later: &BTreeMap<String, Rational>,
) -> BTreeMap<String, Rational> {
    let mut out = BTreeMap::new();
    let keys: BTreeSet<&String> = earlier.keys().chain(later.keys()).collect();
    for key in keys {
        let delta = Rational::delta(
            later.get(key).copied().unwrap_or_else(Rational::zero),
            earlier.get(key).copied().unwrap_or_else(Rational::zero),
        );
        if delta.is_undefined() || delta.value() != Ratio::from_integer(0) {
            out.insert(key.clone(), delta);
        }
    }
    out
}

/// Signed per-metric changes from `earlier` to `later`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsDiff {
    pub object_properties_richness: Rational,
    pub inheritance_richness: Rational,
    pub data_properties_richness: Rational,
    pub class_count: i64,
    pub medium_po: Rational,
    pub isa_depth: i64,
    pub isa_fanout_rank: RankDiff,
    pub partof_fanout_rank: RankDiff,
    pub class_richness: Rational,
    pub class_connectivity: BTreeMap<String, i64>,
    pub class_importance: BTreeMap<String, Rational>,
    pub individual_graph_components: i64,
    pub kb_object_properties_richness: BTreeMap<String, Rational>,
}

/// Diffs two reports, later minus earlier.
pub fn diff_reports(earlier: &MetricsReport, later: &MetricsReport) -> MetricsDiff {
    MetricsDiff {
        object_properties_richness: Rational::delta(
            later.ontology.object_properties_richness,
            earlier.ontology.object_properties_richness,
        ),
        inheritance_richness: Rational::delta(
            later.ontology.inheritance_richness,
            earlier.ontology.inheritance_richness,
        ),
        data_properties_richness: Rational::delta(
            later.ontology.data_properties_richness,
            earlier.ontology.data_properties_richness,
        ),
        class_count: later.ontology.class_count as i64 - earlier.ontology.class_count as i64,
        medium_po: Rational::delta(later.ontology.medium_po, earlier.ontology.medium_po),
        isa_depth: later.ontology.isa_depth as i64 - earlier.ontology.isa_depth as i64,
        isa_fanout_rank: diff_rank(&earlier.ontology.isa_fanout_rank, &later.ontology.isa_fanout_rank),
        partof_fanout_rank: diff_rank(
            &earlier.ontology.partof_fanout_rank,
            &later.ontology.partof_fanout_rank,
        ),
        class_richness: Rational::delta(later.kb.class_richness, earlier.kb.class_richness),
        class_connectivity: diff_int_map(&earlier.kb.class_connectivity, &later.kb.class_connectivity),
        class_importance: diff_rational_map(&earlier.kb.class_importance, &later.kb.class_importance),
        individual_graph_components: later.kb.individual_graph_components as i64
            - earlier.kb.individual_graph_components as i64,
        kb_object_properties_richness: diff_rational_map(
            &earlier.kb.kb_object_properties_richness,
            &later.kb.kb_object_properties_richness,
        ),
    }
}
