//! Seeded random instances for the oracle suites: small knowledge bases,
//! safe rulesets, valid queries, and populated ontologies. Output is a
//! deterministic function of the RNG state.
//!
//! Generated rules keep structural predicates out of heads and only head
//! variables bound at resource positions, so every derived triple passes
//! store validation. Property declarations never mix kinds, keeping the
//! scan-based reference evaluators exact.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::kb::KnowledgeBase;
use crate::query::Query;
use crate::rules::{Atom, Rule, RuleSet, BUILTIN_BEFORE};
use crate::term::{Literal, Pattern, Resource, Term, Triple, Variable};
use crate::vocab;

/// The generated vocabulary of a random knowledge base, kept alongside it
/// so the rule and query generators draw from exactly the names that exist.
#[derive(Debug, Clone)]
pub struct Universe {
    pub classes: Vec<Resource>,
    pub object_properties: Vec<Resource>,
    pub data_properties: Vec<Resource>,
    pub individuals: Vec<Resource>,
}

fn res(name: impl AsRef<str>) -> Resource {
    Resource::new(name.as_ref()).expect("generated name is a valid resource")
}

fn var(name: &str) -> Variable {
    Variable::new(name).expect("generated name is a valid variable")
}

fn put(kb: &mut KnowledgeBase, subject: &Resource, predicate: &Resource, object: Term) {
    let triple = Triple::new(subject.clone(), predicate.clone(), object)
        .expect("generated triple is well formed");
    kb.assert_triple(triple).expect("generated triple validates");
}

fn put_core(kb: &mut KnowledgeBase, subject: &Resource, predicate: &str, object: Term) {
    put(kb, subject, &vocab::res(predicate), object);
}

fn type_marker(kb: &mut KnowledgeBase, subject: &Resource, marker: &str) {
    put_core(kb, subject, vocab::TYPE, Term::Resource(vocab::res(marker)));
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [Resource]) -> &'a Resource {
    items.choose(rng).expect("generator pools are non-empty")
}

/// A small knowledge base: the core ontology plus random classes,
/// properties of every flavor, typed individuals, links, timestamps, and
/// the occasional equivalence. Stays well under 500 triples.
pub fn random_kb<R: Rng>(rng: &mut R) -> (KnowledgeBase, Universe) {
    let mut kb = KnowledgeBase::new();
    kb.load_core_ontology().expect("core ontology loads");

    let classes: Vec<Resource> =
        (0..rng.gen_range(3..=6)).map(|i| res(format!("x:C{i}"))).collect();
    let object_properties: Vec<Resource> =
        (0..rng.gen_range(2..=4)).map(|i| res(format!("x:p{i}"))).collect();
    let data_properties: Vec<Resource> =
        (0..rng.gen_range(1..=2)).map(|i| res(format!("x:d{i}"))).collect();
    let individuals: Vec<Resource> =
        (0..rng.gen_range(4..=14)).map(|i| res(format!("x:i{i}"))).collect();

    for (i, class) in classes.iter().enumerate() {
        type_marker(&mut kb, class, vocab::CLASS);
        if i > 0 && rng.gen_bool(0.5) {
            let parent = classes[rng.gen_range(0..i)].clone();
            put_core(&mut kb, class, vocab::SUB_CLASS_OF, Term::Resource(parent));
        }
    }
    for property in &object_properties {
        let marker = match rng.gen_range(0..10) {
            0 => vocab::TRANSITIVE_PROPERTY,
            1 => vocab::SYMMETRIC_PROPERTY,
            2 => vocab::FUNCTIONAL_PROPERTY,
            _ => vocab::OBJECT_PROPERTY,
        };
        type_marker(&mut kb, property, marker);
    }
    if object_properties.len() >= 2 && rng.gen_bool(0.4) {
        put(
            &mut kb,
            &object_properties[0],
            &vocab::res(vocab::INVERSE_OF),
            Term::Resource(object_properties[1].clone()),
        );
    }
    if object_properties.len() >= 2 && rng.gen_bool(0.4) {
        let child = pick(rng, &object_properties).clone();
        let parent = pick(rng, &object_properties).clone();
        if child != parent {
            put(&mut kb, &child, &vocab::res(vocab::SUB_PROPERTY_OF), Term::Resource(parent));
        }
    }
    for property in &data_properties {
        type_marker(&mut kb, property, vocab::DATA_PROPERTY);
    }

    for individual in &individuals {
        for _ in 0..rng.gen_range(1..=2) {
            let class = pick(rng, &classes).clone();
            put_core(&mut kb, individual, vocab::TYPE, Term::Resource(class));
        }
        if rng.gen_bool(0.5) {
            let stamp = Literal::integer(rng.gen_range(0..=40));
            put_core(&mut kb, individual, vocab::OCCURRED_AT, Term::Literal(stamp));
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let a = pick(rng, &individuals).clone();
        let b = pick(rng, &individuals).clone();
        if a != b {
            put(&mut kb, &a, &vocab::res(vocab::EQUIVALENT_TO), Term::Resource(b));
        }
    }

    let seed_links =
        [vocab::HAS_WEAKNESS, vocab::HAS_VULNERABILITY, vocab::RELATED_TO].map(vocab::res);
    for _ in 0..rng.gen_range(8..=80) {
        let subject = pick(rng, &individuals).clone();
        let object = pick(rng, &individuals).clone();
        let predicate = if rng.gen_bool(0.75) {
            pick(rng, &object_properties).clone()
        } else {
            seed_links[rng.gen_range(0..seed_links.len())].clone()
        };
        put(&mut kb, &subject, &predicate, Term::Resource(object));
    }
    for _ in 0..rng.gen_range(0..=8) {
        let subject = pick(rng, &individuals).clone();
        let property = pick(rng, &data_properties).clone();
        let value = Literal::string(format!("v{}", rng.gen_range(0..5)));
        put(&mut kb, &subject, &property, Term::Literal(value));
    }

    (kb, Universe { classes, object_properties, data_properties, individuals })
}

/// Up to ten safe rules over the generated vocabulary, sometimes with a
/// disjunction group or a `before` filter, sometimes without the axiom
/// families.
pub fn random_ruleset<R: Rng>(rng: &mut R, universe: &Universe) -> RuleSet {
    let pool = [var("?x"), var("?y"), var("?z"), var("?w")];
    let mut rules = Vec::new();
    for k in 0..rng.gen_range(1..=10) {
        let mut body_and: Vec<Atom> = Vec::new();
        let mut resource_vars: Vec<Variable> = Vec::new();
        let note = |v: &Variable, vars: &mut Vec<Variable>| {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        };

        for j in 0..rng.gen_range(1..=3) {
            let roll = rng.gen_range(0..100);
            if j == 0 || roll < 60 {
                let subject = pool[rng.gen_range(0..pool.len())].clone();
                note(&subject, &mut resource_vars);
                let object = if rng.gen_bool(0.65) {
                    let v = pool[rng.gen_range(0..pool.len())].clone();
                    note(&v, &mut resource_vars);
                    Term::Variable(v)
                } else {
                    Term::Resource(pick(rng, &universe.individuals).clone())
                };
                body_and.push(Atom::Property {
                    property: pick(rng, &universe.object_properties).clone(),
                    subject: Term::Variable(subject),
                    object,
                });
            } else if roll < 80 {
                let term = pool[rng.gen_range(0..pool.len())].clone();
                note(&term, &mut resource_vars);
                body_and.push(Atom::Class {
                    class: pick(rng, &universe.classes).clone(),
                    term: Term::Variable(term),
                });
            } else {
                let subject = pool[rng.gen_range(0..pool.len())].clone();
                note(&subject, &mut resource_vars);
                let object = if rng.gen_bool(0.5) {
                    Term::Literal(Literal::string(format!("v{}", rng.gen_range(0..5))))
                } else {
                    Term::Variable(pool[rng.gen_range(0..pool.len())].clone())
                };
                body_and.push(Atom::Property {
                    property: pick(rng, &universe.data_properties).clone(),
                    subject: Term::Variable(subject),
                    object,
                });
            }
        }

        let bound: Vec<Variable> =
            body_and.iter().flat_map(Atom::binding_variables).collect();
        if bound.len() >= 2 && rng.gen_bool(0.2) {
            let a = bound[rng.gen_range(0..bound.len())].clone();
            let b = bound[rng.gen_range(0..bound.len())].clone();
            if a != b {
                body_and.push(Atom::Builtin {
                    name: BUILTIN_BEFORE.to_string(),
                    args: [Term::Variable(a), Term::Variable(b)],
                });
            }
        }

        let body_or = if rng.gen_bool(0.35) {
            let mut group = Vec::new();
            for _ in 0..rng.gen_range(2..=3) {
                let anchor = resource_vars[rng.gen_range(0..resource_vars.len())].clone();
                if rng.gen_bool(0.5) {
                    group.push(Atom::Class {
                        class: pick(rng, &universe.classes).clone(),
                        term: Term::Variable(anchor),
                    });
                } else {
                    group.push(Atom::Property {
                        property: pick(rng, &universe.object_properties).clone(),
                        subject: Term::Variable(anchor),
                        object: Term::Resource(pick(rng, &universe.individuals).clone()),
                    });
                }
            }
            Some(group)
        } else {
            None
        };

        let mut head = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let anchor = resource_vars[rng.gen_range(0..resource_vars.len())].clone();
            if rng.gen_bool(0.6) {
                head.push(Atom::Class {
                    class: pick(rng, &universe.classes).clone(),
                    term: Term::Variable(anchor),
                });
            } else {
                let object = if rng.gen_bool(0.5) {
                    let v = resource_vars[rng.gen_range(0..resource_vars.len())].clone();
                    Term::Variable(v)
                } else {
                    Term::Resource(pick(rng, &universe.individuals).clone())
                };
                head.push(Atom::Property {
                    property: pick(rng, &universe.object_properties).clone(),
                    subject: Term::Variable(anchor),
                    object,
                });
            }
        }

        rules.push(
            Rule::new(format!("r{k}"), body_and, body_or, head)
                .expect("generated rule is safe by construction"),
        );
    }
    if rng.gen_bool(0.25) {
        RuleSet::without_axioms(rules).expect("generated rule names are unique")
    } else {
        RuleSet::new(rules).expect("generated rule names are unique")
    }
}

/// The same rules in a shuffled order with the axiom selection preserved.
pub fn permuted<R: Rng>(rng: &mut R, rs: &RuleSet) -> RuleSet {
    let mut rules = rs.rules.clone();
    rules.shuffle(rng);
    let mut out = RuleSet::new(rules).expect("shuffled rules revalidate");
    out.axioms = rs.axioms.clone();
    out
}

/// A valid query of up to four patterns. Most constants are sampled from
/// stored triples so joins hit real data; an occasional unknown name
/// covers the empty-result path.
pub fn random_query<R: Rng>(rng: &mut R, kb: &KnowledgeBase, universe: &Universe) -> Query {
    let triples: Vec<&Triple> = kb.triples().collect();
    let pool = [var("?v0"), var("?v1"), var("?v2"), var("?v3")];
    let mut patterns = Vec::new();
    let mut used: Vec<Variable> = Vec::new();

    fn slot<R: Rng>(
        rng: &mut R,
        pool: &[Variable],
        used: &mut Vec<Variable>,
        is_var: bool,
        ground: Term,
    ) -> Term {
        if !is_var {
            return ground;
        }
        let v = pool[rng.gen_range(0..pool.len())].clone();
        if !used.contains(&v) {
            used.push(v.clone());
        }
        Term::Variable(v)
    }

    for _ in 0..rng.gen_range(1..=4) {
        let anchor = triples[rng.gen_range(0..triples.len())];
        let from_anchor = rng.gen_bool(0.6);
        let mask = match rng.gen_range(0..6) {
            0 => (true, false, false),
            1 => (false, false, true),
            2 => (true, true, false),
            3 => (false, true, true),
            _ => (true, false, true),
        };
        let subject_ground = if from_anchor {
            Term::Resource(anchor.subject.clone())
        } else {
            Term::Resource(pick(rng, &universe.individuals).clone())
        };
        let predicate_ground = if from_anchor {
            Term::Resource(anchor.predicate.clone())
        } else {
            Term::Resource(pick(rng, &universe.object_properties).clone())
        };
        let object_ground = if from_anchor {
            anchor.object.clone()
        } else if rng.gen_bool(0.1) {
            Term::Resource(res("x:nowhere"))
        } else {
            Term::Resource(pick(rng, &universe.individuals).clone())
        };
        let subject = slot(rng, &pool, &mut used, mask.0, subject_ground);
        let predicate = slot(rng, &pool, &mut used, mask.1, predicate_ground);
        let object = slot(rng, &pool, &mut used, mask.2, object_ground);
        patterns.push(Pattern::new(subject, predicate, object));
    }

    used.shuffle(rng);
    let select: Vec<Variable> = used.iter().take(rng.gen_range(1..=used.len())).cloned().collect();
    Query::new(select, patterns).expect("generated query is valid by construction")
}

/// A random populated ontology for the metrics oracle: a subclass forest
/// hooked under the core vocabulary, part-of links, property declarations
/// of every flavor, and typed individuals with a random link graph that
/// may touch untyped strays. Bounded well below 50 classes and 200
/// individuals.
pub fn random_ontology<R: Rng>(rng: &mut R) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    kb.load_core_ontology().expect("core ontology loads");

    let classes: Vec<Resource> =
        (0..rng.gen_range(1..=25)).map(|i| res(format!("x:C{i}"))).collect();
    let object_properties: Vec<Resource> =
        (0..rng.gen_range(0..=3)).map(|i| res(format!("x:p{i}"))).collect();
    let data_properties: Vec<Resource> =
        (0..rng.gen_range(0..=2)).map(|i| res(format!("x:d{i}"))).collect();
    let individuals: Vec<Resource> =
        (0..rng.gen_range(0..=100)).map(|i| res(format!("x:i{i}"))).collect();

    for (i, class) in classes.iter().enumerate() {
        type_marker(&mut kb, class, vocab::CLASS);
        if rng.gen_bool(0.55) {
            let parent = if i > 0 && rng.gen_bool(0.8) {
                classes[rng.gen_range(0..i)].clone()
            } else {
                vocab::res(vocab::SYSTEM_OBJECT)
            };
            put_core(&mut kb, class, vocab::SUB_CLASS_OF, Term::Resource(parent));
        }
    }
    for property in &object_properties {
        let marker = match rng.gen_range(0..8) {
            0 => vocab::TRANSITIVE_PROPERTY,
            1 => vocab::SYMMETRIC_PROPERTY,
            2 | 3 => vocab::FUNCTIONAL_PROPERTY,
            _ => vocab::OBJECT_PROPERTY,
        };
        type_marker(&mut kb, property, marker);
    }
    if object_properties.len() >= 2 && rng.gen_bool(0.2) {
        put(
            &mut kb,
            &object_properties[0],
            &vocab::res(vocab::SUB_PROPERTY_OF),
            Term::Resource(object_properties[1].clone()),
        );
    }
    for property in &data_properties {
        type_marker(&mut kb, property, vocab::DATA_PROPERTY);
    }

    for _ in 0..rng.gen_range(0..=6) {
        let part = if !individuals.is_empty() && rng.gen_bool(0.3) {
            pick(rng, &individuals).clone()
        } else {
            pick(rng, &classes).clone()
        };
        let whole = pick(rng, &classes).clone();
        put_core(&mut kb, &part, vocab::PART_OF, Term::Resource(whole));
    }

    for individual in &individuals {
        for _ in 0..rng.gen_range(0..=2) {
            let class = pick(rng, &classes).clone();
            put_core(&mut kb, individual, vocab::TYPE, Term::Resource(class));
        }
    }
    if individuals.len() >= 2 {
        let seed_links = [vocab::HAS_WEAKNESS, vocab::RELATED_TO].map(vocab::res);
        for _ in 0..rng.gen_range(0..=150) {
            let subject = pick(rng, &individuals).clone();
            let object = pick(rng, &individuals).clone();
            let predicate = if !object_properties.is_empty() && rng.gen_bool(0.7) {
                pick(rng, &object_properties).clone()
            } else {
                seed_links[rng.gen_range(0..seed_links.len())].clone()
            };
            put(&mut kb, &subject, &predicate, Term::Resource(object));
        }
        if rng.gen_bool(0.3) {
            let a = pick(rng, &individuals).clone();
            let b = pick(rng, &individuals).clone();
            if a != b {
                put(&mut kb, &a, &vocab::res(vocab::EQUIVALENT_TO), Term::Resource(b));
            }
        }
        for _ in 0..rng.gen_range(0..=25) {
            let subject = pick(rng, &individuals).clone();
            let (property, value) = if !data_properties.is_empty() && rng.gen_bool(0.7) {
                (
                    pick(rng, &data_properties).clone(),
                    Literal::string(format!("v{}", rng.gen_range(0..5))),
                )
            } else {
                (vocab::res(vocab::OCCURRED_AT), Literal::integer(rng.gen_range(0..=40)))
            };
            put(&mut kb, &subject, &property, Term::Literal(value));
        }
    }

    kb
}
