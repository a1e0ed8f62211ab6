//! Randomized equivalence between the pattern-join evaluator and a
//! nested-loop reference, plus join-ordering and determinism properties.

use aokb_core::testkit::{nested_loop_query, random_kb, random_query};
use aokb_core::{evaluate, Query, Term};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn evaluate_equals_nested_loop_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0011);
    for case in 0..80 {
        let (kb, universe) = random_kb(&mut rng);
        let query = random_query(&mut rng, &kb, &universe);
        // The set iterates in sorted order, so this also pins the
        // evaluator's sorted-and-deduplicated output contract.
        let expected: Vec<Vec<Term>> = nested_loop_query(&kb, &query).into_iter().collect();
        let actual = evaluate(&kb, &query).unwrap();
        assert_eq!(expected, actual, "case {case} diverged on {query:?}");
    }
}

#[test]
fn pattern_order_never_changes_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0012);
    for case in 0..40 {
        let (kb, universe) = random_kb(&mut rng);
        let query = random_query(&mut rng, &kb, &universe);
        let mut patterns = query.patterns.clone();
        patterns.shuffle(&mut rng);
        let shuffled = Query::new(query.select.clone(), patterns).unwrap();

        let original = evaluate(&kb, &query).unwrap();
        let reordered = evaluate(&kb, &shuffled).unwrap();
        let repeated = evaluate(&kb, &query).unwrap();
        assert_eq!(original, reordered, "case {case} depended on pattern order");
        assert_eq!(original, repeated, "case {case} was not deterministic");
    }
}
