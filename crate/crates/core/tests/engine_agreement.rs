//! Cross-module checks: the two engines must agree with each other and with
//! brute-force oracles computed independently inside this file.

use std::collections::BTreeSet;

use propgrade_core::decomposition::{
    bucket_satisfied_by, enumerate_power_set, prune_by_implications, Bucket, Decomposition,
};
use propgrade_core::exhaustive::{
    check_implication, concretize_all, config_fits_bounds, covering_bounds, enumerate_bucket,
    prove_all, Bounds, BucketOutcome, CertVerdict, EnumOptions, PairStream,
};
use propgrade_core::genfilter::{
    generate_all, BucketSelection, GenConfig, InfeasibilityCache,
};
use propgrade_core::problems::{self, ProblemId, TestCase};

fn five_prop() -> Decomposition {
    Decomposition::from_names(
        ProblemId::Toposortacle,
        &[
            "NO-NEW",
            "NONE-DROPPED",
            "UNIQUENESS",
            "SORTEDNESS",
            "SAME-NUM-VERTICES",
        ],
        &[(&["NO-NEW", "NONE-DROPPED", "UNIQUENESS"], "SAME-NUM-VERTICES")],
    )
    .unwrap()
}

fn default_bounds() -> Bounds {
    Bounds::Topo {
        vertices: 4,
        edges: 4,
        out: 5,
    }
}

/// Buckets with no satisfying pair within bounds, found by walking the whole
/// space through the raw pair stream (not through the prover).
fn brute_force_empty_buckets(decomp: &Decomposition, bounds: &Bounds) -> BTreeSet<String> {
    let mut nonempty = BTreeSet::new();
    for pair in PairStream::new(bounds, &EnumOptions::default()).unwrap() {
        nonempty.insert(decomp.assignment_of(&pair).unwrap().id());
    }
    enumerate_power_set(decomp)
        .map(|b| b.id())
        .filter(|id| !nonempty.contains(id))
        .collect()
}

#[test]
fn pruned_buckets_are_exactly_the_unsatisfiable_implication_pattern() {
    let decomp = five_prop();
    let all: Vec<Bucket> = enumerate_power_set(&decomp).collect();
    let kept: BTreeSet<String> = prune_by_implications(&decomp, &all)
        .iter()
        .map(|b| b.id())
        .collect();
    let removed: BTreeSet<String> = all
        .iter()
        .map(|b| b.id())
        .filter(|id| !kept.contains(id))
        .collect();

    // Oracle: brute-force enumeration over vertices <= 4, output length <= 5,
    // restricted to buckets matching the implication pattern (antecedents
    // true, consequent false).
    let empty = brute_force_empty_buckets(&decomp, &default_bounds());
    let pattern_empty: BTreeSet<String> = empty
        .into_iter()
        .filter(|id| {
            let b = id.as_bytes();
            b[0] == b'T' && b[1] == b'T' && b[2] == b'T' && b[4] == b'F'
        })
        .collect();
    assert_eq!(removed, pattern_empty);
}

#[test]
fn error_subproperties_are_implied_by_the_core_conjunction() {
    // Within bounds, no pair satisfies NO-NEW..SORTEDNESS while failing
    // SAME-NUM-VERTICES or INCOMINGEDGECOUNT.
    for pair in PairStream::new(&default_bounds(), &EnumOptions::default()).unwrap() {
        if problems::full_property(&pair).unwrap() {
            assert!(problems::check("SAME-NUM-VERTICES", &pair).unwrap(), "{pair:?}");
            assert!(problems::check("INCOMINGEDGECOUNT", &pair).unwrap(), "{pair:?}");
        }
    }
}

#[test]
fn shipped_implications_hold_within_default_bounds() {
    for name in ["toposortacle", "toposortacle-merged", "sortacle", "matcher"] {
        let decomp = Decomposition::builtin(name).unwrap();
        let bounds = Bounds::default_for(decomp.problem());
        for imp in decomp.implications() {
            match check_implication(&decomp, imp, &bounds, &EnumOptions::default()).unwrap() {
                propgrade_core::exhaustive::ImplicationOutcome::HoldsWithinBounds { .. } => {}
                propgrade_core::exhaustive::ImplicationOutcome::Counterexample(pair) => {
                    panic!("{name}: declared implication {imp:?} refuted by {pair:?}")
                }
            }
        }
    }
}

#[test]
fn random_suites_satisfy_their_buckets_and_certify_nonempty() {
    let decomp = Decomposition::builtin("toposortacle").unwrap();
    let config = GenConfig {
        global_seed: 11,
        suite_size: 5,
        ..GenConfig::default()
    };
    let cache = InfeasibilityCache::ephemeral();
    let report = generate_all(&decomp, &config, &BucketSelection::PrunedPowerSet, &cache).unwrap();
    assert!(!report.suites.is_empty());
    let covering = covering_bounds(&config, ProblemId::Toposortacle);
    for suite in &report.suites {
        let bucket = suite.bucket_values();
        for test in &suite.tests {
            assert!(bucket_satisfied_by(&decomp, &bucket, test).unwrap());
        }
        match enumerate_bucket(&decomp, &bucket, &covering, 1, &EnumOptions::default()).unwrap() {
            BucketOutcome::Concretized { .. } => {}
            BucketOutcome::Empty(_) => panic!(
                "random engine concretized {} but exhaustive says empty at covering bounds",
                suite.bucket_id()
            ),
        }
    }
}

#[test]
fn empty_buckets_exhaust_the_random_engine_when_ranges_fit() {
    let decomp = Decomposition::builtin("toposortacle-merged").unwrap();
    // Shrink the random ranges inside the default bounds.
    let config = GenConfig {
        global_seed: 3,
        suite_size: 3,
        candidate_budget: 3_000,
        max_out_len: 5,
        ..GenConfig::default()
    };
    let bounds = default_bounds();
    assert!(config_fits_bounds(&config, &bounds));
    let certs = prove_all(&decomp, &bounds, &EnumOptions::default()).unwrap();
    let cache = InfeasibilityCache::ephemeral();
    let report = generate_all(&decomp, &config, &BucketSelection::PowerSet, &cache).unwrap();
    let concretized: BTreeSet<String> = report.suites.iter().map(|s| s.bucket_id()).collect();
    for cert in &certs {
        if cert.verdict == CertVerdict::EmptyWithinBounds {
            assert!(
                !concretized.contains(&cert.bucket),
                "bucket {} is empty within bounds but the random engine concretized it",
                cert.bucket
            );
        }
    }
    // And the specific contradictory bucket is among them.
    assert!(certs
        .iter()
        .any(|c| c.bucket == "TF" && c.verdict == CertVerdict::EmptyWithinBounds));
}

#[test]
fn exhaustive_sweep_agrees_with_per_bucket_search() {
    let decomp = Decomposition::builtin("toposortacle-merged").unwrap();
    let bounds = default_bounds();
    let buckets: Vec<Bucket> = enumerate_power_set(&decomp).collect();
    let sweep = concretize_all(&decomp, &buckets, &bounds, 3, &EnumOptions::default()).unwrap();
    for suite in &sweep.suites {
        let bucket = suite.bucket_values();
        match enumerate_bucket(&decomp, &bucket, &bounds, 3, &EnumOptions::default()).unwrap() {
            BucketOutcome::Concretized { suite: single, .. } => {
                let a: Vec<String> = suite.tests.iter().map(|t| t.to_line()).collect();
                let b: Vec<String> = single.tests.iter().map(|t| t.to_line()).collect();
                assert_eq!(a, b, "sweep and per-bucket search must agree");
            }
            BucketOutcome::Empty(_) => panic!("sweep found tests, search found none"),
        }
    }
    let empty_ids: BTreeSet<String> = sweep.empty.iter().map(|c| c.bucket.clone()).collect();
    assert_eq!(empty_ids, ["TF".to_string()].into_iter().collect());
}

#[test]
fn matcher_companies_focused_bucket_needs_unequal_sides() {
    let decomp = Decomposition::builtin("matcher").unwrap();
    let bucket = Bucket::from_id("TTTF", &decomp).unwrap();
    let bounds = Bounds::Match { side: 2 };
    match enumerate_bucket(&decomp, &bucket, &bounds, 1, &EnumOptions::default()).unwrap() {
        BucketOutcome::Concretized { suite, .. } => {
            let test = &suite.tests[0];
            match test {
                TestCase::Match { input, .. } => {
                    assert_ne!(input.candidates.len(), input.companies.len());
                }
                _ => unreachable!(),
            }
            assert!(bucket_satisfied_by(&decomp, &bucket, &suite.tests[0]).unwrap());
        }
        BucketOutcome::Empty(_) => panic!("unequal sides make this bucket concretizable"),
    }
}

#[test]
fn sortacle_engines_agree_on_bucket_feasibility() {
    let decomp = Decomposition::builtin("sortacle").unwrap();
    let config = GenConfig {
        global_seed: 5,
        suite_size: 5,
        candidate_budget: 5_000,
        ..GenConfig::default()
    };
    let bounds = covering_bounds(&config, ProblemId::Sortacle);
    let certs = prove_all(&decomp, &bounds, &EnumOptions::default()).unwrap();
    let empty: BTreeSet<&str> = certs
        .iter()
        .filter(|c| c.verdict == CertVerdict::EmptyWithinBounds)
        .map(|c| c.bucket.as_str())
        .collect();
    let cache = InfeasibilityCache::ephemeral();
    let report = generate_all(&decomp, &config, &BucketSelection::PowerSet, &cache).unwrap();
    for suite in &report.suites {
        assert!(
            !empty.contains(suite.bucket_id().as_str()),
            "random engine concretized a bucket proven empty at covering bounds"
        );
        let bucket = suite.bucket_values();
        for test in &suite.tests {
            assert!(bucket_satisfied_by(&decomp, &bucket, test).unwrap());
        }
    }
}
