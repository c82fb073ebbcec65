//! Aggregation: suite groups, per-group error sets, pairwise comparisons,
//! fingerprint clusters, and cross-engine validation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{
    classify_bucket, enumerate_power_set, focused_buckets, prune_by_implications, Bucket,
    BucketPolarity, Decomposition,
};
use crate::exhaustive::{CertVerdict, Certificate};
use crate::genfilter::Suite;
use crate::harness::{Fingerprint, SuiteResult};

pub const UNFOCUSED: &str = "UNFOCUSED";
pub const POSITIVE: &str = "POSITIVE";
pub const TOTAL: &str = "TOTAL";

/// A labeled set of buckets: one group per subproperty (its focused bucket
/// set), plus UNFOCUSED (remaining negative buckets) and POSITIVE.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteGroup {
    pub label: String,
    pub buckets: BTreeSet<String>,
}

/// A bucket claimed by several subproperties' focused sets; ownership goes to
/// the earliest-declared one and the tie is disclosed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupTie {
    pub bucket: String,
    pub owner: String,
    pub also_focused_for: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grouping {
    pub groups: Vec<SuiteGroup>,
    pub ties: Vec<GroupTie>,
}

impl Grouping {
    /// The group owning a bucket id, if the bucket is in the evaluated set.
    pub fn group_of(&self, bucket_id: &str) -> Option<&str> {
        self.groups
            .iter()
            .find(|g| g.buckets.contains(bucket_id))
            .map(|g| g.label.as_str())
    }

    pub fn labels(&self) -> Vec<String> {
        self.groups.iter().map(|g| g.label.clone()).collect()
    }
}

/// Partitions the pruned power set: every evaluated bucket lands in exactly
/// one group. Ties between focused sets resolve to the earliest-declared
/// subproperty and are recorded.
pub fn group_buckets(decomp: &Decomposition) -> Grouping {
    let evaluated: Vec<Bucket> =
        prune_by_implications(decomp, &enumerate_power_set(decomp).collect::<Vec<_>>());
    let mut owned: BTreeMap<String, String> = BTreeMap::new();
    let mut ties: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut groups = Vec::new();
    for sub in decomp.subproperties() {
        let focused = focused_buckets(decomp, &sub.id).expect("declared subproperty");
        let mut members = BTreeSet::new();
        for bucket in focused {
            let id = bucket.id();
            match owned.get(&id) {
                None => {
                    owned.insert(id.clone(), sub.id.0.clone());
                    members.insert(id);
                }
                Some(_) => {
                    ties.entry(id).or_default().push(sub.id.0.clone());
                }
            }
        }
        groups.push(SuiteGroup {
            label: sub.id.0.clone(),
            buckets: members,
        });
    }
    let mut unfocused = BTreeSet::new();
    let mut positive = BTreeSet::new();
    for bucket in &evaluated {
        let id = bucket.id();
        if owned.contains_key(&id) {
            continue;
        }
        match classify_bucket(bucket) {
            BucketPolarity::Positive => positive.insert(id),
            BucketPolarity::Negative => unfocused.insert(id),
        };
    }
    groups.push(SuiteGroup {
        label: UNFOCUSED.to_string(),
        buckets: unfocused,
    });
    groups.push(SuiteGroup {
        label: POSITIVE.to_string(),
        buckets: positive,
    });
    let ties = ties
        .into_iter()
        .map(|(bucket, also)| GroupTie {
            owner: owned[&bucket].clone(),
            bucket,
            also_focused_for: also,
        })
        .collect();
    Grouping { groups, ties }
}

/// Per group, the set of predicates misclassifying at least one suite of at
/// least one bucket in the group, plus a TOTAL row with the union.
pub fn errors_by_group(
    results: &[SuiteResult],
    grouping: &Grouping,
) -> BTreeMap<String, BTreeSet<String>> {
    let mut by_group: BTreeMap<String, BTreeSet<String>> = grouping
        .groups
        .iter()
        .map(|g| (g.label.clone(), BTreeSet::new()))
        .collect();
    let mut total = BTreeSet::new();
    for result in results {
        if !result.misclassified {
            continue;
        }
        if let Some(label) = grouping.group_of(&result.bucket) {
            by_group
                .get_mut(label)
                .expect("group exists")
                .insert(result.predicate.clone());
            total.insert(result.predicate.clone());
        }
    }
    by_group.insert(TOTAL.to_string(), total);
    by_group
}

/// One row of a pairwise comparison: counts and both set differences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub group: String,
    pub count_a: usize,
    pub count_b: usize,
    pub diff_a_minus_b: usize,
    pub diff_b_minus_a: usize,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("result sets cover different predicate populations; only in A: {only_a:?}, only in B: {only_b:?}")]
    PopulationMismatch {
        only_a: Vec<String>,
        only_b: Vec<String>,
    },
}

/// Compares two result sets over the same predicate population, group by
/// group. Differences are computed on predicate-id sets, not counts.
pub fn compare(
    results_a: &[SuiteResult],
    results_b: &[SuiteResult],
    grouping: &Grouping,
) -> Result<Vec<ComparisonRow>, ReportError> {
    let pop_a: BTreeSet<&String> = results_a.iter().map(|r| &r.predicate).collect();
    let pop_b: BTreeSet<&String> = results_b.iter().map(|r| &r.predicate).collect();
    if pop_a != pop_b {
        return Err(ReportError::PopulationMismatch {
            only_a: pop_a.difference(&pop_b).map(|s| s.to_string()).collect(),
            only_b: pop_b.difference(&pop_a).map(|s| s.to_string()).collect(),
        });
    }
    let errors_a = errors_by_group(results_a, grouping);
    let errors_b = errors_by_group(results_b, grouping);
    let mut rows = Vec::new();
    let mut labels = grouping.labels();
    labels.push(TOTAL.to_string());
    for label in labels {
        let a = errors_a.get(&label).cloned().unwrap_or_default();
        let b = errors_b.get(&label).cloned().unwrap_or_default();
        rows.push(ComparisonRow {
            group: label,
            count_a: a.len(),
            count_b: b.len(),
            diff_a_minus_b: a.difference(&b).count(),
            diff_b_minus_a: b.difference(&a).count(),
        });
    }
    Ok(rows)
}

/// Clusters fingerprints by exact set equality, largest cluster first
/// (ties broken by fingerprint contents for determinism).
pub fn cluster_fingerprints(
    fingerprints: &[Fingerprint],
) -> Vec<(BTreeSet<String>, BTreeSet<String>)> {
    let mut clusters: BTreeMap<BTreeSet<String>, BTreeSet<String>> = BTreeMap::new();
    for fp in fingerprints {
        clusters
            .entry(fp.failed_buckets.clone())
            .or_default()
            .insert(fp.predicate.clone());
    }
    let mut out: Vec<(BTreeSet<String>, BTreeSet<String>)> = clusters.into_iter().collect();
    out.sort_by(|(fa, pa), (fb, pb)| pb.len().cmp(&pa.len()).then_with(|| fa.cmp(fb)));
    out
}

/// A test that does not satisfy the bucket its suite is labeled with.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelDiscrepancy {
    pub suite: String,
    pub test_index: usize,
    pub expected_bucket: String,
    pub observed_assignment: String,
}

/// A bucket one engine concretized while the other proved it empty.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmptyConflict {
    pub bucket: String,
    pub suite: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CrossValidation {
    /// Type (a): suite tests whose re-evaluated assignment differs from the
    /// labeled bucket. Zero on a healthy build.
    pub label_discrepancies: Vec<LabelDiscrepancy>,
    /// Type (b): suites for buckets certified empty within covering bounds.
    pub empty_conflicts: Vec<EmptyConflict>,
    /// One-sided mismatches that are warnings, not discrepancies: the random
    /// engine exhausted its budget on a bucket certified nonempty.
    pub warnings: Vec<String>,
}

/// Re-evaluates every test of every suite against all checkers and compares
/// engine claims against certificates. `suites` carries a human-readable
/// label (usually the file path) per suite; `exhausted` lists bucket ids the
/// random engine gave up on.
pub fn cross_validate(
    decomp: &Decomposition,
    suites: &[(String, Suite)],
    certificates: &[Certificate],
    exhausted: &[String],
) -> CrossValidation {
    let mut report = CrossValidation::default();
    for (label, suite) in suites {
        let expected = suite.bucket_id();
        for (index, test) in suite.tests.iter().enumerate() {
            let observed = match decomp.assignment_of(test) {
                Ok(bucket) => bucket.id(),
                Err(err) => format!("error: {err}"),
            };
            if observed != expected {
                report.label_discrepancies.push(LabelDiscrepancy {
                    suite: label.clone(),
                    test_index: index,
                    expected_bucket: expected.clone(),
                    observed_assignment: observed,
                });
            }
        }
    }
    let empty: BTreeSet<&str> = certificates
        .iter()
        .filter(|c| c.verdict == CertVerdict::EmptyWithinBounds)
        .map(|c| c.bucket.as_str())
        .collect();
    let nonempty: BTreeSet<&str> = certificates
        .iter()
        .filter(|c| c.verdict == CertVerdict::Nonempty)
        .map(|c| c.bucket.as_str())
        .collect();
    for (label, suite) in suites {
        let id = suite.bucket_id();
        if empty.contains(id.as_str()) {
            report.empty_conflicts.push(EmptyConflict {
                bucket: id,
                suite: label.clone(),
            });
        }
    }
    for bucket in exhausted {
        if nonempty.contains(bucket.as_str()) {
            report.warnings.push(format!(
                "random engine exhausted its budget on bucket {bucket}, which is certified nonempty"
            ));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfilter::Engine;
    use crate::harness::Verdict;
    use crate::problems::{ProblemId, TestCase};

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

    fn result(pred: &str, bucket: &str, misclassified: bool) -> SuiteResult {
        SuiteResult {
            predicate: pred.to_string(),
            bucket: bucket.to_string(),
            verdicts: Vec::<Verdict>::new(),
            misclassified,
        }
    }

    #[test]
    fn grouping_partitions_the_pruned_power_set() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for group in &grouping.groups {
            for bucket in &group.buckets {
                assert!(seen.insert(bucket.clone()), "bucket {bucket} in two groups");
                total += 1;
            }
        }
        let pruned =
            prune_by_implications(&d, &enumerate_power_set(&d).collect::<Vec<_>>());
        assert_eq!(total, pruned.len());
        for bucket in pruned {
            assert!(seen.contains(&bucket.id()));
        }
    }

    #[test]
    fn sortedness_group_is_its_single_focused_bucket() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        let group = grouping
            .groups
            .iter()
            .find(|g| g.label == "SORTEDNESS")
            .unwrap();
        assert_eq!(
            group.buckets.iter().cloned().collect::<Vec<_>>(),
            vec!["TTTFT"]
        );
    }

    #[test]
    fn same_num_vertices_group_has_three_buckets() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        let group = grouping
            .groups
            .iter()
            .find(|g| g.label == "SAME-NUM-VERTICES")
            .unwrap();
        assert_eq!(
            group.buckets.iter().cloned().collect::<Vec<_>>(),
            vec!["FTTTF", "TFTTF", "TTFTF"]
        );
    }

    #[test]
    fn all_false_bucket_is_unfocused_and_all_true_positive() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        assert_eq!(grouping.group_of("FFFFF"), Some(UNFOCUSED));
        assert_eq!(grouping.group_of("TTTTT"), Some(POSITIVE));
    }

    #[test]
    fn errors_by_group_counts_predicates_not_suites() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        let results = vec![
            result("oracle", "TTTFT", false),
            result("lazy", "TTTFT", true),
            result("lazy", "FFFFF", true),
            result("other", "FFFFF", true),
        ];
        let errors = errors_by_group(&results, &grouping);
        assert!(errors["SORTEDNESS"].contains("lazy"));
        assert!(!errors["SORTEDNESS"].contains("oracle"));
        assert_eq!(
            errors[UNFOCUSED].iter().cloned().collect::<Vec<_>>(),
            vec!["lazy", "other"]
        );
        assert_eq!(errors[TOTAL].len(), 2);
    }

    #[test]
    fn compare_reports_set_differences_not_count_differences() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        // A finds {p1, p2}; B finds {p2, p3}: counts 2;2, diffs 1;1.
        let a = vec![
            result("p1", "TTTFT", true),
            result("p2", "TTTFT", true),
            result("p3", "TTTFT", false),
        ];
        let b = vec![
            result("p1", "TTTFT", false),
            result("p2", "TTTFT", true),
            result("p3", "TTTFT", true),
        ];
        let rows = compare(&a, &b, &grouping).unwrap();
        let row = rows.iter().find(|r| r.group == "SORTEDNESS").unwrap();
        assert_eq!((row.count_a, row.count_b), (2, 2));
        assert_eq!((row.diff_a_minus_b, row.diff_b_minus_a), (1, 1));
        // Identical inputs yield all-zero diffs.
        let rows = compare(&a, &a, &grouping).unwrap();
        assert!(rows.iter().all(|r| r.diff_a_minus_b == 0 && r.diff_b_minus_a == 0));
        // The invariant |A\B| - |B\A| = |A| - |B| holds per group.
        let rows = compare(&a, &b, &grouping).unwrap();
        for row in rows {
            assert_eq!(
                row.diff_a_minus_b as isize - row.diff_b_minus_a as isize,
                row.count_a as isize - row.count_b as isize
            );
        }
    }

    #[test]
    fn compare_rejects_population_mismatch() {
        let d = five_prop();
        let grouping = group_buckets(&d);
        let a = vec![result("p1", "TTTFT", true)];
        let b = vec![result("p2", "TTTFT", true)];
        match compare(&a, &b, &grouping) {
            Err(ReportError::PopulationMismatch { only_a, only_b }) => {
                assert_eq!(only_a, vec!["p1"]);
                assert_eq!(only_b, vec!["p2"]);
            }
            _ => panic!("expected a population mismatch"),
        }
    }

    #[test]
    fn clustering_groups_identical_fingerprints() {
        let fp = |pred: &str, buckets: &[&str]| Fingerprint {
            predicate: pred.to_string(),
            failed_buckets: buckets.iter().map(|s| s.to_string()).collect(),
        };
        let clusters = cluster_fingerprints(&[
            fp("a", &[]),
            fp("b", &[]),
            fp("c", &["TTTFT"]),
            fp("c-copy", &["TTTFT"]),
            fp("d", &["FFFFF"]),
        ]);
        assert_eq!(clusters.len(), 3);
        assert_eq!(clusters[0].1.len(), 2);
        assert_eq!(clusters[1].1.len(), 2);
        assert_eq!(clusters[2].1.len(), 1);
    }

    #[test]
    fn cross_validate_flags_mislabeled_tests() {
        let d = five_prop();
        // Claim the bucket with only SORTEDNESS false, but include a pair
        // that actually satisfies everything.
        let bucket = Bucket::from_id("TTTFT", &d).unwrap();
        let suite = Suite::new(
            &d,
            &bucket,
            Engine::Random,
            Some(1),
            vec![TestCase::Topo {
                edges: vec![(0, 1), (1, 2)],
                output: vec![0, 1, 2],
            }],
        );
        let report = cross_validate(&d, &[("suite".to_string(), suite)], &[], &[]);
        assert_eq!(report.label_discrepancies.len(), 1);
        assert_eq!(report.label_discrepancies[0].observed_assignment, "TTTTT");
        assert_eq!(report.label_discrepancies[0].expected_bucket, "TTTFT");
    }

    #[test]
    fn cross_validate_healthy_and_warning_paths() {
        let d = five_prop();
        let bucket = Bucket::from_id("TTTFT", &d).unwrap();
        let suite = Suite::new(
            &d,
            &bucket,
            Engine::Random,
            Some(1),
            vec![TestCase::Topo {
                edges: vec![(0, 1), (1, 2)],
                output: vec![0, 2, 1],
            }],
        );
        let certs = vec![
            Certificate {
                bucket: "TTTFT".to_string(),
                bounds: crate::exhaustive::Bounds::default_for(ProblemId::Toposortacle),
                verdict: CertVerdict::Nonempty,
                witness: None,
                pairs_enumerated: 1,
            },
            Certificate {
                bucket: "TTTTF".to_string(),
                bounds: crate::exhaustive::Bounds::default_for(ProblemId::Toposortacle),
                verdict: CertVerdict::EmptyWithinBounds,
                witness: None,
                pairs_enumerated: 100,
            },
        ];
        let labeled = vec![("ok".to_string(), suite)];
        let report = cross_validate(&d, &labeled, &certs, &["TTTFT".to_string()]);
        assert!(report.label_discrepancies.is_empty());
        assert!(report.empty_conflicts.is_empty());
        assert_eq!(report.warnings.len(), 1);
        // A suite for a certified-empty bucket is a type (b) conflict.
        let bad_bucket = Bucket::from_id("TTTTF", &d).unwrap();
        let bad = Suite::new(&d, &bad_bucket, Engine::Random, Some(1), vec![]);
        let labeled = vec![("bad".to_string(), bad)];
        let report = cross_validate(&d, &labeled, &certs, &[]);
        assert_eq!(report.empty_conflicts.len(), 1);
    }
}
