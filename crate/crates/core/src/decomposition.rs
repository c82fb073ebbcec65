//! Subproperty decompositions, Horn implications, and buckets.
//!
//! A decomposition names an ordered list of subproperties for one problem and
//! declares implications between them (a conjunction of antecedents implying
//! a single consequent). A [`Bucket`] is a total true/false assignment over
//! the subproperty list; its canonical id is the `T`/`F` string in
//! declaration order, used in filenames and fingerprints.
//!
//! Implications are declared, never inferred. Declarations can be audited
//! within bounds by the exhaustive engine's implication check.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problems::{self, CheckError, ProblemId, TestCase};

/// Name of a subproperty, unique within its decomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubpropertyId(pub String);

impl SubpropertyId {
    pub fn new(name: &str) -> SubpropertyId {
        SubpropertyId(name.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SubpropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Core subproperties are conjuncts of the full property; error subproperties
/// mark specific mistake patterns and are implied by the core conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubpropertyKind {
    Core,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subproperty {
    pub id: SubpropertyId,
    pub kind: SubpropertyKind,
    pub description: String,
}

/// A Horn implication: if every antecedent holds, the consequent holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub antecedents: Vec<SubpropertyId>,
    pub consequent: SubpropertyId,
}

/// An ordered subproperty list for one problem, plus declared implications.
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct Decomposition {
    problem: ProblemId,
    subproperties: Vec<Subproperty>,
    implications: Vec<Implication>,
}

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("unknown problem {0:?}")]
    UnknownProblem(String),
    #[error("a decomposition needs at least one subproperty")]
    Empty,
    #[error("duplicate subproperty {0}")]
    DuplicateSubproperty(String),
    #[error("no checker named {name:?} is registered for problem {problem}")]
    UnregisteredChecker { problem: ProblemId, name: String },
    #[error("implication references undeclared subproperty {0}")]
    UnknownImplicationTerm(String),
    #[error("implication consequent {0} also appears among its antecedents")]
    ConsequentInAntecedents(String),
    #[error("implication has no antecedents")]
    EmptyAntecedents,
    #[error("malformed manifest: {0}")]
    Manifest(#[from] serde_json::Error),
    #[error("bucket id {id:?} does not fit a {expected}-subproperty decomposition")]
    BadBucketId { id: String, expected: usize },
}

impl Decomposition {
    pub fn new(
        problem: ProblemId,
        subproperties: Vec<Subproperty>,
        implications: Vec<Implication>,
    ) -> Result<Decomposition, DecompositionError> {
        if subproperties.is_empty() {
            return Err(DecompositionError::Empty);
        }
        let mut seen = BTreeSet::new();
        for sub in &subproperties {
            if !seen.insert(sub.id.clone()) {
                return Err(DecompositionError::DuplicateSubproperty(sub.id.0.clone()));
            }
            if !problem
                .registered_subproperties()
                .contains(&sub.id.as_str())
            {
                return Err(DecompositionError::UnregisteredChecker {
                    problem,
                    name: sub.id.0.clone(),
                });
            }
        }
        for imp in &implications {
            if imp.antecedents.is_empty() {
                return Err(DecompositionError::EmptyAntecedents);
            }
            for term in imp.antecedents.iter().chain([&imp.consequent]) {
                if !seen.contains(term) {
                    return Err(DecompositionError::UnknownImplicationTerm(term.0.clone()));
                }
            }
            if imp.antecedents.contains(&imp.consequent) {
                return Err(DecompositionError::ConsequentInAntecedents(
                    imp.consequent.0.clone(),
                ));
            }
        }
        Ok(Decomposition {
            problem,
            subproperties,
            implications,
        })
    }

    /// Convenience constructor from names; all subproperties marked core.
    pub fn from_names(
        problem: ProblemId,
        names: &[&str],
        implications: &[(&[&str], &str)],
    ) -> Result<Decomposition, DecompositionError> {
        let subs = names
            .iter()
            .map(|n| Subproperty {
                id: SubpropertyId::new(n),
                kind: SubpropertyKind::Core,
                description: String::new(),
            })
            .collect();
        let imps = implications
            .iter()
            .map(|(ifs, then)| Implication {
                antecedents: ifs.iter().map(|n| SubpropertyId::new(n)).collect(),
                consequent: SubpropertyId::new(then),
            })
            .collect();
        Decomposition::new(problem, subs, imps)
    }

    pub fn problem(&self) -> ProblemId {
        self.problem
    }

    pub fn subproperties(&self) -> &[Subproperty] {
        &self.subproperties
    }

    pub fn implications(&self) -> &[Implication] {
        &self.implications
    }

    pub fn len(&self) -> usize {
        self.subproperties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subproperties.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.subproperties.iter().map(|s| s.id.0.clone()).collect()
    }

    pub fn index_of(&self, id: &SubpropertyId) -> Option<usize> {
        self.subproperties.iter().position(|s| &s.id == id)
    }

    /// Evaluates every checker on the pair, in declaration order.
    pub fn assignment_of(&self, pair: &TestCase) -> Result<Bucket, CheckError> {
        if pair.problem() != self.problem {
            return Err(CheckError::WrongProblem {
                expected: self.problem,
                actual: pair.problem(),
            });
        }
        let mut values = Vec::with_capacity(self.len());
        for sub in &self.subproperties {
            values.push(problems::check(sub.id.as_str(), pair)?);
        }
        Ok(Bucket { values })
    }
}

/// A total truth assignment over a decomposition's subproperties, stored in
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bucket {
    values: Vec<bool>,
}

/// Positive buckets assign every subproperty true; they yield positive tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BucketPolarity {
    Positive,
    Negative,
}

impl Bucket {
    pub fn new(values: Vec<bool>) -> Bucket {
        Bucket { values }
    }

    pub fn all_true(len: usize) -> Bucket {
        Bucket {
            values: vec![true; len],
        }
    }

    /// Parses a canonical `T`/`F` id.
    pub fn from_id(id: &str, decomp: &Decomposition) -> Result<Bucket, DecompositionError> {
        let values: Option<Vec<bool>> = id
            .chars()
            .map(|c| match c {
                'T' => Some(true),
                'F' => Some(false),
                _ => None,
            })
            .collect();
        match values {
            Some(values) if values.len() == decomp.len() => Ok(Bucket { values }),
            _ => Err(DecompositionError::BadBucketId {
                id: id.to_string(),
                expected: decomp.len(),
            }),
        }
    }

    /// Canonical id: `T`/`F` per subproperty in declaration order.
    pub fn id(&self) -> String {
        self.values
            .iter()
            .map(|&v| if v { 'T' } else { 'F' })
            .collect()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, index: usize) -> bool {
        self.values[index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_flipped(&self, index: usize) -> Bucket {
        let mut values = self.values.clone();
        values[index] = !values[index];
        Bucket { values }
    }

    pub fn is_all_true(&self) -> bool {
        self.values.iter().all(|&v| v)
    }
}

/// True iff every subproperty's checker result equals the bucket's assignment
/// for that subproperty. Malformed pairs surface as errors, never as `false`.
pub fn bucket_satisfied_by(
    decomp: &Decomposition,
    bucket: &Bucket,
    pair: &TestCase,
) -> Result<bool, CheckError> {
    if pair.problem() != decomp.problem() {
        return Err(CheckError::WrongProblem {
            expected: decomp.problem(),
            actual: pair.problem(),
        });
    }
    for (sub, &expected) in decomp.subproperties.iter().zip(bucket.values()) {
        if problems::check(sub.id.as_str(), pair)? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All `2^n` buckets, in canonical-id lexicographic order (`F` before `T`).
pub fn enumerate_power_set(decomp: &Decomposition) -> impl Iterator<Item = Bucket> {
    let n = decomp.len();
    (0u64..(1u64 << n)).map(move |i| {
        let values = (0..n).map(|j| i >> (n - 1 - j) & 1 == 1).collect();
        Bucket { values }
    })
}

/// Whether the bucket assigns all antecedents of some implication true and
/// its consequent false.
pub fn violates_implications(decomp: &Decomposition, bucket: &Bucket) -> bool {
    decomp.implications.iter().any(|imp| {
        let conseq = decomp.index_of(&imp.consequent).expect("validated");
        !bucket.get(conseq)
            && imp
                .antecedents
                .iter()
                .all(|a| bucket.get(decomp.index_of(a).expect("validated")))
    })
}

/// Removes exactly the buckets contradicting a declared implication.
pub fn prune_by_implications(decomp: &Decomposition, buckets: &[Bucket]) -> Vec<Bucket> {
    buckets
        .iter()
        .filter(|b| !violates_implications(decomp, b))
        .cloned()
        .collect()
}

/// The focused bucket set for a target subproperty: start from the bucket
/// with only the target false; whenever an implication's consequent is false
/// while its antecedents are all true, branch by flipping one antecedent per
/// new bucket; iterate to fixpoint; finally drop buckets still violating an
/// implication. Results are sorted by canonical id.
pub fn focused_buckets(
    decomp: &Decomposition,
    target: &SubpropertyId,
) -> Result<Vec<Bucket>, DecompositionError> {
    let target_idx = decomp
        .index_of(target)
        .ok_or_else(|| DecompositionError::UnknownImplicationTerm(target.0.clone()))?;
    let seed = Bucket::all_true(decomp.len()).with_flipped(target_idx);
    let mut seen: BTreeSet<Bucket> = BTreeSet::new();
    let mut work = vec![seed];
    while let Some(bucket) = work.pop() {
        if !seen.insert(bucket.clone()) {
            continue;
        }
        for imp in &decomp.implications {
            let conseq = decomp.index_of(&imp.consequent).expect("validated");
            if bucket.get(conseq) {
                continue;
            }
            let indices: Vec<usize> = imp
                .antecedents
                .iter()
                .map(|a| decomp.index_of(a).expect("validated"))
                .collect();
            if indices.iter().all(|&i| bucket.get(i)) {
                for &i in &indices {
                    work.push(bucket.with_flipped(i));
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .filter(|b| !violates_implications(decomp, b))
        .collect())
}

/// Positive iff every assignment is true.
pub fn classify_bucket(bucket: &Bucket) -> BucketPolarity {
    if bucket.is_all_true() {
        BucketPolarity::Positive
    } else {
        BucketPolarity::Negative
    }
}

// --- Manifests -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ManifestDoc {
    problem: String,
    subproperties: Vec<ManifestSub>,
    #[serde(default)]
    implications: Vec<ManifestImp>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestSub {
    name: String,
    kind: SubpropertyKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    description: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestImp {
    #[serde(rename = "if")]
    antecedents: Vec<String>,
    #[serde(rename = "then")]
    consequent: String,
}

impl Decomposition {
    /// Loads a decomposition from manifest JSON:
    /// `{"problem", "subproperties": [{"name", "kind"}], "implications": [{"if", "then"}]}`.
    pub fn from_manifest_json(text: &str) -> Result<Decomposition, DecompositionError> {
        let doc: ManifestDoc = serde_json::from_str(text)?;
        let problem = ProblemId::parse(&doc.problem)
            .ok_or_else(|| DecompositionError::UnknownProblem(doc.problem.clone()))?;
        let subs = doc
            .subproperties
            .into_iter()
            .map(|s| Subproperty {
                id: SubpropertyId(s.name),
                kind: s.kind,
                description: s.description,
            })
            .collect();
        let imps = doc
            .implications
            .into_iter()
            .map(|i| Implication {
                antecedents: i.antecedents.into_iter().map(SubpropertyId).collect(),
                consequent: SubpropertyId(i.consequent),
            })
            .collect();
        Decomposition::new(problem, subs, imps)
    }

    /// Serializes back to manifest JSON (used for config digests).
    pub fn to_manifest_json(&self) -> String {
        let doc = ManifestDoc {
            problem: self.problem.as_str().to_string(),
            subproperties: self
                .subproperties
                .iter()
                .map(|s| ManifestSub {
                    name: s.id.0.clone(),
                    kind: s.kind,
                    description: s.description.clone(),
                })
                .collect(),
            implications: self
                .implications
                .iter()
                .map(|i| ManifestImp {
                    antecedents: i.antecedents.iter().map(|a| a.0.clone()).collect(),
                    consequent: i.consequent.0.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("manifest encoding")
    }

    /// Built-in manifests shipped with the tool.
    pub fn builtin(name: &str) -> Option<Decomposition> {
        let text = builtin_manifest(name)?;
        Some(Decomposition::from_manifest_json(text).expect("built-in manifest is valid"))
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["toposortacle", "toposortacle-merged", "sortacle", "matcher"]
    }
}

/// Raw JSON for a built-in manifest, if one exists under that name.
pub fn builtin_manifest(name: &str) -> Option<&'static str> {
    match name {
        "toposortacle" => Some(TOPOSORTACLE_MANIFEST),
        "toposortacle-merged" => Some(TOPOSORTACLE_MERGED_MANIFEST),
        "sortacle" => Some(SORTACLE_MANIFEST),
        "matcher" => Some(MATCHER_MANIFEST),
        _ => None,
    }
}

const TOPOSORTACLE_MANIFEST: &str = r#"{
  "problem": "toposortacle",
  "subproperties": [
    {"name": "NO-NEW", "kind": "core", "description": "every output vertex occurs in some input edge"},
    {"name": "NONE-DROPPED", "kind": "core", "description": "every vertex in any input edge occurs in the output"},
    {"name": "UNIQUENESS", "kind": "core", "description": "the output has no duplicate vertices"},
    {"name": "SORTEDNESS", "kind": "core", "description": "no vertex first appears before a transitive predecessor"},
    {"name": "SAME-NUM-VERTICES", "kind": "error", "description": "output length equals the number of vertices the input mentions"},
    {"name": "INCOMINGEDGECOUNT", "kind": "error", "description": "per position, incoming input-edges equal matching earlier output positions"}
  ],
  "implications": [
    {"if": ["NO-NEW", "NONE-DROPPED", "UNIQUENESS"], "then": "SAME-NUM-VERTICES"},
    {"if": ["NONE-DROPPED", "UNIQUENESS", "SORTEDNESS"], "then": "INCOMINGEDGECOUNT"}
  ]
}"#;

const TOPOSORTACLE_MERGED_MANIFEST: &str = r#"{
  "problem": "toposortacle",
  "subproperties": [
    {"name": "SAME-ELEMENTS-MULTISET", "kind": "core", "description": "output vertices are exactly the input vertices, each once"},
    {"name": "SAME-NUM-VERTICES", "kind": "error", "description": "output length equals the number of vertices the input mentions"}
  ],
  "implications": [
    {"if": ["SAME-ELEMENTS-MULTISET"], "then": "SAME-NUM-VERTICES"}
  ]
}"#;

const SORTACLE_MANIFEST: &str = r#"{
  "problem": "sortacle",
  "subproperties": [
    {"name": "SAME-SIZE", "kind": "core", "description": "input and output lists have the same length"},
    {"name": "ORDERED", "kind": "core", "description": "output ages are nondecreasing"},
    {"name": "SAME-ELES-STRONG", "kind": "core", "description": "input and output are equal as multisets"},
    {"name": "SAME-ELES-WEAK", "kind": "error", "description": "input and output are equal as sets"}
  ],
  "implications": [
    {"if": ["SAME-ELES-STRONG"], "then": "SAME-ELES-WEAK"},
    {"if": ["SAME-ELES-STRONG"], "then": "SAME-SIZE"}
  ]
}"#;

const MATCHER_MANIFEST: &str = r#"{
  "problem": "matcher",
  "subproperties": [
    {"name": "STABLE", "kind": "core", "description": "no unmatched pair prefers each other to their matches"},
    {"name": "UNIQUENESS", "kind": "core", "description": "no candidate or company occurs in two pairs"},
    {"name": "COMPLETE-CANDIDATES", "kind": "core", "description": "every candidate occurs in some pair"},
    {"name": "COMPLETE-COMPANIES", "kind": "core", "description": "every company occurs in some pair"}
  ],
  "implications": []
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    fn merged() -> Decomposition {
        Decomposition::builtin("toposortacle-merged").unwrap()
    }

    /// P1..P5 with the three-antecedent implication into SAME-NUM-VERTICES.
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

    fn topo(edges: &[(u32, u32)], output: &[u32]) -> TestCase {
        TestCase::Topo {
            edges: edges.to_vec(),
            output: output.to_vec(),
        }
    }

    #[test]
    fn worked_example_pair_lands_in_first_bucket() {
        let d = merged();
        let b1 = Bucket::from_id("FF", &d).unwrap();
        let pair = topo(&[(1, 2), (2, 3)], &[1, 2]);
        assert_eq!(bucket_satisfied_by(&d, &b1, &pair), Ok(true));
    }

    #[test]
    fn worked_example_pair_lands_in_third_bucket() {
        let d = merged();
        let b3 = Bucket::from_id("FT", &d).unwrap();
        let pair = topo(&[(1, 2), (2, 3)], &[1, 2, 2]);
        assert_eq!(bucket_satisfied_by(&d, &b3, &pair), Ok(true));
    }

    #[test]
    fn fully_correct_pair_satisfies_all_true_bucket() {
        let d = five_prop();
        let pair = topo(&[(1, 2), (2, 3)], &[1, 2, 3]);
        assert_eq!(
            bucket_satisfied_by(&d, &Bucket::all_true(5), &pair),
            Ok(true)
        );
    }

    #[test]
    fn exactly_one_bucket_satisfied_per_pair() {
        let d = five_prop();
        let pairs = [
            topo(&[(1, 2), (2, 3)], &[1, 2, 3]),
            topo(&[(1, 2), (2, 3)], &[3, 1, 2]),
            topo(&[], &[]),
            topo(&[(0, 1)], &[5, 5, 5]),
        ];
        for pair in &pairs {
            let hits = enumerate_power_set(&d)
                .filter(|b| bucket_satisfied_by(&d, b, pair).unwrap())
                .count();
            assert_eq!(hits, 1, "pair {pair:?}");
        }
    }

    #[test]
    fn power_set_sizes_match() {
        assert_eq!(enumerate_power_set(&merged()).count(), 4);
        let six = Decomposition::builtin("toposortacle").unwrap();
        assert_eq!(enumerate_power_set(&six).count(), 64);
        let one = Decomposition::from_names(ProblemId::Sortacle, &["ORDERED"], &[]).unwrap();
        let ids: Vec<String> = enumerate_power_set(&one).map(|b| b.id()).collect();
        assert_eq!(ids, vec!["F", "T"]);
    }

    #[test]
    fn power_set_is_sorted_and_duplicate_free() {
        let d = five_prop();
        let ids: Vec<String> = enumerate_power_set(&d).map(|b| b.id()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert_eq!(ids.len(), 32);
    }

    #[test]
    fn pruning_removes_the_contradictory_merged_bucket() {
        let d = merged();
        let all: Vec<Bucket> = enumerate_power_set(&d).collect();
        let kept = prune_by_implications(&d, &all);
        let ids: Vec<String> = kept.iter().map(|b| b.id()).collect();
        assert_eq!(ids, vec!["FF", "FT", "TT"]);
    }

    #[test]
    fn pruning_without_implications_is_identity() {
        let d = Decomposition::from_names(
            ProblemId::Toposortacle,
            &["NO-NEW", "NONE-DROPPED"],
            &[],
        )
        .unwrap();
        let all: Vec<Bucket> = enumerate_power_set(&d).collect();
        assert_eq!(prune_by_implications(&d, &all), all);
    }

    #[test]
    fn focused_buckets_branch_per_antecedent() {
        let d = five_prop();
        let got = focused_buckets(&d, &SubpropertyId::new("SAME-NUM-VERTICES")).unwrap();
        let ids: Vec<String> = got.iter().map(|b| b.id()).collect();
        assert_eq!(ids, vec!["FTTTF", "TFTTF", "TTFTF"]);
    }

    #[test]
    fn focused_buckets_without_incoming_implication_is_singleton() {
        let d = five_prop();
        let got = focused_buckets(&d, &SubpropertyId::new("SORTEDNESS")).unwrap();
        let ids: Vec<String> = got.iter().map(|b| b.id()).collect();
        assert_eq!(ids, vec!["TTTFT"]);
    }

    #[test]
    fn focused_buckets_merged_collapses_to_first_bucket() {
        let d = merged();
        let got = focused_buckets(&d, &SubpropertyId::new("SAME-NUM-VERTICES")).unwrap();
        let ids: Vec<String> = got.iter().map(|b| b.id()).collect();
        assert_eq!(ids, vec!["FF"]);
    }

    #[test]
    fn focused_buckets_subset_of_pruned_power_set_and_target_false() {
        let d = Decomposition::builtin("toposortacle").unwrap();
        let pruned: BTreeSet<String> =
            prune_by_implications(&d, &enumerate_power_set(&d).collect::<Vec<_>>())
                .iter()
                .map(|b| b.id())
                .collect();
        for sub in d.subproperties() {
            let idx = d.index_of(&sub.id).unwrap();
            for bucket in focused_buckets(&d, &sub.id).unwrap() {
                assert!(!bucket.get(idx));
                assert!(pruned.contains(&bucket.id()));
            }
        }
    }

    #[test]
    fn classify_buckets() {
        assert_eq!(classify_bucket(&Bucket::all_true(3)), BucketPolarity::Positive);
        assert_eq!(
            classify_bucket(&Bucket::new(vec![false, false])),
            BucketPolarity::Negative
        );
        assert_eq!(
            classify_bucket(&Bucket::new(vec![false, false, false])),
            BucketPolarity::Negative
        );
    }

    #[test]
    fn builtin_manifests_load() {
        for name in Decomposition::builtin_names() {
            let d = Decomposition::builtin(name).unwrap();
            assert!(!d.is_empty(), "{name}");
        }
        assert!(Decomposition::builtin("no-such").is_none());
    }

    #[test]
    fn manifest_validation_rejects_bad_references() {
        let bad = r#"{"problem": "sortacle",
            "subproperties": [{"name": "ORDERED", "kind": "core"}],
            "implications": [{"if": ["MISSING"], "then": "ORDERED"}]}"#;
        assert!(matches!(
            Decomposition::from_manifest_json(bad),
            Err(DecompositionError::UnknownImplicationTerm(_))
        ));
        let unregistered = r#"{"problem": "sortacle",
            "subproperties": [{"name": "NOT-A-CHECKER", "kind": "core"}]}"#;
        assert!(matches!(
            Decomposition::from_manifest_json(unregistered),
            Err(DecompositionError::UnregisteredChecker { .. })
        ));
    }

    #[test]
    fn malformed_pair_is_an_error_not_false() {
        let d = Decomposition::builtin("matcher").unwrap();
        let pair = TestCase::Match {
            input: crate::problems::MatchInput {
                candidates: vec![vec![0]],
                companies: vec![vec![0]],
            },
            output: [(0, 7)].into_iter().collect(),
        };
        assert!(bucket_satisfied_by(&d, &Bucket::all_true(4), &pair).is_err());
    }
}
