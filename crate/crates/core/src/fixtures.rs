//! Built-in predicate fixtures: reference oracles plus a corpus of buggy
//! predicates with known, pairwise-distinguishable failure patterns. The CLI
//! exposes them as subprocess predicates speaking the wire protocol, so the
//! harness exercises the same path as any external submission.

use std::collections::BTreeSet;

use crate::problems::{self, CheckError, ProblemId, TestCase, TopoEdge};

/// Catalog entry: fixture name, problem, whether it is a correct oracle.
pub const CATALOG: &[(&str, ProblemId, bool)] = &[
    ("topo-reference", ProblemId::Toposortacle, true),
    ("topo-length-only", ProblemId::Toposortacle, false),
    ("topo-missing-uniqueness", ProblemId::Toposortacle, false),
    ("topo-nontransitive-sorted", ProblemId::Toposortacle, false),
    ("topo-incoming-edge-count", ProblemId::Toposortacle, false),
    ("sort-reference", ProblemId::Sortacle, true),
    ("sort-weak-elements", ProblemId::Sortacle, false),
    ("match-reference", ProblemId::Matcher, true),
    ("match-candidate-only-complete", ProblemId::Matcher, false),
];

pub fn problem_of(name: &str) -> Option<ProblemId> {
    CATALOG
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, p, _)| *p)
}

/// The buggy subset of the catalog for one problem.
pub fn buggy_fixtures(problem: ProblemId) -> Vec<&'static str> {
    CATALOG
        .iter()
        .filter(|(_, p, correct)| *p == problem && !correct)
        .map(|(n, _, _)| *n)
        .collect()
}

/// Evaluates a fixture predicate on a pair.
pub fn evaluate(name: &str, pair: &TestCase) -> Result<bool, CheckError> {
    let conj = |names: &[&str]| -> Result<bool, CheckError> {
        for n in names {
            if !problems::check(n, pair)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    match name {
        // Correct oracles: the core conjunction for each problem.
        "topo-reference" | "sort-reference" | "match-reference" => problems::full_property(pair),
        // Checks the output's vertex *count* against the input, never its
        // contents: catches wrong-length outputs, misses same-length ones
        // with wrong vertices.
        "topo-length-only" => conj(&["SAME-NUM-VERTICES", "UNIQUENESS", "SORTEDNESS"]),
        // Set-equality containment both ways, no duplicate check.
        "topo-missing-uniqueness" => conj(&["NO-NEW", "NONE-DROPPED", "SORTEDNESS"]),
        // Orders against the raw edge list instead of its transitive closure
        // (and never notices dropped vertices, which is what exposes it).
        "topo-nontransitive-sorted" => match pair {
            TestCase::Topo { edges, output } => {
                Ok(problems::check("NO-NEW", pair)?
                    && problems::check("UNIQUENESS", pair)?
                    && direct_edge_sortedness(edges, output))
            }
            _ => Err(CheckError::WrongProblem {
                expected: ProblemId::Toposortacle,
                actual: pair.problem(),
            }),
        },
        // Duplicate checking replaced by the incoming-edge-count comparison.
        "topo-incoming-edge-count" => conj(&["NONE-DROPPED", "SORTEDNESS", "INCOMINGEDGECOUNT"]),
        // The underspecified permutation check: sets instead of multisets.
        "sort-weak-elements" => conj(&["SAME-SIZE", "ORDERED", "SAME-ELES-WEAK"]),
        // Completeness checked for candidates only.
        "match-candidate-only-complete" => {
            conj(&["STABLE", "UNIQUENESS", "COMPLETE-CANDIDATES"])
        }
        _ => Err(CheckError::UnknownSubproperty {
            problem: pair.problem(),
            name: name.to_string(),
        }),
    }
}

/// First-occurrence ordering against `set(I)` only — no transitive closure.
fn direct_edge_sortedness(edges: &[TopoEdge], output: &[u32]) -> bool {
    let edge_set: BTreeSet<TopoEdge> = edges.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut firsts = Vec::new();
    for &v in output {
        if seen.insert(v) {
            firsts.push(v);
        }
    }
    for (i, &earlier) in firsts.iter().enumerate() {
        for &later in &firsts[i + 1..] {
            if edge_set.contains(&(later, earlier)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(edges: &[(u32, u32)], output: &[u32]) -> TestCase {
        TestCase::Topo {
            edges: edges.to_vec(),
            output: output.to_vec(),
        }
    }

    #[test]
    fn references_agree_with_full_property() {
        let pairs = [
            topo(&[(1, 2), (2, 3)], &[1, 2, 3]),
            topo(&[(1, 2), (2, 3)], &[3, 1, 2]),
            topo(&[], &[]),
        ];
        for pair in &pairs {
            assert_eq!(
                evaluate("topo-reference", pair).unwrap(),
                problems::full_property(pair).unwrap()
            );
        }
    }

    #[test]
    fn length_only_confuses_count_for_contents() {
        // Right length, wrong vertex: accepted by the bug, rejected by the oracle.
        let sneaky = topo(&[(1, 2), (2, 3)], &[1, 2, 4]);
        assert!(evaluate("topo-length-only", &sneaky).unwrap());
        assert!(!evaluate("topo-reference", &sneaky).unwrap());
        // Wrong length: the bug still catches it.
        let short = topo(&[(1, 2), (2, 3)], &[1, 2]);
        assert!(!evaluate("topo-length-only", &short).unwrap());
    }

    #[test]
    fn missing_uniqueness_accepts_duplicates() {
        let doubled = topo(&[(1, 2), (2, 3)], &[1, 2, 3, 3]);
        assert!(evaluate("topo-missing-uniqueness", &doubled).unwrap());
        assert!(!evaluate("topo-reference", &doubled).unwrap());
    }

    #[test]
    fn nontransitive_sortedness_misses_closure_reversals() {
        // The intermediate vertex is dropped, so only the closure edge (1,3)
        // is reversed; the direct-edge check never sees it.
        let hidden = topo(&[(1, 2), (2, 3)], &[3, 1]);
        assert!(evaluate("topo-nontransitive-sorted", &hidden).unwrap());
        assert!(!problems::check("SORTEDNESS", &hidden).unwrap());
        // A direct reversal is still caught.
        let direct = topo(&[(1, 2)], &[2, 1]);
        assert!(!evaluate("topo-nontransitive-sorted", &direct).unwrap());
    }

    #[test]
    fn incoming_edge_count_accepts_the_case_study_pair() {
        let pair = topo(
            &[(2, 3), (1, 3), (2, 1), (1, 0)],
            &[2, 1, 3, 3, 0, 4, 0, 3, 1, 4],
        );
        assert!(evaluate("topo-incoming-edge-count", &pair).unwrap());
        assert!(!evaluate("topo-reference", &pair).unwrap());
    }

    #[test]
    fn weak_elements_accepts_the_multiset_witness() {
        use crate::problems::Person;
        let pair = TestCase::Sort {
            input: vec![
                Person::new(30, "a"),
                Person::new(30, "a"),
                Person::new(20, "b"),
            ],
            output: vec![
                Person::new(20, "b"),
                Person::new(20, "b"),
                Person::new(30, "a"),
            ],
        };
        assert!(evaluate("sort-weak-elements", &pair).unwrap());
        assert!(!evaluate("sort-reference", &pair).unwrap());
    }

    #[test]
    fn candidate_only_complete_ignores_companies() {
        use crate::problems::MatchInput;
        // One candidate, two companies: every candidate is matched but one
        // company is not, and no blocking pair exists.
        let pair = TestCase::Match {
            input: MatchInput {
                candidates: vec![vec![0, 1]],
                companies: vec![vec![0], vec![0]],
            },
            output: [(0, 0)].into_iter().collect(),
        };
        assert!(evaluate("match-candidate-only-complete", &pair).unwrap());
        assert!(!evaluate("match-reference", &pair).unwrap());
    }

    #[test]
    fn every_fixture_accepts_a_fully_valid_pair() {
        // Needed for the functional filtering gate.
        let valid_topo = topo(&[(0, 1), (1, 2)], &[0, 1, 2]);
        for name in [
            "topo-reference",
            "topo-length-only",
            "topo-missing-uniqueness",
            "topo-nontransitive-sorted",
            "topo-incoming-edge-count",
        ] {
            assert!(evaluate(name, &valid_topo).unwrap(), "{name}");
        }
    }
}
