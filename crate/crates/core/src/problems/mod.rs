//! Built-in problems: domain types, subproperty checkers, and JSON codecs.
//!
//! Three problems ship with the tool:
//!
//! * **toposortacle** — judge outputs of a topological sort. Inputs are edge
//!   lists (the partial order to be obeyed, covering all vertices), outputs
//!   are vertex lists.
//! * **sortacle** — judge outputs of a sort over `Person` records keyed by
//!   age, with the name as satellite data.
//! * **matcher** — judge outputs of a stable-matching run between candidates
//!   and companies, identified by index.
//!
//! Checkers are pure and total over well-formed pairs; they are looked up by
//! subproperty name via [`check`].

mod matcher;
mod sortacle;
mod topo;

pub use matcher::MatchInput;
pub use topo::transitive_closure;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

/// Identifies one of the built-in problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProblemId {
    Toposortacle,
    Sortacle,
    Matcher,
}

impl ProblemId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemId::Toposortacle => "toposortacle",
            ProblemId::Sortacle => "sortacle",
            ProblemId::Matcher => "matcher",
        }
    }

    pub fn parse(name: &str) -> Option<ProblemId> {
        match name {
            "toposortacle" => Some(ProblemId::Toposortacle),
            "sortacle" => Some(ProblemId::Sortacle),
            "matcher" => Some(ProblemId::Matcher),
            _ => None,
        }
    }

    /// Subproperty names with registered checkers for this problem.
    pub fn registered_subproperties(&self) -> &'static [&'static str] {
        match self {
            ProblemId::Toposortacle => &[
                "NO-NEW",
                "NONE-DROPPED",
                "UNIQUENESS",
                "SORTEDNESS",
                "SAME-NUM-VERTICES",
                "INCOMINGEDGECOUNT",
                "SAME-ELEMENTS",
                "SAME-ELEMENTS-MULTISET",
            ],
            ProblemId::Sortacle => &["SAME-SIZE", "ORDERED", "SAME-ELES-WEAK", "SAME-ELES-STRONG"],
            ProblemId::Matcher => &[
                "STABLE",
                "UNIQUENESS",
                "COMPLETE-CANDIDATES",
                "COMPLETE-COMPANIES",
            ],
        }
    }

    /// The subproperties whose conjunction is the problem's full correctness
    /// property. Error subproperties are markers, not conjuncts, so they are
    /// not listed here.
    pub fn core_subproperties(&self) -> &'static [&'static str] {
        match self {
            ProblemId::Toposortacle => &["NO-NEW", "NONE-DROPPED", "UNIQUENESS", "SORTEDNESS"],
            ProblemId::Sortacle => &["SAME-SIZE", "ORDERED", "SAME-ELES-STRONG"],
            ProblemId::Matcher => &[
                "STABLE",
                "UNIQUENESS",
                "COMPLETE-CANDIDATES",
                "COMPLETE-COMPANIES",
            ],
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A directed edge in a toposortacle input.
pub type TopoEdge = (u32, u32);

/// A sortacle record: sorted by `age`, `name` rides along. Equality is
/// componentwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Person {
    pub age: u32,
    pub name: String,
}

impl Person {
    pub fn new(age: u32, name: &str) -> Person {
        Person {
            age,
            name: name.to_string(),
        }
    }
}

/// A matcher output: a set of (candidate index, company index) pairs.
pub type MatchPairs = BTreeSet<(usize, usize)>;

/// One input-output pair, tagged by problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TestCase {
    Topo {
        edges: Vec<TopoEdge>,
        output: Vec<u32>,
    },
    Sort {
        input: Vec<Person>,
        output: Vec<Person>,
    },
    Match {
        input: MatchInput,
        output: MatchPairs,
    },
}

impl TestCase {
    pub fn problem(&self) -> ProblemId {
        match self {
            TestCase::Topo { .. } => ProblemId::Toposortacle,
            TestCase::Sort { .. } => ProblemId::Sortacle,
            TestCase::Match { .. } => ProblemId::Matcher,
        }
    }

    /// JSON value for the input half, in the problem's wire encoding.
    pub fn input_json(&self) -> Value {
        match self {
            TestCase::Topo { edges, .. } => {
                Value::Array(edges.iter().map(|(m, n)| json!([m, n])).collect())
            }
            TestCase::Sort { input, .. } => serde_json::to_value(input).expect("person encoding"),
            TestCase::Match { input, .. } => serde_json::to_value(input).expect("match encoding"),
        }
    }

    /// JSON value for the output half, in the problem's wire encoding.
    pub fn output_json(&self) -> Value {
        match self {
            TestCase::Topo { output, .. } => serde_json::to_value(output).expect("vertex list"),
            TestCase::Sort { output, .. } => serde_json::to_value(output).expect("person list"),
            TestCase::Match { output, .. } => {
                Value::Array(output.iter().map(|(c, f)| json!([c, f])).collect())
            }
        }
    }

    /// The `{"input": ..., "output": ...}` object used in suite files and on
    /// the predicate wire protocol.
    pub fn to_pair_value(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("input".to_string(), self.input_json());
        obj.insert("output".to_string(), self.output_json());
        Value::Object(obj)
    }

    /// Canonical single-line encoding; also the deduplication key.
    pub fn to_line(&self) -> String {
        self.to_pair_value().to_string()
    }

    /// Parses a `{"input": ..., "output": ...}` object for the given problem.
    /// Matcher outputs have set semantics: duplicate pairs are rejected.
    pub fn from_pair_value(problem: ProblemId, value: &Value) -> Result<TestCase, CodecError> {
        let obj = value.as_object().ok_or(CodecError::NotAnObject)?;
        let input = obj.get("input").ok_or(CodecError::MissingField("input"))?;
        let output = obj
            .get("output")
            .ok_or(CodecError::MissingField("output"))?;
        match problem {
            ProblemId::Toposortacle => {
                let raw: Vec<(u32, u32)> = serde_json::from_value(input.clone())?;
                let out: Vec<u32> = serde_json::from_value(output.clone())?;
                Ok(TestCase::Topo {
                    edges: raw,
                    output: out,
                })
            }
            ProblemId::Sortacle => Ok(TestCase::Sort {
                input: serde_json::from_value(input.clone())?,
                output: serde_json::from_value(output.clone())?,
            }),
            ProblemId::Matcher => {
                let inp: MatchInput = serde_json::from_value(input.clone())?;
                let raw: Vec<(usize, usize)> = serde_json::from_value(output.clone())?;
                let mut pairs = MatchPairs::new();
                for p in raw {
                    if !pairs.insert(p) {
                        return Err(CodecError::DuplicateMatchPair { pair: p });
                    }
                }
                Ok(TestCase::Match {
                    input: inp,
                    output: pairs,
                })
            }
        }
    }
}

/// Errors from the JSON codecs.
#[derive(Debug, Error)]
pub enum CodecError {
    #[error("test case must be a JSON object")]
    NotAnObject,
    #[error("test case is missing the \"{0}\" field")]
    MissingField(&'static str),
    #[error("duplicate matcher pair {pair:?}; outputs have set semantics")]
    DuplicateMatchPair { pair: (usize, usize) },
    #[error("malformed value: {0}")]
    Json(#[from] serde_json::Error),
}

/// Errors from checker evaluation on malformed pairs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("no checker named {name:?} for problem {problem}")]
    UnknownSubproperty { problem: ProblemId, name: String },
    #[error("pair belongs to {actual}, expected {expected}")]
    WrongProblem {
        expected: ProblemId,
        actual: ProblemId,
    },
    #[error("matcher output index out of range: pair ({candidate}, {company}) with {candidates} candidates and {companies} companies")]
    IndexOutOfRange {
        candidate: usize,
        company: usize,
        candidates: usize,
        companies: usize,
    },
}

/// Evaluates the named subproperty checker on a pair.
pub fn check(name: &str, pair: &TestCase) -> Result<bool, CheckError> {
    match pair {
        TestCase::Topo { edges, output } => topo::check(name, edges, output),
        TestCase::Sort { input, output } => sortacle::check(name, input, output),
        TestCase::Match { input, output } => matcher::check(name, input, output),
    }
}

/// The problem's full correctness property: the conjunction of its core
/// subproperty checkers.
pub fn full_property(pair: &TestCase) -> Result<bool, CheckError> {
    for name in pair.problem().core_subproperties() {
        if !check(name, pair)? {
            return Ok(false);
        }
    }
    Ok(true)
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
    fn full_property_accepts_the_unique_chain_output() {
        let pair = topo(&[(1, 2), (2, 3)], &[1, 2, 3]);
        assert_eq!(full_property(&pair), Ok(true));
    }

    #[test]
    fn full_property_rejects_misordered_output() {
        let pair = topo(&[(1, 2), (2, 3)], &[3, 1, 2]);
        assert_eq!(full_property(&pair), Ok(false));
    }

    #[test]
    fn full_property_rejects_duplicate_mishandling_sort() {
        // Same sets of elements on both sides, lengths match, output ordered,
        // but the multisets differ.
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
        assert_eq!(full_property(&pair), Ok(false));
    }

    #[test]
    fn unknown_checker_is_an_error() {
        let pair = topo(&[], &[]);
        assert!(matches!(
            check("NO-SUCH", &pair),
            Err(CheckError::UnknownSubproperty { .. })
        ));
    }

    #[test]
    fn matcher_codec_rejects_duplicate_pairs() {
        let value = json!({
            "input": {"candidates": [[0]], "companies": [[0]]},
            "output": [[0, 0], [0, 0]],
        });
        assert!(matches!(
            TestCase::from_pair_value(ProblemId::Matcher, &value),
            Err(CodecError::DuplicateMatchPair { .. })
        ));
    }

    #[test]
    fn topo_wire_encoding_is_bit_exact() {
        let pair = topo(&[(1, 2), (2, 3)], &[1, 2]);
        assert_eq!(pair.to_line(), r#"{"input":[[1,2],[2,3]],"output":[1,2]}"#);
        let back = TestCase::from_pair_value(
            ProblemId::Toposortacle,
            &serde_json::from_str(&pair.to_line()).unwrap(),
        )
        .unwrap();
        assert_eq!(back, pair);
    }
}
