//! Runs candidate predicates (external processes) against suites.
//!
//! Wire protocol: the harness writes one JSON object per line,
//! `{"input": ..., "output": ...}`, to the predicate's standard input; the
//! predicate answers exactly `true` or `false` (lowercase, newline-terminated)
//! per line on standard output. Anything else, an exit before answering, or
//! exceeding the per-test timeout becomes an error verdict. Error verdicts
//! count as misclassifications for both positive and negative suites: a
//! predicate that throws is treated as answering wrongly.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genfilter::Suite;

/// An external predicate: a command line plus a per-test timeout.
#[derive(Debug, Clone)]
pub struct PredicateUnderTest {
    pub id: String,
    /// Program and arguments, spawned directly (no shell).
    pub command: Vec<String>,
    pub timeout: Duration,
}

impl PredicateUnderTest {
    pub fn new(id: &str, command: Vec<String>) -> PredicateUnderTest {
        PredicateUnderTest {
            id: id.to_string(),
            command,
            timeout: Duration::from_secs(5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Crash,
    Timeout,
    Garbled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "kind")]
pub enum Outcome {
    Accepted,
    Rejected,
    Error(ErrorKind),
}

/// One predicate answer for one test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub test_index: usize,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// Verdicts for one suite, with the aggregated misclassification flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub predicate: String,
    pub bucket: String,
    pub verdicts: Vec<Verdict>,
    pub misclassified: bool,
}

/// The set of bucket ids on whose suites a predicate misclassified a test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub predicate: String,
    pub failed_buckets: BTreeSet<String>,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("predicate {id:?} could not be launched: {source}")]
    Unlaunchable {
        id: String,
        #[source]
        source: std::io::Error,
    },
    #[error("predicate command is empty")]
    EmptyCommand,
}

struct PredicateProcess {
    child: Child,
    stdin: Option<std::process::ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
}

impl PredicateProcess {
    fn spawn(pred: &PredicateUnderTest) -> Result<PredicateProcess, HarnessError> {
        let (program, args) = pred
            .command
            .split_first()
            .ok_or(HarnessError::EmptyCommand)?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| HarnessError::Unlaunchable {
                id: pred.id.clone(),
                source,
            })?;
        let stdout = child.stdout.take().expect("piped stdout");
        let stdin = child.stdin.take().expect("piped stdin");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(PredicateProcess {
            child,
            stdin: Some(stdin),
            lines: rx,
        })
    }

    /// Sends one test and waits for one answer line.
    fn ask(&mut self, line: &str, timeout: Duration) -> Outcome {
        if let Some(stdin) = self.stdin.as_mut() {
            if writeln!(stdin, "{line}").and_then(|_| stdin.flush()).is_err() {
                return Outcome::Error(ErrorKind::Crash);
            }
        } else {
            return Outcome::Error(ErrorKind::Crash);
        }
        match self.lines.recv_timeout(timeout) {
            Ok(Ok(answer)) => match answer.trim() {
                "true" => Outcome::Accepted,
                "false" => Outcome::Rejected,
                _ => Outcome::Error(ErrorKind::Garbled),
            },
            Ok(Err(_)) => Outcome::Error(ErrorKind::Crash),
            Err(RecvTimeoutError::Timeout) => Outcome::Error(ErrorKind::Timeout),
            Err(RecvTimeoutError::Disconnected) => Outcome::Error(ErrorKind::Crash),
        }
    }

    fn shutdown(mut self) {
        self.stdin.take(); // close the pipe first
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Streams every test over the wire protocol and aggregates verdicts.
/// The process is restarted after an error verdict so the remaining tests
/// still run. A negative suite is misclassified when any test is accepted or
/// errors; a positive suite when any test is rejected or errors.
pub fn run_suite(pred: &PredicateUnderTest, suite: &Suite) -> Result<SuiteResult, HarnessError> {
    let mut process = PredicateProcess::spawn(pred)?;
    let mut verdicts = Vec::with_capacity(suite.tests.len());
    for (index, test) in suite.tests.iter().enumerate() {
        let outcome = process.ask(&test.to_line(), pred.timeout);
        if matches!(outcome, Outcome::Error(_)) && index + 1 < suite.tests.len() {
            process.shutdown();
            process = PredicateProcess::spawn(pred)?;
        }
        verdicts.push(Verdict {
            test_index: index,
            outcome,
        });
    }
    process.shutdown();
    Ok(aggregate(pred, suite, verdicts))
}

fn aggregate(pred: &PredicateUnderTest, suite: &Suite, verdicts: Vec<Verdict>) -> SuiteResult {
    let misclassified = compute_misclassified(suite.is_positive(), &verdicts);
    SuiteResult {
        predicate: pred.id.clone(),
        bucket: suite.bucket_id(),
        verdicts,
        misclassified,
    }
}

/// Order-independent aggregation of verdicts into the misclassification flag.
pub fn compute_misclassified(positive: bool, verdicts: &[Verdict]) -> bool {
    verdicts.iter().any(|v| match v.outcome {
        Outcome::Accepted => !positive,
        Outcome::Rejected => positive,
        Outcome::Error(_) => true,
    })
}

/// Which filtering gate excluded a predicate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExcludedPredicate {
    pub id: String,
    pub failed_functional: bool,
    pub failed_all_false: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterReport {
    pub kept: Vec<String>,
    pub excluded: Vec<ExcludedPredicate>,
}

/// Excludes predicates that misclassify the positive functional suite or the
/// all-subproperties-false suite; the report records which gate failed.
pub fn filter_predicates(
    preds: &[PredicateUnderTest],
    functional: &Suite,
    all_false: &Suite,
) -> Result<FilterReport, HarnessError> {
    let mut report = FilterReport {
        kept: Vec::new(),
        excluded: Vec::new(),
    };
    for pred in preds {
        let failed_functional = run_suite(pred, functional)?.misclassified;
        let failed_all_false = run_suite(pred, all_false)?.misclassified;
        if failed_functional || failed_all_false {
            report.excluded.push(ExcludedPredicate {
                id: pred.id.clone(),
                failed_functional,
                failed_all_false,
            });
        } else {
            report.kept.push(pred.id.clone());
        }
    }
    Ok(report)
}

/// Runs the predicate over every suite and collects the failed bucket set.
pub fn fingerprint(
    pred: &PredicateUnderTest,
    suites: &[Suite],
) -> Result<Fingerprint, HarnessError> {
    let mut failed = BTreeSet::new();
    for suite in suites {
        if run_suite(pred, suite)?.misclassified {
            failed.insert(suite.bucket_id());
        }
    }
    Ok(Fingerprint {
        predicate: pred.id.clone(),
        failed_buckets: failed,
    })
}

/// Folds suite results (for example from disk) into a fingerprint.
pub fn fingerprint_from_results(predicate: &str, results: &[SuiteResult]) -> Fingerprint {
    Fingerprint {
        predicate: predicate.to_string(),
        failed_buckets: results
            .iter()
            .filter(|r| r.misclassified)
            .map(|r| r.bucket.clone())
            .collect(),
    }
}
