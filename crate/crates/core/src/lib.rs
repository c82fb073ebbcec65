//! Bucketed test generation and grading for property-based-testing predicates.
//!
//! A correctness property is decomposed into named subproperties. A *bucket*
//! is a total true/false assignment over those subproperties; every
//! input-output pair lands in exactly one bucket. Two engines concretize
//! buckets into test suites: a seeded generate-and-filter engine
//! ([`genfilter`]) and a bounded-exhaustive engine ([`exhaustive`]) that can
//! also prove buckets empty within bounds. The [`harness`] runs candidate
//! predicates (external processes speaking a line protocol) against suites,
//! and [`report`] aggregates verdicts into groups, comparisons, fingerprints,
//! and cross-engine validation.

pub mod decomposition;
pub mod exhaustive;
pub mod fixtures;
pub mod genfilter;
pub mod harness;
pub mod problems;
pub mod report;
