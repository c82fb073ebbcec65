//! Matcher subproperty checkers.
//!
//! Stability over malformed (multi-matched) outputs reads "prefers" as
//! "prefers to every current partner", so the checker stays total even when
//! `UNIQUENESS` fails. An index absent from a preference list is never
//! preferred.

use serde::{Deserialize, Serialize};

use super::{CheckError, MatchPairs, ProblemId};

/// Preference lists for both sides, most-preferred first. Indexes are the
/// identities: `candidates[c]` ranks company indexes, `companies[f]` ranks
/// candidate indexes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchInput {
    pub candidates: Vec<Vec<usize>>,
    pub companies: Vec<Vec<usize>>,
}

pub(super) fn check(name: &str, input: &MatchInput, output: &MatchPairs) -> Result<bool, CheckError> {
    for &(c, f) in output {
        if c >= input.candidates.len() || f >= input.companies.len() {
            return Err(CheckError::IndexOutOfRange {
                candidate: c,
                company: f,
                candidates: input.candidates.len(),
                companies: input.companies.len(),
            });
        }
    }
    let ok = match name {
        "STABLE" => stable(input, output),
        "UNIQUENESS" => uniqueness(output),
        "COMPLETE-CANDIDATES" => (0..input.candidates.len())
            .all(|c| output.iter().any(|&(c2, _)| c2 == c)),
        "COMPLETE-COMPANIES" => (0..input.companies.len())
            .all(|f| output.iter().any(|&(_, f2)| f2 == f)),
        _ => {
            return Err(CheckError::UnknownSubproperty {
                problem: ProblemId::Matcher,
                name: name.to_string(),
            })
        }
    };
    Ok(ok)
}

fn uniqueness(output: &MatchPairs) -> bool {
    let mut cands = std::collections::BTreeSet::new();
    let mut comps = std::collections::BTreeSet::new();
    for &(c, f) in output {
        if !cands.insert(c) || !comps.insert(f) {
            return false;
        }
    }
    true
}

/// No blocking pair: a (candidate, company) pair not in the output where each
/// side is unmatched or strictly prefers the other to every current partner.
fn stable(input: &MatchInput, output: &MatchPairs) -> bool {
    for c in 0..input.candidates.len() {
        for f in 0..input.companies.len() {
            if output.contains(&(c, f)) {
                continue;
            }
            let c_wants = side_prefers(
                &input.candidates[c],
                f,
                output.iter().filter(|&&(c2, _)| c2 == c).map(|&(_, g)| g),
            );
            if !c_wants {
                continue;
            }
            let f_wants = side_prefers(
                &input.companies[f],
                c,
                output.iter().filter(|&&(_, f2)| f2 == f).map(|&(d, _)| d),
            );
            if f_wants {
                return false;
            }
        }
    }
    true
}

/// Unmatched, or strictly prefers `target` to every current partner.
fn side_prefers(prefs: &[usize], target: usize, partners: impl Iterator<Item = usize>) -> bool {
    let rank = |x: usize| prefs.iter().position(|&p| p == x);
    let target_rank = rank(target);
    for partner in partners {
        match (target_rank, rank(partner)) {
            (Some(t), Some(p)) if t < p => {}
            // Target missing from the list, or not strictly better.
            _ => return false,
        }
    }
    true
}
