//! Sortacle subproperty checkers.

use std::collections::BTreeSet;

use super::{CheckError, Person, ProblemId};

pub(super) fn check(name: &str, input: &[Person], output: &[Person]) -> Result<bool, CheckError> {
    let ok = match name {
        "SAME-SIZE" => input.len() == output.len(),
        "ORDERED" => output.windows(2).all(|w| w[0].age <= w[1].age),
        "SAME-ELES-WEAK" => {
            let a: BTreeSet<&Person> = input.iter().collect();
            let b: BTreeSet<&Person> = output.iter().collect();
            a == b
        }
        "SAME-ELES-STRONG" => {
            let mut a: Vec<&Person> = input.iter().collect();
            let mut b: Vec<&Person> = output.iter().collect();
            a.sort();
            b.sort();
            a == b
        }
        _ => {
            return Err(CheckError::UnknownSubproperty {
                problem: ProblemId::Sortacle,
                name: name.to_string(),
            })
        }
    };
    Ok(ok)
}
