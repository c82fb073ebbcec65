//! Toposortacle subproperty checkers.
//!
//! All checkers treat the edge list with set semantics (`set(I)`); edge order
//! and duplicate edges never change a verdict. `SORTEDNESS` compares the
//! *first occurrences* of output vertices against the transitive closure of
//! the input: an output disobeys it exactly when some vertex first appears
//! before one of its (transitive) predecessors first appears. Later duplicate
//! occurrences are judged by `UNIQUENESS`, not by `SORTEDNESS`.

use std::collections::BTreeSet;

use super::{CheckError, ProblemId, TopoEdge};

/// Least transitively closed superset of the edge set.
pub fn transitive_closure(edges: &[TopoEdge]) -> BTreeSet<TopoEdge> {
    let mut closed: BTreeSet<TopoEdge> = edges.iter().copied().collect();
    loop {
        let mut added = Vec::new();
        for &(a, b) in &closed {
            for &(c, d) in &closed {
                if b == c && !closed.contains(&(a, d)) {
                    added.push((a, d));
                }
            }
        }
        if added.is_empty() {
            return closed;
        }
        closed.extend(added);
    }
}

/// Vertices mentioned by any edge.
pub fn vertices(edges: &[TopoEdge]) -> BTreeSet<u32> {
    edges.iter().flat_map(|&(m, n)| [m, n]).collect()
}

pub(super) fn check(name: &str, edges: &[TopoEdge], output: &[u32]) -> Result<bool, CheckError> {
    let ok = match name {
        "NO-NEW" => no_new(edges, output),
        "NONE-DROPPED" => none_dropped(edges, output),
        "UNIQUENESS" => uniqueness(output),
        "SORTEDNESS" => sortedness(edges, output),
        "SAME-NUM-VERTICES" => same_num_vertices(edges, output),
        "INCOMINGEDGECOUNT" => incoming_edge_count(edges, output),
        "SAME-ELEMENTS" => no_new(edges, output) && none_dropped(edges, output),
        "SAME-ELEMENTS-MULTISET" => {
            no_new(edges, output) && none_dropped(edges, output) && uniqueness(output)
        }
        _ => {
            return Err(CheckError::UnknownSubproperty {
                problem: ProblemId::Toposortacle,
                name: name.to_string(),
            })
        }
    };
    Ok(ok)
}

/// Every output vertex occurs in some input edge.
fn no_new(edges: &[TopoEdge], output: &[u32]) -> bool {
    let verts = vertices(edges);
    output.iter().all(|v| verts.contains(v))
}

/// Every vertex in any input edge occurs in the output.
fn none_dropped(edges: &[TopoEdge], output: &[u32]) -> bool {
    let out: BTreeSet<u32> = output.iter().copied().collect();
    vertices(edges).iter().all(|v| out.contains(v))
}

/// The output has no duplicate vertices.
fn uniqueness(output: &[u32]) -> bool {
    let mut seen = BTreeSet::new();
    output.iter().all(|v| seen.insert(*v))
}

/// No vertex first appears before a transitive predecessor first appears.
fn sortedness(edges: &[TopoEdge], output: &[u32]) -> bool {
    let order = transitive_closure(edges);
    let firsts = first_occurrences(output);
    for (i, &earlier) in firsts.iter().enumerate() {
        for &later in &firsts[i + 1..] {
            if order.contains(&(later, earlier)) {
                return false;
            }
        }
    }
    true
}

/// Output length equals the number of vertices the input mentions.
fn same_num_vertices(edges: &[TopoEdge], output: &[u32]) -> bool {
    vertices(edges).len() == output.len()
}

/// At every output position, the number of incoming input-edges of the vertex
/// equals the number of earlier positions holding one of its edge sources.
fn incoming_edge_count(edges: &[TopoEdge], output: &[u32]) -> bool {
    let edge_set: BTreeSet<TopoEdge> = edges.iter().copied().collect();
    for (k, &v) in output.iter().enumerate() {
        let incoming = edge_set.iter().filter(|&&(_, n)| n == v).count();
        let before = output[..k]
            .iter()
            .filter(|&&u| edge_set.contains(&(u, v)))
            .count();
        if incoming != before {
            return false;
        }
    }
    true
}

fn first_occurrences(output: &[u32]) -> Vec<u32> {
    let mut seen = BTreeSet::new();
    let mut firsts = Vec::new();
    for &v in output {
        if seen.insert(v) {
            firsts.push(v);
        }
    }
    firsts
}
