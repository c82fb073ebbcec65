//! Bounded-exhaustive engine: enumerate every well-formed pair within bounds
//! to concretize buckets, prove buckets empty, and audit declared
//! implications.
//!
//! Enumeration order is a documented structural order, not random: inputs are
//! streamed smallest-first (vertex/side/length count, then edge or element
//! count, then lexicographically), and for each input the outputs are
//! streamed by length then lexicographically over the input's symbol pool.
//! The order is stable across runs, and enumeration state is resumable:
//! asking for `k` witnesses and then `k'` more never revisits a pair.
//!
//! Toposortacle inputs are acyclic edge lists (the input is the partial order
//! to be obeyed) and, unless canonicalization is disabled, only one
//! representative per vertex relabeling is emitted. Outputs draw from the
//! input's vertices plus one fresh symbol, mirroring the random generator's
//! pool. Checker verdicts are invariant under consistent relabeling, so a
//! bucket empty over canonical representatives is empty over the full space.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::decomposition::{Bucket, Decomposition, Implication};
use crate::genfilter::{Engine, Suite};
use crate::problems::{self, CheckError, MatchInput, Person, ProblemId, TestCase, TopoEdge};

/// Default ceiling on the enumeration space size.
pub const DEFAULT_CEILING: u128 = 10_000_000_000;

/// Per-problem scope limits for exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bounds {
    Topo {
        vertices: usize,
        edges: usize,
        out: usize,
    },
    Sort {
        len: usize,
        ages: u32,
        names: usize,
    },
    Match {
        side: usize,
    },
}

impl Bounds {
    /// Desk-scale defaults: full enumeration in seconds.
    pub fn default_for(problem: ProblemId) -> Bounds {
        match problem {
            ProblemId::Toposortacle => Bounds::Topo {
                vertices: 4,
                edges: 4,
                out: 5,
            },
            ProblemId::Sortacle => Bounds::Sort {
                len: 4,
                ages: 3,
                names: 2,
            },
            ProblemId::Matcher => Bounds::Match { side: 3 },
        }
    }

    pub fn problem(&self) -> ProblemId {
        match self {
            Bounds::Topo { .. } => ProblemId::Toposortacle,
            Bounds::Sort { .. } => ProblemId::Sortacle,
            Bounds::Match { .. } => ProblemId::Matcher,
        }
    }

    /// Parses `k=v,...` overrides on top of the problem's defaults.
    /// Keys: `vertices`, `edges`, `out` / `len`, `ages`, `names` / `side`.
    pub fn parse(problem: ProblemId, spec: &str) -> Result<Bounds, ExhaustiveError> {
        let mut bounds = Bounds::default_for(problem);
        if spec.trim().is_empty() {
            return Ok(bounds);
        }
        for item in spec.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| ExhaustiveError::BadBounds(item.to_string()))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| ExhaustiveError::BadBounds(item.to_string()))?;
            match (&mut bounds, key.trim()) {
                (Bounds::Topo { vertices, .. }, "vertices") => *vertices = value,
                (Bounds::Topo { edges, .. }, "edges") => *edges = value,
                (Bounds::Topo { out, .. }, "out") => *out = value,
                (Bounds::Sort { len, .. }, "len") => *len = value,
                (Bounds::Sort { ages, .. }, "ages") => *ages = value as u32,
                (Bounds::Sort { names, .. }, "names") => *names = value,
                (Bounds::Match { side }, "side") => *side = value,
                _ => return Err(ExhaustiveError::BadBounds(item.to_string())),
            }
        }
        if let Bounds::Sort { names, .. } = bounds {
            if names > 26 {
                return Err(ExhaustiveError::BadBounds(format!("names={names}")));
            }
        }
        Ok(bounds)
    }
}

/// Enumeration options shared by all exhaustive operations.
#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Emit only one representative per vertex relabeling (toposortacle).
    pub canonicalize: bool,
    /// Refuse to enumerate spaces larger than this many pairs.
    pub ceiling: u128,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            canonicalize: true,
            ceiling: DEFAULT_CEILING,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExhaustiveError {
    #[error("enumeration space of {size} pairs exceeds the ceiling of {ceiling}")]
    SpaceTooLarge { size: u128, ceiling: u128 },
    #[error("malformed bounds item {0:?}")]
    BadBounds(String),
    #[error("bounds are for {bounds} but the decomposition targets {decomp}")]
    ProblemMismatch { bounds: ProblemId, decomp: ProblemId },
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Outcome of proving one bucket within bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub bucket: String,
    pub bounds: Bounds,
    pub verdict: CertVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub pairs_enumerated: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertVerdict {
    Nonempty,
    EmptyWithinBounds,
}

// --- Pair enumeration -------------------------------------------------------

/// Counts sequences over `0..base` of lengths `0..=max_len`, in length-major
/// lexicographic order. The empty sequence comes first.
struct ListCounter {
    digits: Vec<usize>,
    base: usize,
    max_len: usize,
    done: bool,
}

impl ListCounter {
    fn new(base: usize, max_len: usize) -> ListCounter {
        ListCounter {
            digits: Vec::new(),
            base,
            max_len,
            done: false,
        }
    }

    fn current(&self) -> Option<&[usize]> {
        if self.done {
            None
        } else {
            Some(&self.digits)
        }
    }

    fn advance(&mut self) {
        if self.done {
            return;
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                return;
            }
            *d = 0;
        }
        // All digits rolled over: grow the length.
        if self.digits.len() < self.max_len && self.base > 0 {
            self.digits = vec![0; self.digits.len() + 1];
        } else {
            self.done = true;
        }
    }
}

enum StreamKind {
    Topo {
        /// Prepared inputs: edge list plus the output symbol pool.
        inputs: Vec<(Vec<TopoEdge>, Vec<u32>)>,
        idx: usize,
        counter: ListCounter,
        max_out: usize,
    },
    Sort {
        universe: Vec<Person>,
        inputs: Vec<Vec<Person>>,
        idx: usize,
        counter: ListCounter,
        max_len: usize,
    },
    Match {
        inputs: Vec<(MatchInput, Vec<(usize, usize)>)>,
        idx: usize,
        mask: u64,
    },
}

/// Resumable stream of every well-formed pair within bounds, each exactly
/// once, in the documented structural order.
pub struct PairStream {
    kind: StreamKind,
    started: bool,
}

impl PairStream {
    pub fn new(bounds: &Bounds, opts: &EnumOptions) -> Result<PairStream, ExhaustiveError> {
        let size = space_size(bounds, opts)?;
        if size > opts.ceiling {
            return Err(ExhaustiveError::SpaceTooLarge {
                size,
                ceiling: opts.ceiling,
            });
        }
        let kind = match *bounds {
            Bounds::Topo {
                vertices,
                edges,
                out,
            } => {
                let inputs = topo_inputs(vertices, edges, opts.canonicalize);
                let pool0 = inputs.first().map(|(_, p)| p.len()).unwrap_or(1);
                StreamKind::Topo {
                    inputs,
                    idx: 0,
                    counter: ListCounter::new(pool0, out),
                    max_out: out,
                }
            }
            Bounds::Sort { len, ages, names } => {
                let universe = person_universe(ages, names);
                let inputs = sort_inputs(&universe, len);
                StreamKind::Sort {
                    universe: universe.clone(),
                    inputs,
                    idx: 0,
                    counter: ListCounter::new(universe.len(), len),
                    max_len: len,
                }
            }
            Bounds::Match { side } => {
                let inputs = match_inputs(side);
                StreamKind::Match {
                    inputs,
                    idx: 0,
                    mask: 0,
                }
            }
        };
        Ok(PairStream {
            kind,
            started: false,
        })
    }
}

impl Iterator for PairStream {
    type Item = TestCase;

    fn next(&mut self) -> Option<TestCase> {
        // The first call yields the initial cursor position; later calls
        // advance first.
        let advance = self.started;
        self.started = true;
        match &mut self.kind {
            StreamKind::Topo {
                inputs,
                idx,
                counter,
                max_out,
            } => {
                if advance {
                    counter.advance();
                }
                loop {
                    if *idx >= inputs.len() {
                        return None;
                    }
                    if let Some(digits) = counter.current() {
                        let (edges, pool) = &inputs[*idx];
                        let output = digits.iter().map(|&d| pool[d]).collect();
                        return Some(TestCase::Topo {
                            edges: edges.clone(),
                            output,
                        });
                    }
                    *idx += 1;
                    if *idx < inputs.len() {
                        *counter = ListCounter::new(inputs[*idx].1.len(), *max_out);
                    }
                }
            }
            StreamKind::Sort {
                universe,
                inputs,
                idx,
                counter,
                max_len,
            } => {
                if advance {
                    counter.advance();
                }
                loop {
                    if *idx >= inputs.len() {
                        return None;
                    }
                    if let Some(digits) = counter.current() {
                        let output = digits.iter().map(|&d| universe[d].clone()).collect();
                        return Some(TestCase::Sort {
                            input: inputs[*idx].clone(),
                            output,
                        });
                    }
                    *idx += 1;
                    *counter = ListCounter::new(universe.len(), *max_len);
                }
            }
            StreamKind::Match { inputs, idx, mask } => {
                if advance {
                    *mask += 1;
                }
                loop {
                    if *idx >= inputs.len() {
                        return None;
                    }
                    let (input, cells) = &inputs[*idx];
                    let limit = 1u64 << cells.len();
                    if *mask < limit {
                        let output = cells
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *mask >> i & 1 == 1)
                            .map(|(_, &cell)| cell)
                            .collect();
                        return Some(TestCase::Match {
                            input: input.clone(),
                            output,
                        });
                    }
                    *idx += 1;
                    *mask = 0;
                }
            }
        }
    }
}

/// The smallest bounds whose enumeration space contains everything the
/// random engine can draw under `config`. The sortacle perturbation pipeline
/// can grow an output by up to two elements (one duplication, one insertion),
/// hence the `+ 2`.
pub fn covering_bounds(config: &crate::genfilter::GenConfig, problem: ProblemId) -> Bounds {
    match problem {
        ProblemId::Toposortacle => Bounds::Topo {
            vertices: config.topo.max_vertices,
            edges: config.topo.max_edges,
            out: config.max_out_len,
        },
        ProblemId::Sortacle => Bounds::Sort {
            len: config.sort.max_len + 2,
            ages: config.sort.ages,
            names: config.sort.names,
        },
        ProblemId::Matcher => Bounds::Match {
            side: config.matcher.max_side,
        },
    }
}

/// Whether every pair the random engine can draw under `config` lies within
/// the enumeration space of `bounds`.
pub fn config_fits_bounds(config: &crate::genfilter::GenConfig, bounds: &Bounds) -> bool {
    match (covering_bounds(config, bounds.problem()), bounds) {
        (
            Bounds::Topo {
                vertices: cv,
                edges: ce,
                out: co,
            },
            Bounds::Topo {
                vertices,
                edges,
                out,
            },
        ) => cv <= *vertices && ce <= *edges && co <= *out,
        (
            Bounds::Sort {
                len: cl,
                ages: ca,
                names: cn,
            },
            Bounds::Sort { len, ages, names },
        ) => cl <= *len && ca <= *ages && cn <= *names,
        (Bounds::Match { side: cs }, Bounds::Match { side }) => cs <= *side,
        _ => false,
    }
}

/// Exact number of pairs the stream will yield.
pub fn space_size(bounds: &Bounds, opts: &EnumOptions) -> Result<u128, ExhaustiveError> {
    match *bounds {
        Bounds::Topo {
            vertices,
            edges,
            out,
        } => {
            // Cheap upper bound before materializing inputs.
            let possible = (vertices * vertices.saturating_sub(1)) as u128;
            let mut input_bound: u128 = 0;
            for e in 0..=edges as u128 {
                input_bound = input_bound.saturating_add(binomial(possible, e));
            }
            if input_bound > 5_000_000 {
                return Err(ExhaustiveError::SpaceTooLarge {
                    size: input_bound,
                    ceiling: opts.ceiling,
                });
            }
            let inputs = topo_inputs(vertices, edges, opts.canonicalize);
            let mut total: u128 = 0;
            for (_, pool) in &inputs {
                total = total.saturating_add(geometric(pool.len() as u128, out));
            }
            Ok(total)
        }
        Bounds::Sort { len, ages, names } => {
            let side = geometric((ages as usize * names) as u128, len);
            Ok(side.saturating_mul(side))
        }
        Bounds::Match { side } => {
            let mut total: u128 = 0;
            for nc in 0..=side {
                for nf in 0..=side {
                    let inputs = pow(factorial(nf as u128), nc)
                        .saturating_mul(pow(factorial(nc as u128), nf));
                    let outputs = if nc * nf >= 127 {
                        u128::MAX
                    } else {
                        1u128 << (nc * nf)
                    };
                    total = total.saturating_add(inputs.saturating_mul(outputs));
                }
            }
            Ok(total)
        }
    }
}

fn geometric(base: u128, max_len: usize) -> u128 {
    // 1 + base + base^2 + ... + base^max_len
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(term);
        term = term.saturating_mul(base);
    }
    total
}

fn pow(base: u128, exp: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.saturating_mul(base);
    }
    out
}

fn factorial(n: u128) -> u128 {
    (1..=n).product::<u128>().max(1)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.saturating_mul(n - i) / (i + 1);
    }
    out
}

fn person_universe(ages: u32, names: usize) -> Vec<Person> {
    let mut universe = Vec::new();
    for age in 0..ages {
        for name in 0..names {
            let letter = (b'a' + name as u8) as char;
            universe.push(Person::new(age, &letter.to_string()));
        }
    }
    universe
}

fn sort_inputs(universe: &[Person], max_len: usize) -> Vec<Vec<Person>> {
    let mut inputs = Vec::new();
    let mut counter = ListCounter::new(universe.len(), max_len);
    while let Some(digits) = counter.current() {
        inputs.push(digits.iter().map(|&d| universe[d].clone()).collect());
        counter.advance();
    }
    inputs
}

fn match_inputs(max_side: usize) -> Vec<(MatchInput, Vec<(usize, usize)>)> {
    let mut inputs = Vec::new();
    for nc in 0..=max_side {
        for nf in 0..=max_side {
            let cand_perms: Vec<Vec<usize>> = (0..nf).permutations(nf).collect();
            let comp_perms: Vec<Vec<usize>> = (0..nc).permutations(nc).collect();
            let cells: Vec<(usize, usize)> = (0..nc)
                .flat_map(|c| (0..nf).map(move |f| (c, f)))
                .collect();
            for cand_choice in (0..nc).map(|_| 0..cand_perms.len()).multi_cartesian_product_or_empty() {
                for comp_choice in (0..nf).map(|_| 0..comp_perms.len()).multi_cartesian_product_or_empty() {
                    let input = MatchInput {
                        candidates: cand_choice.iter().map(|&i| cand_perms[i].clone()).collect(),
                        companies: comp_choice.iter().map(|&i| comp_perms[i].clone()).collect(),
                    };
                    inputs.push((input, cells.clone()));
                }
            }
        }
    }
    inputs
}

/// `multi_cartesian_product` yields nothing for an empty factor list; we want
/// a single empty combination instead.
trait ProductOrEmpty: Iterator + Sized {
    fn multi_cartesian_product_or_empty(self) -> std::vec::IntoIter<Vec<usize>>;
}

impl<I> ProductOrEmpty for I
where
    I: Iterator,
    I::Item: Iterator<Item = usize> + Clone,
{
    fn multi_cartesian_product_or_empty(self) -> std::vec::IntoIter<Vec<usize>> {
        let factors: Vec<_> = self.collect();
        if factors.is_empty() {
            return vec![Vec::new()].into_iter();
        }
        factors
            .into_iter()
            .multi_cartesian_product()
            .collect::<Vec<_>>()
            .into_iter()
    }
}

/// Acyclic edge lists within bounds, paired with their output symbol pool
/// (mentioned vertices plus one fresh symbol). With canonicalization, only
/// the least representative under vertex relabeling is kept and labels are
/// contiguous from zero; without it, every acyclic duplicate-free edge list
/// over `0..max_vertices` is emitted.
fn topo_inputs(max_vertices: usize, max_edges: usize, canonicalize: bool) -> Vec<(Vec<TopoEdge>, Vec<u32>)> {
    let mut inputs: Vec<Vec<TopoEdge>> = Vec::new();
    if canonicalize {
        for n in 0..=max_vertices {
            if n == 1 {
                continue; // a single vertex cannot be mentioned without a self-loop
            }
            let possible = ordered_pairs(n);
            let mut subset = Vec::new();
            collect_subsets(&possible, 0, max_edges, &mut subset, &mut |edges| {
                if mentions_all(edges, n) && is_acyclic(edges) && is_least_labeling(edges, n) {
                    inputs.push(edges.to_vec());
                }
            });
        }
    } else {
        let possible = ordered_pairs(max_vertices);
        let mut subset = Vec::new();
        collect_subsets(&possible, 0, max_edges, &mut subset, &mut |edges| {
            if is_acyclic(edges) {
                inputs.push(edges.to_vec());
            }
        });
    }
    inputs.sort_by_key(|edges| (vertex_count(edges), edges.len(), edges.clone()));
    inputs
        .into_iter()
        .map(|edges| {
            let mut pool: Vec<u32> = edges
                .iter()
                .flat_map(|&(m, n)| [m, n])
                .collect::<std::collections::BTreeSet<u32>>()
                .into_iter()
                .collect();
            let fresh = (0..).find(|v| !pool.contains(v)).unwrap();
            pool.push(fresh);
            (edges, pool)
        })
        .collect()
}

fn ordered_pairs(n: usize) -> Vec<TopoEdge> {
    let mut pairs = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if a != b {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

fn collect_subsets(
    possible: &[TopoEdge],
    start: usize,
    remaining: usize,
    subset: &mut Vec<TopoEdge>,
    emit: &mut impl FnMut(&[TopoEdge]),
) {
    emit(subset);
    if remaining == 0 {
        return;
    }
    for i in start..possible.len() {
        subset.push(possible[i]);
        collect_subsets(possible, i + 1, remaining - 1, subset, emit);
        subset.pop();
    }
}

fn vertex_count(edges: &[TopoEdge]) -> usize {
    edges
        .iter()
        .flat_map(|&(m, n)| [m, n])
        .collect::<std::collections::BTreeSet<u32>>()
        .len()
}

fn mentions_all(edges: &[TopoEdge], n: usize) -> bool {
    let mentioned: std::collections::BTreeSet<u32> =
        edges.iter().flat_map(|&(m, n)| [m, n]).collect();
    mentioned.len() == n
}

fn is_acyclic(edges: &[TopoEdge]) -> bool {
    let closure = problems::transitive_closure(edges);
    closure.iter().all(|&(a, b)| a != b)
}

/// The sorted edge list is its own least representative over all vertex
/// relabelings.
fn is_least_labeling(edges: &[TopoEdge], n: usize) -> bool {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    for perm in (0..n as u32).permutations(n) {
        let mut relabeled: Vec<TopoEdge> = edges
            .iter()
            .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
            .collect();
        relabeled.sort_unstable();
        if relabeled < sorted {
            return false;
        }
    }
    true
}

// --- Bucket search -----------------------------------------------------------

/// Resumable search for pairs satisfying one bucket.
pub struct BucketEnumeration {
    decomp: Decomposition,
    bucket: Bucket,
    stream: PairStream,
    space: u128,
    pairs_enumerated: u64,
    finished: bool,
}

impl BucketEnumeration {
    pub fn new(
        decomp: &Decomposition,
        bucket: &Bucket,
        bounds: &Bounds,
        opts: &EnumOptions,
    ) -> Result<BucketEnumeration, ExhaustiveError> {
        check_problem(decomp, bounds)?;
        Ok(BucketEnumeration {
            decomp: decomp.clone(),
            bucket: bucket.clone(),
            stream: PairStream::new(bounds, opts)?,
            space: space_size(bounds, opts)?,
            pairs_enumerated: 0,
            finished: false,
        })
    }

    /// Pulls up to `k` further witnesses; fewer mean the space is exhausted.
    pub fn next_witnesses(&mut self, k: usize) -> Result<Vec<TestCase>, CheckError> {
        let mut found = Vec::new();
        while found.len() < k {
            match self.stream.next() {
                Some(pair) => {
                    self.pairs_enumerated += 1;
                    if crate::decomposition::bucket_satisfied_by(&self.decomp, &self.bucket, &pair)? {
                        found.push(pair);
                    }
                }
                None => {
                    self.finished = true;
                    break;
                }
            }
        }
        Ok(found)
    }

    pub fn pairs_enumerated(&self) -> u64 {
        self.pairs_enumerated
    }

    /// Whether the whole space has been visited.
    pub fn finished(&self) -> bool {
        self.finished
    }

    pub fn space_size(&self) -> u128 {
        self.space
    }
}

/// Result of [`enumerate_bucket`].
#[derive(Debug)]
pub enum BucketOutcome {
    /// At least one witness was found. `space_exhausted` notes that the suite
    /// holds every satisfying pair within bounds.
    Concretized {
        suite: Suite,
        space_exhausted: bool,
        pairs_enumerated: u64,
    },
    Empty(Certificate),
}

fn check_problem(decomp: &Decomposition, bounds: &Bounds) -> Result<(), ExhaustiveError> {
    if decomp.problem() != bounds.problem() {
        return Err(ExhaustiveError::ProblemMismatch {
            bounds: bounds.problem(),
            decomp: decomp.problem(),
        });
    }
    Ok(())
}

/// Finds the first `k` pairs satisfying the bucket, or proves the bucket
/// empty within bounds.
pub fn enumerate_bucket(
    decomp: &Decomposition,
    bucket: &Bucket,
    bounds: &Bounds,
    k: usize,
    opts: &EnumOptions,
) -> Result<BucketOutcome, ExhaustiveError> {
    let mut search = BucketEnumeration::new(decomp, bucket, bounds, opts)?;
    let tests = search.next_witnesses(k)?;
    if tests.is_empty() {
        return Ok(BucketOutcome::Empty(Certificate {
            bucket: bucket.id(),
            bounds: bounds.clone(),
            verdict: CertVerdict::EmptyWithinBounds,
            witness: None,
            pairs_enumerated: search.pairs_enumerated(),
        }));
    }
    Ok(BucketOutcome::Concretized {
        suite: Suite::new(decomp, bucket, Engine::Exhaustive, None, tests),
        space_exhausted: search.finished(),
        pairs_enumerated: search.pairs_enumerated(),
    })
}

/// One sweep over the space, certifying every power-set bucket.
/// Nonempty certificates record the pair index at which the witness appeared;
/// emptiness certificates record the full space size.
pub fn prove_all(
    decomp: &Decomposition,
    bounds: &Bounds,
    opts: &EnumOptions,
) -> Result<Vec<Certificate>, ExhaustiveError> {
    check_problem(decomp, bounds)?;
    let stream = PairStream::new(bounds, opts)?;
    let mut witnesses: BTreeMap<String, (TestCase, u64)> = BTreeMap::new();
    let mut total: u64 = 0;
    for pair in stream {
        total += 1;
        let id = decomp.assignment_of(&pair)?.id();
        witnesses.entry(id).or_insert_with(|| (pair, total));
    }
    let mut certs = Vec::new();
    for bucket in crate::decomposition::enumerate_power_set(decomp) {
        let id = bucket.id();
        let cert = match witnesses.get(&id) {
            Some((pair, at)) => Certificate {
                bucket: id,
                bounds: bounds.clone(),
                verdict: CertVerdict::Nonempty,
                witness: Some(pair.to_pair_value()),
                pairs_enumerated: *at,
            },
            None => Certificate {
                bucket: id,
                bounds: bounds.clone(),
                verdict: CertVerdict::EmptyWithinBounds,
                witness: None,
                pairs_enumerated: total,
            },
        };
        certs.push(cert);
    }
    Ok(certs)
}

/// Result of a one-sweep concretization over a selected bucket set.
pub struct SweepResult {
    pub suites: Vec<Suite>,
    /// Buckets with no satisfying pair; proven empty only if the sweep ran to
    /// the end of the space.
    pub empty: Vec<Certificate>,
    pub pairs_enumerated: u64,
}

/// Concretizes every target bucket in a single sweep, stopping early once all
/// targets have `k` tests.
pub fn concretize_all(
    decomp: &Decomposition,
    targets: &[Bucket],
    bounds: &Bounds,
    k: usize,
    opts: &EnumOptions,
) -> Result<SweepResult, ExhaustiveError> {
    check_problem(decomp, bounds)?;
    let mut wanted: BTreeMap<String, (Bucket, Vec<TestCase>)> = targets
        .iter()
        .map(|b| (b.id(), (b.clone(), Vec::new())))
        .collect();
    let stream = PairStream::new(bounds, opts)?;
    let mut total: u64 = 0;
    let mut open = wanted.len();
    for pair in stream {
        if open == 0 {
            break;
        }
        total += 1;
        let id = decomp.assignment_of(&pair)?.id();
        if let Some((_, tests)) = wanted.get_mut(&id) {
            if tests.len() < k {
                tests.push(pair);
                if tests.len() == k {
                    open -= 1;
                }
            }
        }
    }
    let mut suites = Vec::new();
    let mut empty = Vec::new();
    for (id, (bucket, tests)) in wanted {
        if tests.is_empty() {
            empty.push(Certificate {
                bucket: id,
                bounds: bounds.clone(),
                verdict: CertVerdict::EmptyWithinBounds,
                witness: None,
                pairs_enumerated: total,
            });
        } else {
            suites.push(Suite::new(decomp, &bucket, Engine::Exhaustive, None, tests));
        }
    }
    Ok(SweepResult {
        suites,
        empty,
        pairs_enumerated: total,
    })
}

/// Outcome of auditing one implication conjecture within bounds.
#[derive(Debug)]
pub enum ImplicationOutcome {
    HoldsWithinBounds { pairs_enumerated: u64 },
    Counterexample(TestCase),
}

/// Searches for a pair satisfying every antecedent while falsifying the
/// consequent; the first such pair in enumeration order is returned.
pub fn check_implication(
    decomp: &Decomposition,
    candidate: &Implication,
    bounds: &Bounds,
    opts: &EnumOptions,
) -> Result<ImplicationOutcome, ExhaustiveError> {
    check_problem(decomp, bounds)?;
    for term in candidate.antecedents.iter().chain([&candidate.consequent]) {
        if decomp.index_of(term).is_none() {
            return Err(CheckError::UnknownSubproperty {
                problem: decomp.problem(),
                name: term.0.clone(),
            }
            .into());
        }
    }
    let stream = PairStream::new(bounds, opts)?;
    let mut total: u64 = 0;
    'pairs: for pair in stream {
        total += 1;
        for ante in &candidate.antecedents {
            if !problems::check(ante.as_str(), &pair)? {
                continue 'pairs;
            }
        }
        if !problems::check(candidate.consequent.as_str(), &pair)? {
            return Ok(ImplicationOutcome::Counterexample(pair));
        }
    }
    Ok(ImplicationOutcome::HoldsWithinBounds {
        pairs_enumerated: total,
    })
}

/// How many valid outputs an input must admit to qualify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    ExactlyOne,
    MoreThanOne,
}

/// Positive pairs grouped by how constrained the input is: inputs with
/// exactly one valid output (functional) or several (relational, two valid
/// pairs emitted per input).
pub fn functional_inputs(
    problem: ProblemId,
    bounds: &Bounds,
    arity: Arity,
    opts: &EnumOptions,
) -> Result<Vec<TestCase>, ExhaustiveError> {
    if problem != bounds.problem() {
        return Err(ExhaustiveError::ProblemMismatch {
            bounds: bounds.problem(),
            decomp: problem,
        });
    }
    // Reuse the pair stream; it is input-major, so runs of equal inputs are
    // contiguous.
    let stream = PairStream::new(bounds, opts)?;
    let mut out = Vec::new();
    let mut current: Option<TestCase> = None; // representative pair of the current input
    let mut valid: Vec<TestCase> = Vec::new();
    let flush = |valid: &mut Vec<TestCase>, out: &mut Vec<TestCase>| match arity {
        Arity::ExactlyOne if valid.len() == 1 => out.append(valid),
        Arity::MoreThanOne if valid.len() >= 2 => {
            out.extend(valid.drain(..).take(2));
            valid.clear();
        }
        _ => valid.clear(),
    };
    for pair in stream {
        let same_input = match (&current, &pair) {
            (Some(TestCase::Topo { edges: a, .. }), TestCase::Topo { edges: b, .. }) => a == b,
            (Some(TestCase::Sort { input: a, .. }), TestCase::Sort { input: b, .. }) => a == b,
            (Some(TestCase::Match { input: a, .. }), TestCase::Match { input: b, .. }) => a == b,
            _ => false,
        };
        if !same_input {
            flush(&mut valid, &mut out);
            current = Some(pair.clone());
        }
        if valid.len() < 2 && problems::full_property(&pair)? {
            valid.push(pair);
        }
    }
    flush(&mut valid, &mut out);
    Ok(out)
}
