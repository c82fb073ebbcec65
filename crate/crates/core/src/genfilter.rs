//! Random generate-and-filter engine: per-bucket rejection sampling over
//! problem-specific input-output generators.
//!
//! Every bucket draws from its own RNG stream, seeded by a digest of the
//! global seed, the problem, and the bucket id, so buckets are independent,
//! reproducible, and safe to concretize concurrently. The first draw for a
//! bucket runs the trivial generator (zero-length lists allowed); the rest
//! enforce the configured minimum sizes.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::decomposition::{
    bucket_satisfied_by, enumerate_power_set, focused_buckets, prune_by_implications, Bucket,
    Decomposition, SubpropertyId,
};
use crate::problems::{CheckError, MatchInput, Person, ProblemId, TestCase};

/// Which engine produced a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Random,
    Exhaustive,
}

/// Toposortacle generator knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopoKnobs {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
}

/// Sortacle generator knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortKnobs {
    pub min_len: usize,
    pub max_len: usize,
    pub ages: u32,
    pub names: usize,
}

/// Matcher generator knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchKnobs {
    pub min_side: usize,
    pub max_side: usize,
}

/// Random-engine configuration. The defaults produce ten tests per bucket
/// from at most twenty thousand candidates, with non-trivial draws holding at
/// least two edges and output lists of three to ten elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub global_seed: u64,
    pub suite_size: usize,
    pub candidate_budget: usize,
    pub min_out_len: usize,
    pub max_out_len: usize,
    pub min_edges: usize,
    pub trivial_attempts: usize,
    pub topo: TopoKnobs,
    pub sort: SortKnobs,
    pub matcher: MatchKnobs,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            global_seed: 0,
            suite_size: 10,
            candidate_budget: 20_000,
            min_out_len: 3,
            max_out_len: 10,
            min_edges: 2,
            trivial_attempts: 1,
            topo: TopoKnobs {
                min_vertices: 3,
                max_vertices: 4,
                max_edges: 4,
            },
            sort: SortKnobs {
                min_len: 3,
                max_len: 4,
                ages: 3,
                names: 2,
            },
            matcher: MatchKnobs {
                min_side: 3,
                max_side: 3,
            },
        }
    }
}

impl GenConfig {
    /// Digest over everything that influences generation, so cache entries
    /// from another configuration never apply.
    pub fn digest(&self, decomp: &Decomposition) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_string(self).expect("config encoding"));
        hasher.update(decomp.to_manifest_json());
        hex(&hasher.finalize()[..16])
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.suite_size == 0
            || self.candidate_budget < self.suite_size
            || self.min_out_len > self.max_out_len
            || self.topo.min_vertices > self.topo.max_vertices
            || self.sort.min_len > self.sort.max_len
            || self.matcher.min_side > self.matcher.max_side
            || self.sort.names > 26
            || self.sort.ages == 0
            || self.sort.names == 0
        {
            return Err(GenError::BadConfig);
        }
        Ok(())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A bucket-labeled, engine-stamped, duplicate-free list of tests.
#[derive(Debug, Clone)]
pub struct Suite {
    pub problem: ProblemId,
    pub engine: Engine,
    pub seed: Option<u64>,
    /// Subproperty names with the bucket's assignment, in declaration order.
    pub bucket: Vec<(String, bool)>,
    pub tests: Vec<TestCase>,
}

impl Suite {
    pub fn new(
        decomp: &Decomposition,
        bucket: &Bucket,
        engine: Engine,
        seed: Option<u64>,
        tests: Vec<TestCase>,
    ) -> Suite {
        Suite {
            problem: decomp.problem(),
            engine,
            seed,
            bucket: decomp
                .names()
                .into_iter()
                .zip(bucket.values().iter().copied())
                .collect(),
            tests,
        }
    }

    pub fn bucket_id(&self) -> String {
        self.bucket
            .iter()
            .map(|(_, v)| if *v { 'T' } else { 'F' })
            .collect()
    }

    pub fn bucket_values(&self) -> Bucket {
        Bucket::new(self.bucket.iter().map(|(_, v)| *v).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.bucket.iter().all(|(_, v)| *v)
    }

    /// Suite file encoding:
    /// `{"problem", "engine", "seed", "bucket": {name: bool, ...}, "tests": [...]}`.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("problem".into(), self.problem.as_str().into());
        obj.insert(
            "engine".into(),
            serde_json::to_value(self.engine).expect("engine tag"),
        );
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), seed.into());
        }
        let mut bucket = serde_json::Map::new();
        for (name, value) in &self.bucket {
            bucket.insert(name.clone(), (*value).into());
        }
        obj.insert("bucket".into(), Value::Object(bucket));
        obj.insert(
            "tests".into(),
            Value::Array(self.tests.iter().map(|t| t.to_pair_value()).collect()),
        );
        Value::Object(obj)
    }

    pub fn from_json(value: &Value) -> Result<Suite, SuiteParseError> {
        let obj = value.as_object().ok_or(SuiteParseError::Shape)?;
        let problem = obj
            .get("problem")
            .and_then(Value::as_str)
            .and_then(ProblemId::parse)
            .ok_or(SuiteParseError::Shape)?;
        let engine = obj
            .get("engine")
            .cloned()
            .ok_or(SuiteParseError::Shape)
            .and_then(|v| serde_json::from_value(v).map_err(|_| SuiteParseError::Shape))?;
        let seed = obj.get("seed").and_then(Value::as_u64);
        let bucket_obj = obj
            .get("bucket")
            .and_then(Value::as_object)
            .ok_or(SuiteParseError::Shape)?;
        let bucket = bucket_obj
            .iter()
            .map(|(k, v)| v.as_bool().map(|b| (k.clone(), b)))
            .collect::<Option<Vec<_>>>()
            .ok_or(SuiteParseError::Shape)?;
        let tests = obj
            .get("tests")
            .and_then(Value::as_array)
            .ok_or(SuiteParseError::Shape)?
            .iter()
            .map(|t| TestCase::from_pair_value(problem, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Suite {
            problem,
            engine,
            seed,
            bucket,
            tests,
        })
    }
}

#[derive(Debug, Error)]
pub enum SuiteParseError {
    #[error("suite file has an unexpected shape")]
    Shape,
    #[error("bad test encoding: {0}")]
    Codec(#[from] crate::problems::CodecError),
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator configuration")]
    BadConfig,
    #[error(transparent)]
    Check(#[from] CheckError),
}

// --- Infeasibility cache -----------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibilityStatus {
    ExhaustedBudget,
    ProvedEmpty,
}

/// Remembers buckets that exhausted their budget (or were proven empty) so
/// later runs with the same configuration skip them. Keys include a config
/// digest; stale entries never apply.
pub struct InfeasibilityCache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<String, InfeasibilityStatus>>,
}

impl InfeasibilityCache {
    /// In-memory cache with no backing file.
    pub fn ephemeral() -> InfeasibilityCache {
        InfeasibilityCache {
            path: None,
            entries: Mutex::new(BTreeMap::new()),
        }
    }

    /// Opens or initializes a single-file JSON cache.
    pub fn open(path: &Path) -> InfeasibilityCache {
        let entries = fs::read_to_string(path)
            .ok()
            .and_then(|text| serde_json::from_str(&text).ok())
            .unwrap_or_default();
        InfeasibilityCache {
            path: Some(path.to_path_buf()),
            entries: Mutex::new(entries),
        }
    }

    fn key(problem: ProblemId, bucket_id: &str, digest: &str) -> String {
        format!("{}:{}:{}", problem.as_str(), bucket_id, digest)
    }

    pub fn lookup(
        &self,
        problem: ProblemId,
        bucket_id: &str,
        digest: &str,
    ) -> Option<InfeasibilityStatus> {
        self.entries
            .lock()
            .unwrap()
            .get(&Self::key(problem, bucket_id, digest))
            .copied()
    }

    /// Records a status and persists the cache. A write failure is reported
    /// but does not affect generation results.
    pub fn record(
        &self,
        problem: ProblemId,
        bucket_id: &str,
        digest: &str,
        status: InfeasibilityStatus,
    ) -> Result<(), std::io::Error> {
        let snapshot = {
            let mut entries = self.entries.lock().unwrap();
            entries.insert(Self::key(problem, bucket_id, digest), status);
            entries.clone()
        };
        if let Some(path) = &self.path {
            let text = serde_json::to_string_pretty(&snapshot).expect("cache encoding");
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, text.as_bytes())?;
            fs::rename(&tmp, path)?;
        }
        Ok(())
    }
}

// --- Candidate generation ----------------------------------------------------

/// Trivial draws relax minimum sizes (allowed once per bucket by default);
/// non-trivial draws enforce them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Trivial,
    Nontrivial,
}

/// Draws one candidate pair for the problem.
pub fn generate_candidate(
    problem: ProblemId,
    config: &GenConfig,
    rng: &mut ChaCha8Rng,
    mode: GenMode,
) -> TestCase {
    match problem {
        ProblemId::Toposortacle => topo_candidate(config, rng, mode),
        ProblemId::Sortacle => sort_candidate(config, rng, mode),
        ProblemId::Matcher => match_candidate(config, rng, mode),
    }
}

/// Random permutation of the vertices, forward edges sampled against it (the
/// input is acyclic by construction), and an output drawn from the vertex
/// pool plus one fresh symbol so the no-new-vertices subproperty can fail.
fn topo_candidate(config: &GenConfig, rng: &mut ChaCha8Rng, mode: GenMode) -> TestCase {
    let n = rng.gen_range(config.topo.min_vertices..=config.topo.max_vertices);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut possible: Vec<(u32, u32)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            possible.push((order[i], order[j]));
        }
    }
    possible.shuffle(rng);
    let max_edges = config.topo.max_edges.min(possible.len());
    let min_edges = match mode {
        GenMode::Trivial => 0,
        GenMode::Nontrivial => config.min_edges.min(max_edges),
    };
    let edge_count = rng.gen_range(min_edges..=max_edges);
    let edges = possible[..edge_count].to_vec();
    let min_out = match mode {
        GenMode::Trivial => 0,
        GenMode::Nontrivial => config.min_out_len,
    };
    let out_len = rng.gen_range(min_out..=config.max_out_len);
    let output = (0..out_len).map(|_| rng.gen_range(0..=n as u32)).collect();
    TestCase::Topo { edges, output }
}

/// Random person list, then a perturbation pipeline over it: each stage runs
/// with an independent probability, so outputs range from the exact sort to
/// heavily mangled lists. The pipeline keeps rare buckets reachable; fully
/// independent output sampling almost never lands near the input.
fn sort_candidate(config: &GenConfig, rng: &mut ChaCha8Rng, mode: GenMode) -> TestCase {
    let knobs = &config.sort;
    let min_len = match mode {
        GenMode::Trivial => 0,
        GenMode::Nontrivial => knobs.min_len,
    };
    let len = rng.gen_range(min_len..=knobs.max_len);
    let person = |rng: &mut ChaCha8Rng| {
        let age = rng.gen_range(0..knobs.ages);
        let name = (b'a' + rng.gen_range(0..knobs.names) as u8) as char;
        Person::new(age, &name.to_string())
    };
    let input: Vec<Person> = (0..len).map(|_| person(rng)).collect();
    let mut output = input.clone();
    if rng.gen_bool(0.7) {
        output.sort_by_key(|p| p.age);
    }
    if rng.gen_bool(0.3) {
        output.shuffle(rng);
    }
    if rng.gen_bool(0.25) && !output.is_empty() {
        let at = rng.gen_range(0..output.len());
        output.remove(at);
    }
    if rng.gen_bool(0.25) && !output.is_empty() {
        let at = rng.gen_range(0..output.len());
        let dup = output[at].clone();
        output.insert(at, dup);
    }
    if rng.gen_bool(0.2) {
        let at = rng.gen_range(0..=output.len());
        output.insert(at, person(rng));
    }
    if rng.gen_bool(0.2) && !output.is_empty() {
        let at = rng.gen_range(0..output.len());
        let name = (b'a' + rng.gen_range(0..knobs.names) as u8) as char;
        output[at].name = name.to_string();
    }
    TestCase::Sort { input, output }
}

/// Equal-sized sides with uniformly random full preference lists; the output
/// is a random duplicate-free subset of the candidate-company grid.
fn match_candidate(config: &GenConfig, rng: &mut ChaCha8Rng, mode: GenMode) -> TestCase {
    let knobs = &config.matcher;
    let min_side = match mode {
        GenMode::Trivial => 0,
        GenMode::Nontrivial => knobs.min_side,
    };
    let n = rng.gen_range(min_side..=knobs.max_side);
    let perm = |rng: &mut ChaCha8Rng| {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    };
    let input = MatchInput {
        candidates: (0..n).map(|_| perm(rng)).collect(),
        companies: (0..n).map(|_| perm(rng)).collect(),
    };
    let mut cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|c| (0..n).map(move |f| (c, f)))
        .collect();
    cells.shuffle(rng);
    let size = rng.gen_range(0..=(n + 2).min(cells.len()));
    let output = cells[..size].iter().copied().collect();
    TestCase::Match { input, output }
}

// --- Per-bucket concretization -------------------------------------------------

/// Result of concretizing one bucket with the random engine.
#[derive(Debug)]
pub enum ConcretizeOutcome {
    Concretized { suite: Suite, draws: usize },
    /// The budget ran out (or a cache entry said it would); not an error.
    Exhausted { cached: bool, draws: usize },
}

fn bucket_rng(global_seed: u64, problem: ProblemId, bucket_id: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(global_seed.to_le_bytes());
    hasher.update(problem.as_str().as_bytes());
    hasher.update(bucket_id.as_bytes());
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(seed)
}

/// Rejection-samples candidates until the suite is full or the budget is
/// consumed. The first `trivial_attempts` draws use the trivial generator.
/// Candidates already in the suite are discarded; every draw counts against
/// the budget.
pub fn concretize_bucket(
    decomp: &Decomposition,
    bucket: &Bucket,
    config: &GenConfig,
    cache: &InfeasibilityCache,
    warnings: &mut Vec<String>,
) -> Result<ConcretizeOutcome, GenError> {
    config.validate()?;
    let problem = decomp.problem();
    let bucket_id = bucket.id();
    let digest = config.digest(decomp);
    if cache.lookup(problem, &bucket_id, &digest).is_some() {
        return Ok(ConcretizeOutcome::Exhausted {
            cached: true,
            draws: 0,
        });
    }
    let mut rng = bucket_rng(config.global_seed, problem, &bucket_id);
    let mut tests: Vec<TestCase> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut draws = 0;
    while tests.len() < config.suite_size && draws < config.candidate_budget {
        let mode = if draws < config.trivial_attempts {
            GenMode::Trivial
        } else {
            GenMode::Nontrivial
        };
        let candidate = generate_candidate(problem, config, &mut rng, mode);
        draws += 1;
        if bucket_satisfied_by(decomp, bucket, &candidate)? && seen.insert(candidate.to_line()) {
            tests.push(candidate);
        }
    }
    if tests.len() < config.suite_size {
        if let Err(err) = cache.record(
            problem,
            &bucket_id,
            &digest,
            InfeasibilityStatus::ExhaustedBudget,
        ) {
            warnings.push(format!("cache write failed for bucket {bucket_id}: {err}"));
        }
        return Ok(ConcretizeOutcome::Exhausted {
            cached: false,
            draws,
        });
    }
    Ok(ConcretizeOutcome::Concretized {
        suite: Suite::new(decomp, bucket, Engine::Random, Some(config.global_seed), tests),
        draws,
    })
}

/// Which buckets to concretize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BucketSelection {
    PowerSet,
    PrunedPowerSet,
    Focused(SubpropertyId),
}

impl BucketSelection {
    pub fn buckets(&self, decomp: &Decomposition) -> Result<Vec<Bucket>, crate::decomposition::DecompositionError> {
        match self {
            BucketSelection::PowerSet => Ok(enumerate_power_set(decomp).collect()),
            BucketSelection::PrunedPowerSet => Ok(prune_by_implications(
                decomp,
                &enumerate_power_set(decomp).collect::<Vec<_>>(),
            )),
            BucketSelection::Focused(target) => focused_buckets(decomp, target),
        }
    }
}

/// Summary of a generation run over a bucket selection.
#[derive(Debug, Default)]
pub struct GenReport {
    pub suites: Vec<Suite>,
    pub exhausted: Vec<String>,
    pub skipped_cached: Vec<String>,
    pub warnings: Vec<String>,
}

/// Concretizes every selected bucket. Partial results are always returned.
pub fn generate_all(
    decomp: &Decomposition,
    config: &GenConfig,
    selection: &BucketSelection,
    cache: &InfeasibilityCache,
) -> Result<GenReport, GenError> {
    let buckets = selection
        .buckets(decomp)
        .map_err(|_| GenError::BadConfig)?;
    let mut report = GenReport::default();
    for bucket in buckets {
        match concretize_bucket(decomp, &bucket, config, cache, &mut report.warnings)? {
            ConcretizeOutcome::Concretized { suite, .. } => report.suites.push(suite),
            ConcretizeOutcome::Exhausted { cached: true, .. } => {
                report.skipped_cached.push(bucket.id())
            }
            ConcretizeOutcome::Exhausted { cached: false, .. } => {
                report.exhausted.push(bucket.id())
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

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

    #[test]
    fn nontrivial_candidates_respect_minimum_sizes() {
        let config = GenConfig::default();
        let mut rng = bucket_rng(1, ProblemId::Toposortacle, "shape");
        for _ in 0..500 {
            match generate_candidate(ProblemId::Toposortacle, &config, &mut rng, GenMode::Nontrivial)
            {
                TestCase::Topo { edges, output } => {
                    assert!(edges.len() >= 2);
                    assert!(edges.len() <= config.topo.max_edges);
                    assert!((3..=10).contains(&output.len()));
                    assert!(edges.iter().all(|(m, n)| m != n));
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn generated_inputs_are_acyclic_and_duplicate_free() {
        let config = GenConfig::default();
        let mut rng = bucket_rng(2, ProblemId::Toposortacle, "dag");
        for _ in 0..500 {
            if let TestCase::Topo { edges, .. } =
                generate_candidate(ProblemId::Toposortacle, &config, &mut rng, GenMode::Nontrivial)
            {
                let closure = problems::transitive_closure(&edges);
                assert!(closure.iter().all(|(a, b)| a != b), "cycle in {edges:?}");
                let set: std::collections::BTreeSet<_> = edges.iter().collect();
                assert_eq!(set.len(), edges.len());
            }
        }
    }

    #[test]
    fn some_trivial_draw_is_fully_empty() {
        let config = GenConfig::default();
        let mut found = false;
        for seed in 0..300 {
            let mut rng = bucket_rng(seed, ProblemId::Toposortacle, "trivial");
            if let TestCase::Topo { edges, output } =
                generate_candidate(ProblemId::Toposortacle, &config, &mut rng, GenMode::Trivial)
            {
                if edges.is_empty() && output.is_empty() {
                    found = true;
                    break;
                }
            }
        }
        assert!(found, "the trivial generator admits ([], [])");
    }

    #[test]
    fn extra_symbol_produces_no_new_violations() {
        let config = GenConfig::default();
        let mut rng = bucket_rng(3, ProblemId::Toposortacle, "no-new");
        let mut violations = 0;
        for _ in 0..1000 {
            let pair =
                generate_candidate(ProblemId::Toposortacle, &config, &mut rng, GenMode::Nontrivial);
            if !problems::check("NO-NEW", &pair).unwrap() {
                violations += 1;
            }
        }
        assert!(violations > 0, "the n+1 pool makes NO-NEW falsifiable");
    }

    #[test]
    fn focused_sortedness_suite_violates_only_sortedness() {
        let decomp = five_prop();
        let bucket = Bucket::from_id("TTTFT", &decomp).unwrap();
        let config = GenConfig::default();
        let cache = InfeasibilityCache::ephemeral();
        let mut warnings = Vec::new();
        match concretize_bucket(&decomp, &bucket, &config, &cache, &mut warnings).unwrap() {
            ConcretizeOutcome::Concretized { suite, draws } => {
                assert_eq!(suite.tests.len(), 10);
                assert!(draws <= config.candidate_budget);
                let mut seen = HashSet::new();
                for test in &suite.tests {
                    assert!(seen.insert(test.to_line()), "duplicate in suite");
                    for name in ["NO-NEW", "NONE-DROPPED", "UNIQUENESS", "SAME-NUM-VERTICES"] {
                        assert!(problems::check(name, test).unwrap(), "{name} on {test:?}");
                    }
                    assert!(!problems::check("SORTEDNESS", test).unwrap());
                }
            }
            other => panic!("expected a full suite, got {other:?}"),
        }
        assert!(warnings.is_empty());
    }

    #[test]
    fn contradictory_bucket_exhausts_budget_and_caches() {
        let decomp = Decomposition::builtin("toposortacle-merged").unwrap();
        let bucket = Bucket::from_id("TF", &decomp).unwrap();
        let mut config = GenConfig::default();
        config.candidate_budget = 2_000; // keep the unsatisfiable search quick
        config.suite_size = 5;
        let cache = InfeasibilityCache::ephemeral();
        let mut warnings = Vec::new();
        match concretize_bucket(&decomp, &bucket, &config, &cache, &mut warnings).unwrap() {
            ConcretizeOutcome::Exhausted { cached, draws } => {
                assert!(!cached);
                assert_eq!(draws, 2_000);
            }
            other => panic!("the contradictory bucket must exhaust, got {other:?}"),
        }
        // Second run hits the cache without drawing.
        match concretize_bucket(&decomp, &bucket, &config, &cache, &mut warnings).unwrap() {
            ConcretizeOutcome::Exhausted { cached, draws } => {
                assert!(cached);
                assert_eq!(draws, 0);
            }
            other => panic!("expected a cache hit, got {other:?}"),
        }
    }

    #[test]
    fn cache_survives_reload_and_keys_on_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        let decomp = Decomposition::builtin("toposortacle-merged").unwrap();
        let config = GenConfig::default();
        let digest = config.digest(&decomp);
        {
            let cache = InfeasibilityCache::open(&path);
            cache
                .record(
                    ProblemId::Toposortacle,
                    "TF",
                    &digest,
                    InfeasibilityStatus::ExhaustedBudget,
                )
                .unwrap();
        }
        let cache = InfeasibilityCache::open(&path);
        assert_eq!(
            cache.lookup(ProblemId::Toposortacle, "TF", &digest),
            Some(InfeasibilityStatus::ExhaustedBudget)
        );
        // A different seed changes the digest, so the entry no longer applies.
        let mut other = config.clone();
        other.global_seed = 99;
        assert_eq!(
            cache.lookup(ProblemId::Toposortacle, "TF", &other.digest(&decomp)),
            None
        );
    }

    #[test]
    fn determinism_same_config_same_bytes() {
        let decomp = five_prop();
        let config = GenConfig {
            global_seed: 7,
            ..GenConfig::default()
        };
        let run = || {
            let cache = InfeasibilityCache::ephemeral();
            let report =
                generate_all(&decomp, &config, &BucketSelection::PrunedPowerSet, &cache).unwrap();
            report
                .suites
                .iter()
                .map(|s| s.to_json().to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn focused_selection_yields_one_suite_for_sortedness() {
        let decomp = five_prop();
        let config = GenConfig::default();
        let cache = InfeasibilityCache::ephemeral();
        let report = generate_all(
            &decomp,
            &config,
            &BucketSelection::Focused(SubpropertyId::new("SORTEDNESS")),
            &cache,
        )
        .unwrap();
        assert_eq!(report.suites.len(), 1);
        assert_eq!(report.suites[0].bucket_id(), "TTTFT");
    }

    #[test]
    fn pruned_selection_drops_contradicted_buckets() {
        let decomp = five_prop();
        let power = BucketSelection::PowerSet.buckets(&decomp).unwrap();
        let pruned = BucketSelection::PrunedPowerSet.buckets(&decomp).unwrap();
        assert_eq!(power.len(), 32);
        assert_eq!(pruned.len(), 30, "two buckets contradict the implication");
    }

    #[test]
    fn suite_json_round_trips() {
        let decomp = five_prop();
        let bucket = Bucket::all_true(5);
        let suite = Suite::new(
            &decomp,
            &bucket,
            Engine::Random,
            Some(7),
            vec![TestCase::Topo {
                edges: vec![(0, 1)],
                output: vec![0, 1],
            }],
        );
        let value = suite.to_json();
        let back = Suite::from_json(&value).unwrap();
        assert_eq!(back.bucket_id(), "TTTTT");
        assert_eq!(back.seed, Some(7));
        assert_eq!(back.tests, suite.tests);
        // Field order is pinned.
        let text = value.to_string();
        let pi = text.find("\"problem\"").unwrap();
        let ei = text.find("\"engine\"").unwrap();
        let si = text.find("\"seed\"").unwrap();
        let bi = text.find("\"bucket\"").unwrap();
        let ti = text.find("\"tests\"").unwrap();
        assert!(pi < ei && ei < si && si < bi && bi < ti);
    }
}
