//! Command-line front door: generate / prove / positives / audit / run /
//! filter / fingerprint / compare / crossval workflows, plus the built-in
//! fixture predicates.
//!
//! Exit codes: 0 success, 2 success with nothing produced (or validation
//! warnings), 64 usage, 65 bounds/ceiling, 66 missing input.

use std::fs;
use std::io::{BufRead, Write as IoWrite};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use propgrade_core::decomposition::{Decomposition, SubpropertyId};
use propgrade_core::exhaustive::{
    check_implication, concretize_all, prove_all, Arity, Bounds, Certificate, EnumOptions,
    ExhaustiveError, ImplicationOutcome,
};
use propgrade_core::genfilter::{
    concretize_bucket, BucketSelection, ConcretizeOutcome, Engine, GenConfig, InfeasibilityCache,
    Suite,
};
use propgrade_core::harness::{
    self, fingerprint_from_results, FilterReport, PredicateUnderTest, SuiteResult,
};
use propgrade_core::problems::{ProblemId, TestCase};
use propgrade_core::report::{self, cross_validate, group_buckets};
use propgrade_core::{exhaustive, fixtures};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "propgrade", version, about = "Bucketed test suites for grading property-based-testing predicates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Built-in manifest name (toposortacle, toposortacle-merged, sortacle, matcher).
    #[arg(long)]
    problem: Option<String>,
    /// Path to a manifest JSON file; overrides --problem.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct GenKnobs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "suite-size", default_value_t = 10)]
    suite_size: usize,
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    #[arg(long = "min-out", default_value_t = 3)]
    min_out: usize,
    #[arg(long = "max-out", default_value_t = 10)]
    max_out: usize,
    #[arg(long = "min-edges", default_value_t = 2)]
    min_edges: usize,
    #[arg(long = "trivial-attempts", default_value_t = 1)]
    trivial_attempts: usize,
    #[arg(long = "min-vertices", default_value_t = 3)]
    min_vertices: usize,
    #[arg(long = "max-vertices", default_value_t = 4)]
    max_vertices: usize,
    #[arg(long = "max-edges", default_value_t = 4)]
    max_edges: usize,
    #[arg(long = "min-len", default_value_t = 3)]
    min_len: usize,
    #[arg(long = "max-len", default_value_t = 4)]
    max_len: usize,
    #[arg(long, default_value_t = 3)]
    ages: u32,
    #[arg(long, default_value_t = 2)]
    names: usize,
    #[arg(long = "min-side", default_value_t = 3)]
    min_side: usize,
    #[arg(long = "max-side", default_value_t = 3)]
    max_side: usize,
}

impl GenKnobs {
    fn to_config(&self) -> GenConfig {
        GenConfig {
            global_seed: self.seed,
            suite_size: self.suite_size,
            candidate_budget: self.budget,
            min_out_len: self.min_out,
            max_out_len: self.max_out,
            min_edges: self.min_edges,
            trivial_attempts: self.trivial_attempts,
            topo: propgrade_core::genfilter::TopoKnobs {
                min_vertices: self.min_vertices,
                max_vertices: self.max_vertices,
                max_edges: self.max_edges,
            },
            sort: propgrade_core::genfilter::SortKnobs {
                min_len: self.min_len,
                max_len: self.max_len,
                ages: self.ages,
                names: self.names,
            },
            matcher: propgrade_core::genfilter::MatchKnobs {
                min_side: self.min_side,
                max_side: self.max_side,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate bucket-labeled suites with one of the two engines.
    Gen {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "random")]
        engine: String,
        /// power | pruned | focused:<SUBPROPERTY>
        #[arg(long, default_value = "pruned")]
        buckets: String,
        #[command(flatten)]
        knobs: GenKnobs,
        /// Exhaustive-engine scope, as comma-separated k=v overrides.
        #[arg(long, default_value = "")]
        bounds: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Disable vertex-relabeling canonicalization (exhaustive engine).
        #[arg(long = "no-canon", default_value_t = false)]
        no_canon: bool,
        #[arg(long, default_value_t = propgrade_core::exhaustive::DEFAULT_CEILING)]
        ceiling: u128,
    },
    /// Certify every power-set bucket nonempty or empty within bounds.
    Prove {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "")]
        bounds: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long = "no-canon", default_value_t = false)]
        no_canon: bool,
        #[arg(long, default_value_t = propgrade_core::exhaustive::DEFAULT_CEILING)]
        ceiling: u128,
    },
    /// Emit the FUNCTIONAL and RELATIONAL positive suites.
    Positives {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "")]
        bounds: String,
        #[arg(long = "suite-size", default_value_t = 10)]
        suite_size: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = propgrade_core::exhaustive::DEFAULT_CEILING)]
        ceiling: u128,
    },
    /// Audit the manifest's declared implications within bounds.
    Audit {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "")]
        bounds: String,
        #[arg(long, default_value_t = propgrade_core::exhaustive::DEFAULT_CEILING)]
        ceiling: u128,
    },
    /// Run one predicate over every suite in a directory.
    Run {
        #[arg(long)]
        suites: PathBuf,
        /// Command line for the predicate process.
        #[arg(long)]
        predicate: String,
        /// Identifier for the predicate in results and fingerprints.
        #[arg(long)]
        id: String,
        #[arg(long = "timeout-ms", default_value_t = 5_000)]
        timeout_ms: u64,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Gate predicates on the FUNCTIONAL and all-false suites.
    Filter {
        #[arg(long)]
        suites: PathBuf,
        /// JSON file: [{"id": ..., "command": ...}, ...]
        #[arg(long)]
        predicates: PathBuf,
        #[arg(long = "timeout-ms", default_value_t = 5_000)]
        timeout_ms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fold one predicate's suite results into a fingerprint file.
    Fingerprint {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two result directories group by group.
    Compare {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long = "out-csv")]
        out_csv: Option<PathBuf>,
        #[arg(long = "out-json")]
        out_json: Option<PathBuf>,
    },
    /// Re-check suite labels from two engines against all checkers.
    Crossval {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Directory of certificates for empty/nonempty conflict checks.
        #[arg(long)]
        certs: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in fixture predicate speaking the wire protocol on stdin/stdout.
    Predicate {
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = false)]
        list: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Bounds(String),
    MissingInput(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Bounds(_) => 65,
            CliError::MissingInput(_) => 66,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg)
            | CliError::Bounds(msg)
            | CliError::MissingInput(msg)
            | CliError::Internal(msg) => f.write_str(msg),
        }
    }
}

impl From<ExhaustiveError> for CliError {
    fn from(err: ExhaustiveError) -> CliError {
        match err {
            ExhaustiveError::SpaceTooLarge { .. } | ExhaustiveError::BadBounds(_) => {
                CliError::Bounds(err.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::Internal(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Gen {
            problem,
            engine,
            buckets,
            knobs,
            bounds,
            out,
            cache,
            jobs,
            no_canon,
            ceiling,
        } => cmd_gen(
            problem, &engine, &buckets, &knobs, &bounds, &out, cache, jobs, no_canon, ceiling,
        ),
        Command::Prove {
            problem,
            bounds,
            out,
            no_canon,
            ceiling,
        } => cmd_prove(problem, &bounds, &out, no_canon, ceiling),
        Command::Positives {
            problem,
            bounds,
            suite_size,
            out,
            ceiling,
        } => cmd_positives(problem, &bounds, suite_size, &out, ceiling),
        Command::Audit {
            problem,
            bounds,
            ceiling,
        } => cmd_audit(problem, &bounds, ceiling),
        Command::Run {
            suites,
            predicate,
            id,
            timeout_ms,
            out,
        } => cmd_run(&suites, &predicate, &id, timeout_ms, &out),
        Command::Filter {
            suites,
            predicates,
            timeout_ms,
            out,
        } => cmd_filter(&suites, &predicates, timeout_ms, out.as_deref()),
        Command::Fingerprint { results, out } => cmd_fingerprint(&results, out.as_deref()),
        Command::Compare {
            problem,
            a,
            b,
            out_csv,
            out_json,
        } => cmd_compare(problem, &a, &b, out_csv.as_deref(), out_json.as_deref()),
        Command::Crossval { a, b, certs, out } => {
            cmd_crossval(&a, &b, certs.as_deref(), out.as_deref())
        }
        Command::Predicate { variant, list } => cmd_predicate(variant.as_deref(), list),
    }
}

// --- shared helpers ---------------------------------------------------------

fn load_decomp(args: &ProblemArgs) -> Result<Decomposition, CliError> {
    if let Some(path) = &args.manifest {
        let text = fs::read_to_string(path).map_err(|err| {
            CliError::MissingInput(format!("cannot read manifest {}: {err}", path.display()))
        })?;
        return Decomposition::from_manifest_json(&text)
            .map_err(|err| CliError::Usage(format!("invalid manifest: {err}")));
    }
    match &args.problem {
        Some(name) => Decomposition::builtin(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown problem {name:?}; built-ins: {}",
                Decomposition::builtin_names().join(", ")
            ))
        }),
        None => Err(CliError::Usage(
            "one of --problem or --manifest is required".to_string(),
        )),
    }
}

fn parse_selection(spec: &str) -> Result<BucketSelection, CliError> {
    match spec {
        "power" => Ok(BucketSelection::PowerSet),
        "pruned" => Ok(BucketSelection::PrunedPowerSet),
        other => match other.strip_prefix("focused:") {
            Some(name) if !name.is_empty() => {
                Ok(BucketSelection::Focused(SubpropertyId::new(name)))
            }
            _ => Err(CliError::Usage(format!(
                "--buckets must be power, pruned, or focused:<NAME>, got {spec:?}"
            ))),
        },
    }
}

/// Writes via a temp file and rename, so identical reruns overwrite atomically.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn suite_path(out: &Path, problem: ProblemId, engine: &str, bucket_id: &str) -> PathBuf {
    out.join(problem.as_str()).join(engine).join(format!("{bucket_id}.json"))
}

/// Loads every suite file in a directory; the label is the file stem.
fn load_suites(dir: &Path) -> Result<Vec<(String, Suite)>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::MissingInput(format!(
            "suite directory {} does not exist",
            dir.display()
        )));
    }
    let mut suites = Vec::new();
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    entries.sort();
    for path in entries {
        let stem = path.file_stem().unwrap_or_default().to_string_lossy().to_string();
        if stem == "gen_report" || stem == "cache" {
            continue;
        }
        let text = fs::read_to_string(&path)?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|err| CliError::Internal(format!("{}: {err}", path.display())))?;
        let suite = Suite::from_json(&value)
            .map_err(|err| CliError::Internal(format!("{}: {err}", path.display())))?;
        suites.push((stem, suite));
    }
    if suites.is_empty() {
        return Err(CliError::MissingInput(format!(
            "no suite files under {}",
            dir.display()
        )));
    }
    Ok(suites)
}

fn enum_options(no_canon: bool, ceiling: u128) -> EnumOptions {
    EnumOptions {
        canonicalize: !no_canon,
        ceiling,
    }
}

// --- gen ---------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    problem: ProblemArgs,
    engine: &str,
    buckets: &str,
    knobs: &GenKnobs,
    bounds_spec: &str,
    out: &Path,
    cache_path: Option<PathBuf>,
    jobs: usize,
    no_canon: bool,
    ceiling: u128,
) -> Result<u8, CliError> {
    let decomp = load_decomp(&problem)?;
    let selection = parse_selection(buckets)?;
    let targets = selection
        .buckets(&decomp)
        .map_err(|err| CliError::Usage(err.to_string()))?;
    let (suites, exhausted, skipped, warnings) = match engine {
        "random" => {
            let config = knobs.to_config();
            let cache = match &cache_path {
                Some(path) => InfeasibilityCache::open(path),
                None => InfeasibilityCache::ephemeral(),
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|err| CliError::Internal(err.to_string()))?;
            let results: Vec<_> = pool.install(|| {
                targets
                    .par_iter()
                    .map(|bucket| {
                        let mut warnings = Vec::new();
                        let outcome =
                            concretize_bucket(&decomp, bucket, &config, &cache, &mut warnings);
                        (bucket.id(), outcome, warnings)
                    })
                    .collect()
            });
            let mut suites = Vec::new();
            let mut exhausted = Vec::new();
            let mut skipped = Vec::new();
            let mut warnings = Vec::new();
            for (id, outcome, mut warns) in results {
                warnings.append(&mut warns);
                match outcome.map_err(|err| CliError::Internal(err.to_string()))? {
                    ConcretizeOutcome::Concretized { suite, .. } => suites.push(suite),
                    ConcretizeOutcome::Exhausted { cached: true, .. } => skipped.push(id),
                    ConcretizeOutcome::Exhausted { cached: false, .. } => exhausted.push(id),
                }
            }
            (suites, exhausted, skipped, warnings)
        }
        "exhaustive" => {
            let bounds = Bounds::parse(decomp.problem(), bounds_spec)?;
            let sweep = concretize_all(
                &decomp,
                &targets,
                &bounds,
                knobs.suite_size,
                &enum_options(no_canon, ceiling),
            )?;
            let empty = sweep.empty.iter().map(|c| c.bucket.clone()).collect();
            (sweep.suites, empty, Vec::new(), Vec::new())
        }
        other => {
            return Err(CliError::Usage(format!(
                "--engine must be random or exhaustive, got {other:?}"
            )))
        }
    };
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    let mut suites = suites;
    suites.sort_by_key(|s| s.bucket_id());
    for suite in &suites {
        let path = suite_path(out, decomp.problem(), engine, &suite.bucket_id());
        write_json(&path, &suite.to_json())?;
    }
    let mut concretized: Vec<String> = suites.iter().map(|s| s.bucket_id()).collect();
    concretized.sort();
    let mut exhausted = exhausted;
    exhausted.sort();
    let mut skipped = skipped;
    skipped.sort();
    let report = serde_json::json!({
        "engine": engine,
        "concretized": concretized,
        "exhausted": exhausted,
        "skipped_cached": skipped,
        "warnings": warnings,
    });
    let report_path = out
        .join(decomp.problem().as_str())
        .join(engine)
        .join("gen_report.json");
    write_json(&report_path, &report)?;
    println!(
        "{}: {} suites, {} exhausted/empty, {} skipped via cache",
        engine,
        suites.len(),
        exhausted.len(),
        skipped.len()
    );
    Ok(if suites.is_empty() { 2 } else { 0 })
}

// --- prove ---------------------------------------------------------------------

fn cmd_prove(
    problem: ProblemArgs,
    bounds_spec: &str,
    out: &Path,
    no_canon: bool,
    ceiling: u128,
) -> Result<u8, CliError> {
    let decomp = load_decomp(&problem)?;
    let bounds = Bounds::parse(decomp.problem(), bounds_spec)?;
    let certs = prove_all(&decomp, &bounds, &enum_options(no_canon, ceiling))?;
    let dir = out.join(decomp.problem().as_str()).join("certificates");
    let mut concretizable = 0;
    for cert in &certs {
        if cert.verdict == propgrade_core::exhaustive::CertVerdict::Nonempty {
            concretizable += 1;
        }
        let value = serde_json::to_value(cert).expect("certificate encoding");
        write_json(&dir.join(format!("{}.json", cert.bucket)), &value)?;
    }
    println!(
        "{} buckets certified: {} concretizable, {} empty within bounds",
        certs.len(),
        concretizable,
        certs.len() - concretizable
    );
    Ok(0)
}

// --- positives -------------------------------------------------------------------

fn cmd_positives(
    problem: ProblemArgs,
    bounds_spec: &str,
    suite_size: usize,
    out: &Path,
    ceiling: u128,
) -> Result<u8, CliError> {
    let decomp = load_decomp(&problem)?;
    let bounds = Bounds::parse(decomp.problem(), bounds_spec)?;
    let opts = enum_options(false, ceiling);
    let all_true = propgrade_core::decomposition::Bucket::all_true(decomp.len());
    let mut wrote = 0;
    for (arity, label, cap) in [
        (Arity::ExactlyOne, "functional", suite_size),
        (Arity::MoreThanOne, "relational", suite_size.max(2) / 2 * 2),
    ] {
        let mut tests =
            exhaustive::functional_inputs(decomp.problem(), &bounds, arity, &opts)?;
        tests.truncate(cap);
        if tests.is_empty() {
            eprintln!("warning: no {label} pairs within bounds");
            continue;
        }
        let suite = Suite::new(&decomp, &all_true, Engine::Exhaustive, None, tests);
        let path = out
            .join(decomp.problem().as_str())
            .join(format!("{label}.json"));
        write_json(&path, &suite.to_json())?;
        wrote += 1;
    }
    Ok(if wrote == 0 { 2 } else { 0 })
}

// --- audit ---------------------------------------------------------------------

fn cmd_audit(problem: ProblemArgs, bounds_spec: &str, ceiling: u128) -> Result<u8, CliError> {
    let decomp = load_decomp(&problem)?;
    let bounds = Bounds::parse(decomp.problem(), bounds_spec)?;
    let opts = enum_options(false, ceiling);
    let mut refuted = 0;
    for imp in decomp.implications() {
        let names: Vec<&str> = imp.antecedents.iter().map(|a| a.as_str()).collect();
        match check_implication(&decomp, imp, &bounds, &opts)? {
            ImplicationOutcome::HoldsWithinBounds { pairs_enumerated } => {
                println!(
                    "ok: {{{}}} => {} (over {} pairs)",
                    names.join(", "),
                    imp.consequent,
                    pairs_enumerated
                );
            }
            ImplicationOutcome::Counterexample(pair) => {
                refuted += 1;
                println!(
                    "REFUTED: {{{}}} => {} by {}",
                    names.join(", "),
                    imp.consequent,
                    pair.to_line()
                );
            }
        }
    }
    Ok(if refuted == 0 { 0 } else { 2 })
}

// --- run / filter / fingerprint ----------------------------------------------------

fn parse_predicate(id: &str, command: &str, timeout_ms: u64) -> Result<PredicateUnderTest, CliError> {
    let argv = shlex::split(command)
        .filter(|v| !v.is_empty())
        .ok_or_else(|| CliError::Usage(format!("cannot parse predicate command {command:?}")))?;
    let mut pred = PredicateUnderTest::new(id, argv);
    pred.timeout = Duration::from_millis(timeout_ms);
    Ok(pred)
}

fn cmd_run(
    suites_dir: &Path,
    predicate: &str,
    id: &str,
    timeout_ms: u64,
    out: &Path,
) -> Result<u8, CliError> {
    let suites = load_suites(suites_dir)?;
    let pred = parse_predicate(id, predicate, timeout_ms)?;
    let mut misclassified = 0;
    for (label, suite) in &suites {
        let result = harness::run_suite(&pred, suite)
            .map_err(|err| CliError::Internal(err.to_string()))?;
        if result.misclassified {
            misclassified += 1;
        }
        let value = serde_json::to_value(&result).expect("result encoding");
        write_json(&out.join(id).join(format!("{label}.json")), &value)?;
    }
    println!(
        "{id}: {} suites run, {} misclassified",
        suites.len(),
        misclassified
    );
    Ok(0)
}

fn cmd_filter(
    suites_dir: &Path,
    predicates_path: &Path,
    timeout_ms: u64,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let suites = load_suites(suites_dir)?;
    let functional = suites
        .iter()
        .find(|(label, _)| label == "functional")
        .map(|(_, s)| s.clone())
        .ok_or_else(|| {
            CliError::MissingInput("no functional.json suite in the suites directory".to_string())
        })?;
    let all_false = suites
        .iter()
        .find(|(_, s)| s.bucket.iter().all(|(_, v)| !v))
        .map(|(_, s)| s.clone())
        .ok_or_else(|| {
            CliError::MissingInput("no all-false bucket suite in the suites directory".to_string())
        })?;
    let text = fs::read_to_string(predicates_path).map_err(|err| {
        CliError::MissingInput(format!(
            "cannot read predicates file {}: {err}",
            predicates_path.display()
        ))
    })?;
    let raw: Vec<serde_json::Value> = serde_json::from_str(&text)
        .map_err(|err| CliError::Usage(format!("invalid predicates file: {err}")))?;
    let mut preds = Vec::new();
    for entry in raw {
        let id = entry
            .get("id")
            .and_then(|v| v.as_str())
            .ok_or_else(|| CliError::Usage("predicate entry missing \"id\"".to_string()))?;
        let command = entry
            .get("command")
            .and_then(|v| v.as_str())
            .ok_or_else(|| CliError::Usage("predicate entry missing \"command\"".to_string()))?;
        preds.push(parse_predicate(id, command, timeout_ms)?);
    }
    let report: FilterReport = harness::filter_predicates(&preds, &functional, &all_false)
        .map_err(|err| CliError::Internal(err.to_string()))?;
    let value = serde_json::to_value(&report).expect("report encoding");
    match out {
        Some(path) => write_json(path, &value)?,
        None => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
    }
    Ok(0)
}

fn cmd_fingerprint(results_dir: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    if !results_dir.is_dir() {
        return Err(CliError::MissingInput(format!(
            "results directory {} does not exist",
            results_dir.display()
        )));
    }
    let mut results: Vec<SuiteResult> = Vec::new();
    let mut paths: Vec<PathBuf> = fs::read_dir(results_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = fs::read_to_string(&path)?;
        results.push(
            serde_json::from_str(&text)
                .map_err(|err| CliError::Internal(format!("{}: {err}", path.display())))?,
        );
    }
    let predicate = results
        .first()
        .map(|r| r.predicate.clone())
        .ok_or_else(|| CliError::MissingInput("no result files found".to_string()))?;
    let fp = fingerprint_from_results(&predicate, &results);
    let value = serde_json::to_value(&fp).expect("fingerprint encoding");
    match out {
        Some(path) => write_json(path, &value)?,
        None => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
    }
    Ok(0)
}

// --- compare -----------------------------------------------------------------------

fn load_result_tree(dir: &Path) -> Result<Vec<SuiteResult>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::MissingInput(format!(
            "results directory {} does not exist",
            dir.display()
        )));
    }
    let mut results = Vec::new();
    let mut pred_dirs: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    pred_dirs.sort();
    for pred_dir in pred_dirs {
        let mut files: Vec<PathBuf> = fs::read_dir(&pred_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        files.sort();
        for path in files {
            let text = fs::read_to_string(&path)?;
            results.push(
                serde_json::from_str(&text)
                    .map_err(|err| CliError::Internal(format!("{}: {err}", path.display())))?,
            );
        }
    }
    Ok(results)
}

fn cmd_compare(
    problem: ProblemArgs,
    a: &Path,
    b: &Path,
    out_csv: Option<&Path>,
    out_json: Option<&Path>,
) -> Result<u8, CliError> {
    let decomp = load_decomp(&problem)?;
    let grouping = group_buckets(&decomp);
    let results_a = load_result_tree(a)?;
    let results_b = load_result_tree(b)?;
    let rows = report::compare(&results_a, &results_b, &grouping)
        .map_err(|err| CliError::Internal(err.to_string()))?;
    let name_a = a.file_name().unwrap_or_default().to_string_lossy().to_string();
    let name_b = b.file_name().unwrap_or_default().to_string_lossy().to_string();
    let width = rows.iter().map(|r| r.group.len()).max().unwrap_or(5).max(5);
    println!(
        "{:width$}  {:>8}  {:>8}  {:>9}",
        "group", name_a, name_b, "+/-"
    );
    for row in &rows {
        println!(
            "{:width$}  {:>8}  {:>8}  {:>4};{}",
            row.group, row.count_a, row.count_b, row.diff_a_minus_b, row.diff_b_minus_a
        );
    }
    for tie in &grouping.ties {
        println!(
            "note: bucket {} owned by {} (also focused for {})",
            tie.bucket,
            tie.owner,
            tie.also_focused_for.join(", ")
        );
    }
    if let Some(path) = out_csv {
        let mut csv = format!("group,source,count,diff_vs_{name_b}\n");
        for row in &rows {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                row.group, name_a, row.count_a, row.diff_a_minus_b
            ));
            csv.push_str(&format!(
                "{},{},{},{}\n",
                row.group, name_b, row.count_b, row.diff_b_minus_a
            ));
        }
        write_atomic(path, csv.as_bytes())?;
    }
    if let Some(path) = out_json {
        let value = serde_json::json!({
            "source_a": name_a,
            "source_b": name_b,
            "rows": serde_json::to_value(&rows).expect("rows"),
            "ties": serde_json::to_value(&grouping.ties).expect("ties"),
        });
        write_json(path, &value)?;
    }
    Ok(0)
}

// --- crossval -----------------------------------------------------------------------

fn load_certificates(dir: &Path) -> Result<Vec<Certificate>, CliError> {
    let mut certs = Vec::new();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|err| {
            CliError::MissingInput(format!("cannot read certificates {}: {err}", dir.display()))
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = fs::read_to_string(&path)?;
        certs.push(
            serde_json::from_str(&text)
                .map_err(|err| CliError::Internal(format!("{}: {err}", path.display())))?,
        );
    }
    Ok(certs)
}

fn read_exhausted_report(dir: &Path) -> Vec<String> {
    let path = dir.join("gen_report.json");
    fs::read_to_string(path)
        .ok()
        .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
        .and_then(|v| v.get("exhausted").cloned())
        .and_then(|v| serde_json::from_value(v).ok())
        .unwrap_or_default()
}

fn cmd_crossval(
    a: &Path,
    b: &Path,
    certs_dir: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let mut labeled: Vec<(String, Suite)> = Vec::new();
    for dir in [a, b] {
        for (label, suite) in load_suites(dir)? {
            labeled.push((format!("{}/{}", dir.display(), label), suite));
        }
    }
    // Rebuild the decomposition from the suites' bucket keys, which are in
    // declaration order.
    let (_, first) = &labeled[0];
    let names: Vec<&str> = first.bucket.iter().map(|(n, _)| n.as_str()).collect();
    let decomp = Decomposition::from_names(first.problem, &names, &[])
        .map_err(|err| CliError::Internal(err.to_string()))?;
    let certs = match certs_dir {
        Some(dir) => load_certificates(dir)?,
        None => Vec::new(),
    };
    let mut exhausted = read_exhausted_report(a);
    exhausted.extend(read_exhausted_report(b));
    let validation = cross_validate(&decomp, &labeled, &certs, &exhausted);
    let type_a = serde_json::to_value(&validation.label_discrepancies).expect("report encoding");
    if let Some(path) = out {
        write_json(path, &type_a)?;
    }
    println!(
        "{} suites checked: {} label discrepancies, {} empty-bucket conflicts, {} warnings",
        labeled.len(),
        validation.label_discrepancies.len(),
        validation.empty_conflicts.len(),
        validation.warnings.len()
    );
    for conflict in &validation.empty_conflicts {
        println!(
            "conflict: suite {} concretizes bucket {} which is certified empty",
            conflict.suite, conflict.bucket
        );
    }
    for warning in &validation.warnings {
        println!("warning: {warning}");
    }
    if validation.label_discrepancies.is_empty() && validation.empty_conflicts.is_empty() {
        Ok(0)
    } else {
        Ok(2)
    }
}

// --- predicate -----------------------------------------------------------------------

fn cmd_predicate(variant: Option<&str>, list: bool) -> Result<u8, CliError> {
    if list {
        for (name, problem, correct) in fixtures::CATALOG {
            println!(
                "{name} ({problem}, {})",
                if *correct { "reference" } else { "buggy" }
            );
        }
        return Ok(0);
    }
    let variant = variant
        .ok_or_else(|| CliError::Usage("--variant <NAME> is required (or --list)".to_string()))?;
    let problem = fixtures::problem_of(variant).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown fixture {variant:?}; run `propgrade predicate --list`"
        ))
    })?;
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line)
            .map_err(|err| CliError::Internal(format!("bad test line: {err}")))?;
        let pair = TestCase::from_pair_value(problem, &value)
            .map_err(|err| CliError::Internal(format!("bad test line: {err}")))?;
        let verdict = fixtures::evaluate(variant, &pair)
            .map_err(|err| CliError::Internal(err.to_string()))?;
        writeln!(stdout, "{verdict}")?;
        stdout.flush()?;
    }
    Ok(0)
}
