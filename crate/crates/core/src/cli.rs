//! Command-line entry points wiring corpus loading, optimization and
//! analysis into reproducible batch workflows.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 empty pool or
//! invalid (zero-fitness) result.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, TimeZone, Utc};
use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, BenchmarkConfig, RunRecord};
use crate::corpus::{
    self, ArtefactType, Corpus, GoldRecord, ScenarioSpec, TimeWindow,
};
use crate::error::Error;
use crate::features::{extract_features, FEATURE_COUNT};
use crate::optim::{self, Algorithm, BudgetLimit, SearchBudget};
use crate::similarity::{Mode, TargetProfile};

/// Errors carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 1: bad flags or flag combinations.
    Usage(String),
    /// Exit code 2: unreadable or malformed data.
    Data(String),
    /// Exit code 3: empty pool or invalid (zero-fitness) result.
    EmptyOrInvalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::EmptyOrInvalid(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::EmptyOrInvalid(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::InvalidArgument(msg) => CliError::Usage(msg),
            other => CliError::Data(other.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "devsum",
    about = "Extractive, time-windowed summaries of software development artefacts",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a corpus file and print per-type counts.
    Validate(ValidateArgs),
    /// Build one summary for a gold-standard window.
    Summarize(SummarizeArgs),
    /// Run the algorithm comparison over all gold targets.
    Benchmark(BenchmarkArgs),
    /// Aggregate run records.
    Analyze(AnalyzeArgs),
    /// Feature-vector utilities.
    Features(FeaturesArgs),
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    pub corpus: PathBuf,
}

#[derive(Args, Debug)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Gold-summary file providing the optimization target.
    #[arg(long)]
    pub gold: PathBuf,
    /// Window as YYYY-MM-DD..YYYY-MM-DD (end exclusive).
    #[arg(long)]
    pub window: String,
    /// Project to summarize; needed when several gold records match the window.
    #[arg(long)]
    pub project: Option<String>,
    /// all | subset | a single type code | A+B+C
    #[arg(long, default_value = "all")]
    pub scenario: String,
    /// Explicit comma-separated type list; overrides --scenario.
    #[arg(long)]
    pub types: Option<String>,
    #[arg(long, default_value = "greedy")]
    pub algo: String,
    #[arg(long, default_value = "word")]
    pub mode: String,
    #[arg(long, default_value_t = optim::DEFAULT_TARGET_LEN)]
    pub max_len: usize,
    /// Wall-clock budget for randomized algorithms in seconds.
    #[arg(long, conflicts_with = "budget_evals")]
    pub budget_secs: Option<f64>,
    /// Evaluation budget; makes randomized runs bit-reproducible.
    #[arg(long)]
    pub budget_evals: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Path for the run record (one JSON line).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    /// `all` or a comma-separated subset of algorithm names.
    #[arg(long, default_value = "all")]
    pub algo: String,
    /// `word`, `feature` or `both`.
    #[arg(long, default_value = "word")]
    pub mode: String,
    /// Comma-separated scenario labels; `each` expands to the 15 single types.
    #[arg(long, default_value = "all")]
    pub scenario: String,
    #[arg(long, default_value_t = optim::DEFAULT_TARGET_LEN)]
    pub max_len: usize,
    #[arg(long, conflicts_with = "budget_evals")]
    pub budget_secs: Option<f64>,
    #[arg(long)]
    pub budget_evals: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Output directory for runs.jsonl and distributions.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    pub command: AnalyzeCommand,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// Artefact-type contribution table and the relevant-type subset.
    Contributions {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "contributions.csv")]
        out: PathBuf,
    },
    /// Pairwise two-sided Mann-Whitney U over per-algorithm scores.
    Compare {
        #[arg(long)]
        runs: PathBuf,
        /// Optional pair of algorithm names to report on stdout.
        #[arg(value_name = "ALGO", num_args = 0..=2)]
        algos: Vec<String>,
        #[arg(long, default_value = "mwu.csv")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct FeaturesArgs {
    #[command(subcommand)]
    pub command: FeaturesCommand,
}

#[derive(Subcommand, Debug)]
pub enum FeaturesCommand {
    /// Emit per-sentence feature vectors as CSV with header F1..F26.
    Dump {
        #[arg(long)]
        corpus: PathBuf,
        /// Optional window as YYYY-MM-DD..YYYY-MM-DD; all artefacts otherwise.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value = "all")]
        scenario: String,
        #[arg(long)]
        types: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `YYYY-MM-DD..YYYY-MM-DD` into a half-open window at UTC midnights.
pub fn parse_window(s: &str) -> Result<TimeWindow, CliError> {
    let (start, end) = s
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("window `{s}` is not YYYY-MM-DD..YYYY-MM-DD")))?;
    let parse_day = |d: &str| {
        NaiveDate::parse_from_str(d.trim(), "%Y-%m-%d")
            .map_err(|e| CliError::Usage(format!("bad date `{d}`: {e}")))
    };
    let start = parse_day(start)?;
    let end = parse_day(end)?;
    TimeWindow::new(
        Utc.from_utc_datetime(&start.and_hms_opt(0, 0, 0).unwrap()),
        Utc.from_utc_datetime(&end.and_hms_opt(0, 0, 0).unwrap()),
    )
    .map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_scenario(scenario: &str, types: Option<&str>) -> Result<ScenarioSpec, CliError> {
    if let Some(list) = types {
        let mut set = BTreeSet::new();
        for code in list.split([',', '+']) {
            let t = ArtefactType::parse_code(code.trim()).ok_or_else(|| {
                CliError::Usage(format!("unknown artefact type code `{code}`"))
            })?;
            set.insert(t);
        }
        if set.is_empty() {
            return Err(CliError::Usage("--types lists no codes".into()));
        }
        return Ok(if set.len() == 1 {
            ScenarioSpec::SingleType(set.into_iter().next().unwrap())
        } else {
            ScenarioSpec::TypeSubset(set)
        });
    }
    ScenarioSpec::parse(scenario).map_err(CliError::from)
}

fn budget_limit(secs: Option<f64>, evals: Option<u64>) -> Result<BudgetLimit, CliError> {
    match (secs, evals) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "pass exactly one of --budget-secs and --budget-evals".into(),
        )),
        (None, Some(e)) => Ok(BudgetLimit::Evals(e)),
        (Some(s), None) => {
            if s <= 0.0 {
                Err(CliError::Usage("--budget-secs must be positive".into()))
            } else {
                Ok(BudgetLimit::Seconds(s))
            }
        }
        (None, None) => Ok(BudgetLimit::Seconds(10.0)),
    }
}

fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    corpus::load_corpus(path).map_err(|e| CliError::Data(e.to_string()))
}

fn load_gold(path: &Path) -> Result<Vec<GoldRecord>, CliError> {
    corpus::load_gold(path).map_err(|e| CliError::Data(e.to_string()))
}

/// Execute a parsed command line.
pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Summarize(args) => cmd_summarize(&args),
        Command::Benchmark(args) => cmd_benchmark(&args),
        Command::Analyze(args) => match args.command {
            AnalyzeCommand::Contributions { runs, corpus, out } => {
                cmd_analyze_contributions(&runs, &corpus, &out)
            }
            AnalyzeCommand::Compare { runs, algos, out } => cmd_analyze_compare(&runs, &algos, &out),
        },
        Command::Features(args) => match args.command {
            FeaturesCommand::Dump {
                corpus,
                window,
                scenario,
                types,
                out,
            } => cmd_features_dump(&corpus, window.as_deref(), &scenario, types.as_deref(), out.as_deref()),
        },
    }
}

/// Parse every record, print per-type counts, fail on any malformed line.
pub fn cmd_validate(args: &ValidateArgs) -> CliResult {
    let content =
        fs::read_to_string(&args.corpus).map_err(|e| CliError::Data(e.to_string()))?;
    let display = args.corpus.display().to_string();
    let mut artefacts = Vec::new();
    let mut errors: Vec<String> = Vec::new();
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        match corpus::parse_record(&display, lineno, line) {
            Ok(artefact) => {
                if let Some(first) = seen.insert(artefact.id.clone(), lineno) {
                    errors.push(format!(
                        "{display}:{lineno}: duplicate artefact id `{}` (first seen on line {first})",
                        artefact.id
                    ));
                } else {
                    artefacts.push(artefact);
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }

    let corpus = Corpus::from_artefacts(artefacts);
    let histogram = corpus.type_histogram();
    println!("{:<8}{:>12}{:>12}", "Type", "Artefacts", "Sentences");
    let mut total_a = 0usize;
    let mut total_s = 0usize;
    for (t, a, s) in &histogram {
        println!("{:<8}{:>12}{:>12}", t.code(), a, s);
        total_a += a;
        total_s += s;
    }
    println!("{:<8}{:>12}{:>12}", "Total", total_a, total_s);

    if errors.is_empty() {
        Ok(())
    } else {
        for e in &errors {
            eprintln!("{e}");
        }
        Err(CliError::Data(format!("{} malformed record(s)", errors.len())))
    }
}

/// Run one algorithm against one gold target and write the run record. The
/// selected sentences are printed to stdout in sentence-id order.
pub fn cmd_summarize(args: &SummarizeArgs) -> CliResult {
    let corpus = load_corpus(&args.corpus)?;
    let gold = load_gold(&args.gold)?;
    let window = parse_window(&args.window)?;
    let algorithm = Algorithm::parse(&args.algo).map_err(|e| CliError::Usage(e.to_string()))?;
    let mode = Mode::parse(&args.mode).map_err(|e| CliError::Usage(e.to_string()))?;
    let scenario = parse_scenario(&args.scenario, args.types.as_deref())?;
    let limit = budget_limit(args.budget_secs, args.budget_evals)?;
    if args.max_len == 0 {
        return Err(CliError::Usage("--max-len must be at least 1".into()));
    }

    let matching: Vec<&GoldRecord> = gold
        .iter()
        .filter(|g| {
            g.window_start == window.start
                && g.window_end == window.end
                && args.project.as_ref().is_none_or(|p| *p == g.project)
        })
        .collect();
    let record = match matching.as_slice() {
        [] => {
            return Err(CliError::Data(format!(
                "no gold record matches window {}",
                args.window
            )))
        }
        [one] => *one,
        many => {
            let projects: Vec<&str> = many.iter().map(|g| g.project.as_str()).collect();
            return Err(CliError::Usage(format!(
                "window matches several projects ({}); pass --project",
                projects.join(", ")
            )));
        }
    };

    let pool = corpus
        .restrict_to_project(&record.project)
        .window_pool(window, &scenario);
    if pool.is_empty() {
        return Err(CliError::EmptyOrInvalid(format!(
            "empty sentence pool for {} in {}",
            record.project, args.window
        )));
    }

    let target = TargetProfile::from_text(&record.summary, mode);
    let budget = SearchBudget {
        limit,
        seed: args.seed,
    };
    let summary = optim::run(algorithm, &pool.sentences, &target, args.max_len, &budget)
        .map_err(CliError::from)?;

    let deterministic = matches!(limit, BudgetLimit::Evals(_));
    let run_record = RunRecord::from_summary(
        &summary,
        mode,
        &scenario,
        window,
        &record.project,
        args.seed,
        deterministic,
    );
    if let Some(out) = &args.out {
        let line = serde_json::to_string(&run_record).expect("record serializes");
        fs::write(out, format!("{line}\n")).map_err(|e| CliError::Data(e.to_string()))?;
    }

    for sid in &summary.sids {
        let sentence = corpus
            .resolve(sid)
            .expect("summary sentences come from this corpus");
        println!("{}", sentence.raw);
    }
    eprintln!(
        "algorithm={} mode={} scenario={} score={:.6} valid={} evaluations={}",
        algorithm,
        mode.label(),
        scenario.label(),
        summary.score.score,
        summary.score.valid,
        summary.evaluations
    );

    if summary.score.valid {
        Ok(())
    } else {
        Err(CliError::EmptyOrInvalid(
            "result has zero fitness (invalid summary)".into(),
        ))
    }
}

fn parse_algorithms(spec: &str) -> Result<Vec<Algorithm>, CliError> {
    if spec == "all" {
        return Ok(Algorithm::ALL.to_vec());
    }
    spec.split(',')
        .map(|name| Algorithm::parse(name.trim()).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn parse_modes(spec: &str) -> Result<Vec<Mode>, CliError> {
    match spec {
        "both" => Ok(vec![Mode::Word, Mode::Feature]),
        other => other
            .split(',')
            .map(|m| Mode::parse(m.trim()).map_err(|e| CliError::Usage(e.to_string())))
            .collect(),
    }
}

fn parse_scenarios(spec: &str) -> Result<Vec<ScenarioSpec>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part == "each" {
            out.extend(ArtefactType::ALL.into_iter().map(ScenarioSpec::SingleType));
        } else {
            out.push(ScenarioSpec::parse(part).map_err(CliError::from)?);
        }
    }
    Ok(out)
}

/// Cartesian benchmark; writes runs.jsonl and distributions.csv.
pub fn cmd_benchmark(args: &BenchmarkArgs) -> CliResult {
    let corpus = load_corpus(&args.corpus)?;
    let gold = load_gold(&args.gold)?;
    let cfg = BenchmarkConfig {
        algorithms: parse_algorithms(&args.algo)?,
        modes: parse_modes(&args.mode)?,
        scenarios: parse_scenarios(&args.scenario)?,
        max_len: args.max_len,
        budget: budget_limit(args.budget_secs, args.budget_evals)?,
        master_seed: args.seed,
        workers: args.workers.max(1),
    };
    let records = analysis::benchmark(&corpus, &gold, &cfg).map_err(CliError::from)?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::Data(e.to_string()))?;
    let runs_path = args.out.join("runs.jsonl");
    let dist_path = args.out.join("distributions.csv");
    analysis::write_runs_jsonl(&records, &runs_path).map_err(CliError::from)?;
    analysis::write_distributions_csv(&records, &dist_path).map_err(CliError::from)?;
    eprintln!(
        "wrote {} runs to {} and {}",
        records.len(),
        runs_path.display(),
        dist_path.display()
    );
    Ok(())
}

pub fn cmd_analyze_contributions(runs: &Path, corpus_path: &Path, out: &Path) -> CliResult {
    let records = analysis::read_runs_jsonl(runs).map_err(CliError::from)?;
    let corpus = load_corpus(corpus_path)?;
    let table = analysis::contribution(&records, &corpus).map_err(CliError::from)?;
    analysis::write_contributions_csv(&table, out).map_err(CliError::from)?;
    let relevant = analysis::select_relevant(&table);
    let codes: Vec<&str> = relevant.iter().map(|t| t.code()).collect();
    println!("relevant types: {}", codes.join(", "));
    Ok(())
}

pub fn cmd_analyze_compare(runs: &Path, algos: &[String], out: &Path) -> CliResult {
    let records = analysis::read_runs_jsonl(runs).map_err(CliError::from)?;
    analysis::write_mwu_csv(&records, out).map_err(CliError::from)?;
    if let [a, b] = algos {
        let collect = |name: &str| -> Vec<f64> {
            records
                .iter()
                .filter(|r| r.valid && r.algorithm == name)
                .map(|r| r.score)
                .collect()
        };
        let sa = collect(a);
        let sb = collect(b);
        if sa.is_empty() || sb.is_empty() {
            return Err(CliError::Data(format!(
                "no valid runs for {a} or {b} in {}",
                runs.display()
            )));
        }
        let (u, p) = analysis::mann_whitney_u(&sa, &sb).map_err(CliError::from)?;
        println!("{a} vs {b}: U={u} p={p}");
    } else if !algos.is_empty() {
        return Err(CliError::Usage(
            "pass exactly two algorithm names to compare".into(),
        ));
    }
    Ok(())
}

/// Emit per-sentence feature vectors as CSV: artefact id, sentence index,
/// then F1..F26.
pub fn cmd_features_dump(
    corpus_path: &Path,
    window: Option<&str>,
    scenario: &str,
    types: Option<&str>,
    out: Option<&Path>,
) -> CliResult {
    let corpus = load_corpus(corpus_path)?;
    let scenario = parse_scenario(scenario, types)?;
    let sentences: Vec<crate::corpus::Sentence> = match window {
        Some(w) => {
            let window = parse_window(w)?;
            corpus.window_pool(window, &scenario).sentences
        }
        None => corpus
            .sentences()
            .filter(|s| {
                corpus
                    .get(s.sid.artefact())
                    .is_some_and(|a| scenario.admits(a.atype))
            })
            .cloned()
            .collect(),
    };

    let mut writer: csv::Writer<Box<dyn std::io::Write>> = match out {
        Some(path) => csv::Writer::from_writer(Box::new(
            fs::File::create(path).map_err(|e| CliError::Data(e.to_string()))?,
        )),
        None => csv::Writer::from_writer(Box::new(std::io::stdout())),
    };
    let mut header = vec!["artefact_id".to_string(), "sentence_index".to_string()];
    header.extend((1..=FEATURE_COUNT).map(|i| format!("F{i}")));
    writer
        .write_record(&header)
        .map_err(|e| CliError::Data(e.to_string()))?;
    for s in &sentences {
        let mut row = vec![s.sid.artefact().to_string(), s.sid.index().to_string()];
        let fv = extract_features(&s.raw);
        row.extend(fv.values.iter().map(|v| v.to_string()));
        writer
            .write_record(&row)
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(())
}
