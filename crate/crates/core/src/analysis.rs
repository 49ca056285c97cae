//! Benchmark machinery: artefact-type contributions, median-cut-off
//! relevance selection, Mann-Whitney U comparison and the run harness.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::corpus::{
    ArtefactType, Corpus, GoldRecord, ScenarioSpec, SentenceId, SentencePool, TimeWindow,
};
use crate::error::{Error, Result};
use crate::optim::{self, Algorithm, BudgetLimit, SearchBudget, Summary};
use crate::similarity::{Mode, TargetProfile};

/// One (algorithm, mode, scenario, window, project) execution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub mode: String,
    pub scenario: String,
    pub window_start: DateTime<Utc>,
    pub window_end: DateTime<Utc>,
    pub project: String,
    pub sids: Vec<SentenceId>,
    pub score: f64,
    pub valid: bool,
    pub evaluations: u64,
    /// Wall-clock milliseconds. Zero under evaluation budgets, where run
    /// records must be byte-identical across executions.
    pub elapsed_ms: u64,
    pub seed: u64,
}

impl RunRecord {
    pub fn from_summary(
        summary: &Summary,
        mode: Mode,
        scenario: &ScenarioSpec,
        window: TimeWindow,
        project: &str,
        seed: u64,
        deterministic: bool,
    ) -> RunRecord {
        RunRecord {
            algorithm: summary.algorithm.name().to_string(),
            mode: mode.label().to_string(),
            scenario: scenario.label(),
            window_start: window.start,
            window_end: window.end,
            project: project.to_string(),
            sids: summary.sids.clone(),
            score: summary.score.score,
            valid: summary.score.valid,
            evaluations: summary.evaluations,
            elapsed_ms: if deterministic {
                0
            } else {
                summary.elapsed.as_millis() as u64
            },
            seed,
        }
    }
}

/// Selected-sentence counts and shares per artefact type.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionTable {
    /// One row per type in reporting order: (type, count, percent).
    pub rows: Vec<(ArtefactType, u64, f64)>,
}

impl ContributionTable {
    pub fn percent(&self, t: ArtefactType) -> f64 {
        self.rows
            .iter()
            .find(|(rt, _, _)| *rt == t)
            .map(|&(_, _, p)| p)
            .unwrap_or(0.0)
    }
}

/// Tally which artefact types the selected sentences came from. Invalid
/// runs are excluded; each sentence counts once per run. Sentence ids that
/// do not resolve in the corpus are an error.
pub fn contribution(runs: &[RunRecord], corpus: &Corpus) -> Result<ContributionTable> {
    let mut counts: HashMap<ArtefactType, u64> = HashMap::new();
    let mut total = 0u64;
    for run in runs {
        if !run.valid {
            continue;
        }
        // a sid counts once per run even if a record repeats it
        let unique: std::collections::BTreeSet<&SentenceId> = run.sids.iter().collect();
        for sid in unique {
            let artefact = corpus.get(sid.artefact()).ok_or(Error::UnresolvableSid {
                artefact: sid.artefact().to_string(),
                index: sid.index(),
            })?;
            if corpus.resolve(sid).is_none() {
                return Err(Error::UnresolvableSid {
                    artefact: sid.artefact().to_string(),
                    index: sid.index(),
                });
            }
            *counts.entry(artefact.atype).or_insert(0) += 1;
            total += 1;
        }
    }
    let rows = ArtefactType::ALL
        .iter()
        .map(|&t| {
            let count = counts.get(&t).copied().unwrap_or(0);
            let percent = if total > 0 {
                100.0 * count as f64 / total as f64
            } else {
                0.0
            };
            (t, count, percent)
        })
        .collect();
    Ok(ContributionTable { rows })
}

/// Types whose contribution strictly exceeds the median of the fifteen
/// values, in descending contribution order. When fewer than eight types
/// clear the bar and the type at the median holds it alone with the
/// eighth-largest distinct value, it is included as well.
pub fn select_relevant(table: &ContributionTable) -> Vec<ArtefactType> {
    let mut by_value: Vec<(ArtefactType, f64)> =
        table.rows.iter().map(|&(t, _, p)| (t, p)).collect();
    // descending value, reporting order breaks ties
    by_value.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());

    let mut values: Vec<f64> = by_value.iter().map(|&(_, v)| v).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let median = values[7];

    let mut relevant: Vec<ArtefactType> = by_value
        .iter()
        .filter(|&&(_, v)| v > median)
        .map(|&(t, _)| t)
        .collect();

    if relevant.len() < 8 {
        let mut distinct = values.clone();
        distinct.dedup();
        let at_median: Vec<ArtefactType> = by_value
            .iter()
            .filter(|&&(_, v)| v == median)
            .map(|&(t, _)| t)
            .collect();
        if at_median.len() == 1 && distinct.len() >= 8 && distinct[7] == median {
            relevant.push(at_median[0]);
        }
    }
    relevant
}

/// Two-sided Mann-Whitney U test with midrank tie handling. Returns the U
/// statistic of the first sample and the two-sided p-value: exact via the
/// rank-sum distribution when the smaller sample has fewer than eight
/// observations (and the pooled size stays enumerable), otherwise a normal
/// approximation with tie-corrected variance and continuity correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let na = a.len();
    let nb = b.len();
    let n = na + nb;

    // midranks of the pooled sample, doubled so they stay integral
    let mut pooled: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0))
        .chain(b.iter().map(|&v| (v, 1)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("scores are not NaN"));
    let mut doubled_ranks = vec![0u64; n];
    let mut tie_correction = 0.0f64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let doubled = (i + j + 1) as u64; // 2 * average rank of the tie group
        for r in doubled_ranks.iter_mut().take(j).skip(i) {
            *r = doubled;
        }
        let t = (j - i) as f64;
        tie_correction += t * t * t - t;
        i = j;
    }

    let doubled_r_a: u64 = pooled
        .iter()
        .zip(&doubled_ranks)
        .filter(|((_, group), _)| *group == 0)
        .map(|(_, &r)| r)
        .sum();
    let u_a = (doubled_r_a as f64 - (na * (na + 1)) as f64) / 2.0;
    let mu = (na * nb) as f64 / 2.0;

    // exact path: distribution of the smaller sample's rank sum
    const EXACT_POOL_LIMIT: usize = 300;
    if na.min(nb) < 8 && n <= EXACT_POOL_LIMIT {
        let k = na.min(nb);
        let group_small = if na <= nb { 0 } else { 1 };
        let doubled_s_obs: u64 = pooled
            .iter()
            .zip(&doubled_ranks)
            .filter(|((_, group), _)| *group == group_small)
            .map(|(_, &r)| r)
            .sum();
        let p = exact_two_sided_p(&doubled_ranks, k, doubled_s_obs);
        return Ok((u_a, p));
    }

    let n_f = n as f64;
    let variance =
        (na * nb) as f64 / 12.0 * ((n_f + 1.0) - tie_correction / (n_f * (n_f - 1.0)));
    if variance <= 0.0 {
        return Ok((u_a, 1.0));
    }
    let z = ((u_a - mu).abs() - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = (2.0 * (1.0 - normal.cdf(z))).clamp(0.0, 1.0);
    Ok((u_a, p))
}

/// Exact two-sided p: the share of k-subsets of the pooled (doubled) ranks
/// whose U deviates from the mean at least as much as the observed one.
/// Counting runs over a subset-sum table, so ties need no special casing.
fn exact_two_sided_p(doubled_ranks: &[u64], k: usize, doubled_s_obs: u64) -> f64 {
    let n = doubled_ranks.len();
    let total_sum: u64 = doubled_ranks.iter().sum();
    let max_s = total_sum as usize;

    // dp[c][s] = number of c-subsets with doubled rank sum s
    let mut dp: Vec<Vec<u128>> = vec![vec![0; max_s + 1]; k + 1];
    dp[0][0] = 1;
    for &r in doubled_ranks {
        let r = r as usize;
        for c in (1..=k).rev() {
            for s in (r..=max_s).rev() {
                let add = dp[c - 1][s - r];
                if add != 0 {
                    dp[c][s] += add;
                }
            }
        }
    }

    // doubled U = s - k(k+1); doubled mean U = k(n-k)
    let k_u = k as i128;
    let n_u = n as i128;
    let dev = |s: i128| ((s - k_u * (k_u + 1)) - k_u * (n_u - k_u)).abs();
    let dev_obs = dev(doubled_s_obs as i128);

    let mut extreme: u128 = 0;
    let mut total: u128 = 0;
    for (s, &count) in dp[k].iter().enumerate() {
        if count == 0 {
            continue;
        }
        total += count;
        if dev(s as i128) >= dev_obs {
            extreme += count;
        }
    }
    extreme as f64 / total as f64
}

/// Stable per-run seed: FNV-1a over the master seed and the run coordinates.
pub fn run_seed(master: u64, coordinates: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for byte in master.to_le_bytes().iter().chain(coordinates.as_bytes()) {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub algorithms: Vec<Algorithm>,
    pub modes: Vec<Mode>,
    pub scenarios: Vec<ScenarioSpec>,
    pub max_len: usize,
    pub budget: BudgetLimit,
    pub master_seed: u64,
    pub workers: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            algorithms: Algorithm::ALL.to_vec(),
            modes: vec![Mode::Word],
            scenarios: vec![ScenarioSpec::AllTypes],
            max_len: optim::DEFAULT_TARGET_LEN,
            budget: BudgetLimit::Seconds(10.0),
            master_seed: 0,
            workers: 1,
        }
    }
}

struct Task {
    pool_idx: usize,
    target_idx: usize,
    algorithm: Algorithm,
    mode: Mode,
    scenario: ScenarioSpec,
    window: TimeWindow,
    project: String,
    seed: u64,
}

/// Cartesian benchmark over gold targets, scenarios, modes and algorithms.
/// Gold records whose project or window is absent from the corpus are
/// skipped with a warning on stderr. Record order and content are
/// deterministic for a fixed master seed, independent of the worker count.
pub fn benchmark(corpus: &Corpus, gold: &[GoldRecord], cfg: &BenchmarkConfig) -> Result<Vec<RunRecord>> {
    let mut pools: Vec<SentencePool> = Vec::new();
    let mut targets: Vec<TargetProfile> = Vec::new();
    let mut tasks: Vec<Task> = Vec::new();

    let projects = corpus.projects();
    for record in gold {
        let window = match record.window() {
            Ok(w) => w,
            Err(_) => {
                eprintln!(
                    "warning: skipping gold record for {}: invalid window",
                    record.project
                );
                continue;
            }
        };
        if !projects.contains(&record.project) {
            eprintln!(
                "warning: skipping gold record for {}: project not in corpus",
                record.project
            );
            continue;
        }
        let project_corpus = corpus.restrict_to_project(&record.project);
        for scenario in &cfg.scenarios {
            let pool = project_corpus.window_pool(window, scenario);
            if pool.is_empty() {
                eprintln!(
                    "warning: skipping {} {} .. {} ({}): empty pool",
                    record.project,
                    window.start.to_rfc3339(),
                    window.end.to_rfc3339(),
                    scenario.label()
                );
                continue;
            }
            let pool_idx = pools.len();
            pools.push(pool);
            for &mode in &cfg.modes {
                let target_idx = targets.len();
                targets.push(TargetProfile::from_text(&record.summary, mode));
                for &algorithm in &cfg.algorithms {
                    let coordinates = format!(
                        "{}|{}|{}|{}|{}|{}",
                        algorithm.name(),
                        mode.label(),
                        scenario.label(),
                        window.start.to_rfc3339(),
                        window.end.to_rfc3339(),
                        record.project
                    );
                    tasks.push(Task {
                        pool_idx,
                        target_idx,
                        algorithm,
                        mode,
                        scenario: scenario.clone(),
                        window,
                        project: record.project.clone(),
                        seed: run_seed(cfg.master_seed, &coordinates),
                    });
                }
            }
        }
    }

    let deterministic = matches!(cfg.budget, BudgetLimit::Evals(_));
    let execute = |task: &Task| -> Result<RunRecord> {
        let budget = SearchBudget {
            limit: cfg.budget,
            seed: task.seed,
        };
        let summary = optim::run(
            task.algorithm,
            &pools[task.pool_idx].sentences,
            &targets[task.target_idx],
            cfg.max_len,
            &budget,
        )?;
        Ok(RunRecord::from_summary(
            &summary,
            task.mode,
            &task.scenario,
            task.window,
            &task.project,
            task.seed,
            deterministic,
        ))
    };

    let results: Vec<Result<RunRecord>> = if cfg.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(execute).collect())
    } else {
        tasks.iter().map(execute).collect()
    };
    results.into_iter().collect()
}

/// Write one JSON record per line.
pub fn write_runs_jsonl(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_runs_jsonl(path: &Path) -> Result<Vec<RunRecord>> {
    let content = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut records = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        records.push(
            serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
                path: display.clone(),
                line: lineno + 1,
                msg: e.to_string(),
            })?,
        );
    }
    Ok(records)
}

/// Plot-ready score distributions: one row per valid run.
pub fn write_distributions_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "algorithm,mode,scenario,score")?;
    for r in records.iter().filter(|r| r.valid) {
        writeln!(f, "{},{},{},{}", r.algorithm, r.mode, r.scenario, r.score)?;
    }
    Ok(())
}

pub fn write_contributions_csv(table: &ContributionTable, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "type,count,percent")?;
    for &(t, count, percent) in &table.rows {
        writeln!(f, "{},{},{}", t.code(), count, percent)?;
    }
    Ok(())
}

/// Pairwise two-sided Mann-Whitney U over per-algorithm score distributions
/// (valid runs only), one row per unordered pair.
pub fn write_mwu_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut by_algo: HashMap<&str, Vec<f64>> = HashMap::new();
    for r in records.iter().filter(|r| r.valid) {
        by_algo.entry(r.algorithm.as_str()).or_default().push(r.score);
    }
    let mut f = fs::File::create(path)?;
    writeln!(f, "algoA,algoB,U,p")?;
    let names: Vec<&'static str> = Algorithm::ALL
        .iter()
        .map(|a| a.name())
        .filter(|n| by_algo.contains_key(n))
        .collect();
    for (i, &a) in names.iter().enumerate() {
        for &b in &names[i + 1..] {
            let (u, p) = mann_whitney_u(&by_algo[a], &by_algo[b])?;
            writeln!(f, "{a},{b},{u},{p}")?;
        }
    }
    Ok(())
}
