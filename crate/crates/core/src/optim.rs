//! The six summary-construction algorithms sharing one fitness interface:
//! exhaustive enumeration, greedy, three random-local-search variants and a
//! random-sampling baseline.

use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Sentence, SentenceId};
use crate::error::{Error, Result};
use crate::similarity::{Fitness, FitnessContext, TargetProfile};

/// Default target summary length in sentences.
pub const DEFAULT_TARGET_LEN: usize = 5;

/// Default cap on the number of subsets brute force may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// How long a randomized search may run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetLimit {
    /// Wall-clock limit in seconds.
    Seconds(f64),
    /// Number of fitness evaluations; runs are bit-deterministic under this.
    Evals(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub limit: BudgetLimit,
    pub seed: u64,
}

impl SearchBudget {
    pub fn evals(amount: u64, seed: u64) -> SearchBudget {
        SearchBudget {
            limit: BudgetLimit::Evals(amount),
            seed,
        }
    }

    pub fn seconds(secs: f64, seed: u64) -> SearchBudget {
        SearchBudget {
            limit: BudgetLimit::Seconds(secs),
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BruteForce,
    Greedy,
    RlsUnrestricted,
    RlsRestricted,
    RlsUnrestrictedSubset,
    RandomSearch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::BruteForce,
        Algorithm::Greedy,
        Algorithm::RlsUnrestricted,
        Algorithm::RlsRestricted,
        Algorithm::RlsUnrestrictedSubset,
        Algorithm::RandomSearch,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::BruteForce => "brute_force",
            Algorithm::Greedy => "greedy",
            Algorithm::RlsUnrestricted => "rls_unrestricted",
            Algorithm::RlsRestricted => "rls_restricted",
            Algorithm::RlsUnrestrictedSubset => "rls_unrestricted_subset",
            Algorithm::RandomSearch => "random_search",
        }
    }

    pub fn parse(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one algorithm run. `sids` is in sentence-id order and free of
/// duplicates; `evaluations` counts fitness calls.
#[derive(Debug, Clone)]
pub struct Summary {
    pub sids: Vec<SentenceId>,
    pub score: Fitness,
    pub algorithm: Algorithm,
    pub evaluations: u64,
    pub elapsed: Duration,
}

/// Counts fitness evaluations on top of a prepared context.
struct Evaluator<'a> {
    ctx: &'a FitnessContext,
    evals: u64,
}

impl<'a> Evaluator<'a> {
    fn new(ctx: &'a FitnessContext) -> Evaluator<'a> {
        Evaluator { ctx, evals: 0 }
    }

    fn eval(&mut self, selection: &[usize]) -> Fitness {
        self.evals += 1;
        self.ctx.evaluate(selection)
    }
}

fn summarize_selection(
    pool: &[Sentence],
    selection: &[usize],
    score: Fitness,
    algorithm: Algorithm,
    evaluations: u64,
    elapsed: Duration,
) -> Summary {
    let mut indices: Vec<usize> = selection.to_vec();
    indices.sort_unstable();
    Summary {
        sids: indices.iter().map(|&i| pool[i].sid.clone()).collect(),
        score,
        algorithm,
        evaluations,
        elapsed,
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Visit all k-subsets of `items` in lexicographic order.
fn for_each_combination(items: &[usize], k: usize, mut visit: impl FnMut(&[usize])) {
    if k == 0 || k > items.len() {
        return;
    }
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = vec![0; k];
    loop {
        for (slot, &i) in buf.iter_mut().zip(&idx) {
            *slot = items[i];
        }
        visit(&buf);
        // advance to the next combination
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + n - k {
                idx[pos] += 1;
                for j in pos + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return;
            }
        }
    }
}

/// Evaluate every subset of `items` of size 1..=max_len, returning the best
/// valid one. Ties go to the subset seen first, which in this enumeration
/// order is the smaller and lexicographically smallest one.
fn best_enumerated_subset(
    evaluator: &mut Evaluator<'_>,
    items: &[usize],
    max_len: usize,
) -> (Vec<usize>, Fitness) {
    let mut best: Vec<usize> = Vec::new();
    let mut best_fit = Fitness::INVALID;
    for k in 1..=max_len.min(items.len()) {
        for_each_combination(items, k, |subset| {
            let f = evaluator.eval(subset);
            if f.valid && (!best_fit.valid || f.score > best_fit.score) {
                best_fit = f;
                best = subset.to_vec();
            }
        });
    }
    (best, best_fit)
}

/// Exhaustively evaluate all subsets of up to `max_len` sentences and return
/// the exact optimum. Refuses pools whose subset count exceeds `cap`.
pub fn brute_force(
    pool: &[Sentence],
    target: &TargetProfile,
    max_len: usize,
    cap: u128,
) -> Result<Summary> {
    if max_len == 0 {
        return Err(Error::InvalidArgument("target length must be at least 1".into()));
    }
    let n = pool.len();
    let subsets: u128 = (1..=max_len.min(n) as u128)
        .map(|k| binomial(n as u128, k))
        .fold(0u128, u128::saturating_add);
    if subsets > cap {
        return Err(Error::EnumerationCap { subsets, cap });
    }
    let start = Instant::now();
    let ctx = FitnessContext::new(pool, target);
    let mut evaluator = Evaluator::new(&ctx);
    let items: Vec<usize> = (0..n).collect();
    let (best, best_fit) = best_enumerated_subset(&mut evaluator, &items, max_len);
    Ok(summarize_selection(
        pool,
        &best,
        best_fit,
        Algorithm::BruteForce,
        evaluator.evals,
        start.elapsed(),
    ))
}

/// Greedy construction: in each round add the unused sentence that maximizes
/// the fitness of the grown summary, stopping early only when even the best
/// addition strictly decreases fitness. Equal-fitness additions are
/// accepted; candidate ties break to the smallest sentence id.
pub fn greedy(pool: &[Sentence], target: &TargetProfile, max_len: usize) -> Summary {
    let start = Instant::now();
    let ctx = FitnessContext::new(pool, target);
    let mut evaluator = Evaluator::new(&ctx);
    let n = pool.len();
    let mut selected: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    let mut current = Fitness::INVALID;

    while selected.len() < max_len.min(n) {
        let mut best: Option<(usize, Fitness)> = None;
        for (i, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
            let mut candidate = selected.clone();
            candidate.push(i);
            candidate.sort_unstable();
            let f = evaluator.eval(&candidate);
            let beats = match &best {
                None => true,
                Some((_, b)) => (f.valid, f.score) > (b.valid, b.score),
            };
            if beats {
                best = Some((i, f));
            }
        }
        let Some((pick, fit)) = best else { break };
        if !fit.valid || fit.score < current.score {
            break;
        }
        used[pick] = true;
        selected.push(pick);
        selected.sort_unstable();
        current = fit;
    }

    summarize_selection(
        pool,
        &selected,
        current,
        Algorithm::Greedy,
        evaluator.evals,
        start.elapsed(),
    )
}

enum LengthRule {
    Unrestricted,
    AtMost(usize),
}

/// Shared RLS loop: flip one uniformly chosen sentence per step and keep the
/// flip if fitness does not decrease.
fn rls_core(
    evaluator: &mut Evaluator<'_>,
    n: usize,
    budget: &SearchBudget,
    rule: &LengthRule,
    start: Instant,
) -> (Vec<bool>, Fitness) {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut member = vec![false; n];
    let mut size = 0usize;
    let mut current = Fitness::INVALID;
    if n == 0 {
        return (member, current);
    }
    loop {
        match budget.limit {
            BudgetLimit::Evals(amount) => {
                if evaluator.evals >= amount {
                    break;
                }
            }
            BudgetLimit::Seconds(secs) => {
                if start.elapsed().as_secs_f64() >= secs {
                    break;
                }
            }
        }
        let flip = rng.random_range(0..n);
        let adding = !member[flip];
        if adding {
            if let LengthRule::AtMost(limit) = rule {
                // growth beyond the cap is rejected before evaluation and
                // does not consume an evaluation budget
                if size == *limit {
                    continue;
                }
            }
        }
        member[flip] = !member[flip];
        let selection: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
        let f = evaluator.eval(&selection);
        if f.score >= current.score {
            current = f;
            size = selection.len();
        } else {
            member[flip] = !member[flip];
        }
    }
    (member, current)
}

/// Random local search without a length cap.
pub fn rls_unrestricted(pool: &[Sentence], target: &TargetProfile, budget: &SearchBudget) -> Summary {
    let start = Instant::now();
    let ctx = FitnessContext::new(pool, target);
    let mut evaluator = Evaluator::new(&ctx);
    let (member, fit) = rls_core(
        &mut evaluator,
        pool.len(),
        budget,
        &LengthRule::Unrestricted,
        start,
    );
    let selection: Vec<usize> = (0..pool.len()).filter(|&i| member[i]).collect();
    summarize_selection(
        pool,
        &selection,
        fit,
        Algorithm::RlsUnrestricted,
        evaluator.evals,
        start.elapsed(),
    )
}

/// Random local search that refuses to grow beyond `max_len` sentences.
pub fn rls_restricted(
    pool: &[Sentence],
    target: &TargetProfile,
    max_len: usize,
    budget: &SearchBudget,
) -> Summary {
    let start = Instant::now();
    let ctx = FitnessContext::new(pool, target);
    let mut evaluator = Evaluator::new(&ctx);
    let (member, fit) = rls_core(
        &mut evaluator,
        pool.len(),
        budget,
        &LengthRule::AtMost(max_len),
        start,
    );
    let selection: Vec<usize> = (0..pool.len()).filter(|&i| member[i]).collect();
    summarize_selection(
        pool,
        &selection,
        fit,
        Algorithm::RlsRestricted,
        evaluator.evals,
        start.elapsed(),
    )
}

/// Unrestricted RLS followed by exhaustive enumeration of all subsets of the
/// incumbent of size at most `max_len`. The whole budget goes to the RLS
/// phase; the enumeration is bounded by the incumbent size.
pub fn rls_unrestricted_subset(
    pool: &[Sentence],
    target: &TargetProfile,
    max_len: usize,
    budget: &SearchBudget,
) -> Summary {
    let start = Instant::now();
    let ctx = FitnessContext::new(pool, target);
    let mut evaluator = Evaluator::new(&ctx);
    let (member, _) = rls_core(
        &mut evaluator,
        pool.len(),
        budget,
        &LengthRule::Unrestricted,
        start,
    );
    let incumbent: Vec<usize> = (0..pool.len()).filter(|&i| member[i]).collect();
    let (best, best_fit) = best_enumerated_subset(&mut evaluator, &incumbent, max_len);
    summarize_selection(
        pool,
        &best,
        best_fit,
        Algorithm::RlsUnrestrictedSubset,
        evaluator.evals,
        start.elapsed(),
    )
}

/// Baseline: repeatedly draw a uniform random subset of `max_len` sentences
/// (or the whole pool when it is smaller) and keep the best.
pub fn random_search(
    pool: &[Sentence],
    target: &TargetProfile,
    max_len: usize,
    budget: &SearchBudget,
) -> Summary {
    let start = Instant::now();
    let ctx = FitnessContext::new(pool, target);
    let mut evaluator = Evaluator::new(&ctx);
    let n = pool.len();
    let k = max_len.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best: Vec<usize> = Vec::new();
    let mut best_fit = Fitness::INVALID;
    if n > 0 && k > 0 {
        loop {
            match budget.limit {
                BudgetLimit::Evals(amount) => {
                    if evaluator.evals >= amount {
                        break;
                    }
                }
                BudgetLimit::Seconds(secs) => {
                    if start.elapsed().as_secs_f64() >= secs {
                        break;
                    }
                }
            }
            let mut draw: Vec<usize> = rand::seq::index::sample(&mut rng, n, k).into_vec();
            draw.sort_unstable();
            let f = evaluator.eval(&draw);
            if f.valid && (!best_fit.valid || f.score > best_fit.score) {
                best_fit = f;
                best = draw;
            }
        }
    }
    summarize_selection(
        pool,
        &best,
        best_fit,
        Algorithm::RandomSearch,
        evaluator.evals,
        start.elapsed(),
    )
}

/// Dispatch one algorithm run with shared defaults.
pub fn run(
    algorithm: Algorithm,
    pool: &[Sentence],
    target: &TargetProfile,
    max_len: usize,
    budget: &SearchBudget,
) -> Result<Summary> {
    Ok(match algorithm {
        Algorithm::BruteForce => brute_force(pool, target, max_len, DEFAULT_ENUMERATION_CAP)?,
        Algorithm::Greedy => greedy(pool, target, max_len),
        Algorithm::RlsUnrestricted => rls_unrestricted(pool, target, budget),
        Algorithm::RlsRestricted => rls_restricted(pool, target, max_len, budget),
        Algorithm::RlsUnrestrictedSubset => rls_unrestricted_subset(pool, target, max_len, budget),
        Algorithm::RandomSearch => random_search(pool, target, max_len, budget),
    })
}
