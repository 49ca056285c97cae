//! Shared helpers for the integration and acceptance suites.

use devsum::corpus::{Sentence, SentenceId};
use devsum::textproc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const WORD_BANK: &[&str] = &[
    "fix", "login", "bug", "test", "session", "parser", "cache", "deploy", "merge", "review",
    "branch", "release", "schema", "worker", "pipeline", "index", "query", "token", "config",
    "module", "crash", "timeout", "retry", "socket", "header", "cookie", "metric", "alert",
    "backup", "restore", "cluster", "shard", "replica", "queue", "buffer", "stream", "batch",
    "cursor", "filter", "router", "handler", "logger", "tracer", "probe", "widget", "layout",
    "banner", "avatar", "locale", "theme", "plugin", "webhook", "payload", "archive", "mirror",
    "sandbox", "runtime", "compiler", "linker", "kernel",
];

/// Build one preprocessed sentence from raw text that splits into exactly
/// one sentence.
pub fn make_sentence(artefact: &str, index: u32, raw: &str) -> Sentence {
    let pre = textproc::preprocess(raw);
    assert_eq!(pre.len(), 1, "helper expects single-sentence text: {raw:?}");
    Sentence {
        sid: SentenceId(artefact.to_string(), index),
        raw: pre[0].raw.clone(),
        tokens: pre[0].tokens.clone(),
        stems: pre[0].stems.clone(),
    }
}

/// A seeded random instance: a pool of 8..=20 sentences with pairwise
/// disjoint vocabularies, and a gold text that is the concatenation of
/// `max_tiling` randomly chosen pool sentences in sentence-id order. The
/// construction makes the exact optimum (the chosen tiling) reachable
/// within the length cap, which the ordering criteria rely on.
pub fn random_instance(seed: u64, max_tiling: usize) -> (Vec<Sentence>, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(8..=20);
    let sentences: Vec<Sentence> = (0..n)
        .map(|i| {
            // each sentence draws from its own three-word slice of the bank
            let slice = &WORD_BANK[3 * i..3 * i + 3];
            let words = rng.random_range(2..=4);
            let mut text = String::new();
            for _ in 0..words {
                text.push_str(slice[rng.random_range(0..3)]);
                text.push(' ');
            }
            text.push_str(&format!("item{i}."));
            make_sentence(&format!("s{i:02}"), 0, &text)
        })
        .collect();
    let picks = rng.random_range(1..=max_tiling);
    let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, n, picks).into_vec();
    chosen.sort_unstable();
    let gold = chosen
        .iter()
        .map(|&i| sentences[i].raw.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    (sentences, gold)
}
