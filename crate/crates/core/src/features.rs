//! Sentence representations: sparse term-count vectors and the
//! 26-dimensional lexical/readability feature vector.
//!
//! Feature layout (0-based index, F-number):
//!
//! | idx | F   | meaning                                        |
//! |-----|-----|------------------------------------------------|
//! | 0   | F1  | word count (whitespace tokens)                 |
//! | 1   | F2  | characters including spaces                    |
//! | 2   | F3  | characters excluding spaces                    |
//! | 3   | F4  | total syllables                                |
//! | 4   | F5  | sentence count                                 |
//! | 5   | F6  | unique lowercased words                        |
//! | 6   | F7  | average word length, F3/F1                     |
//! | 7   | F8  | average sentence length in words, F1/F5        |
//! | 8   | F9  | monosyllabic words                             |
//! | 9   | F10 | polysyllabic words (>= 3 syllables)            |
//! | 10  | F11 | syllables per word, F4/F1                      |
//! | 11  | F12 | difficult words (absent from easy-word list)   |
//! | 12  | F13 | short words (<= 3 chars)                       |
//! | 13  | F14 | long words (>= 7 chars)                        |
//! | 14  | F15 | longest sentence in chars                      |
//! | 15  | F16 | longest word in chars                          |
//! | 16  | F17 | max syllables in any word                      |
//! | 17  | F18 | reading time, F1/238 minutes                   |
//! | 18  | F19 | speaking time, F1/183 minutes                  |
//! | 19  | F20 | Dale-Chall readability                         |
//! | 20  | F21 | automated readability index                    |
//! | 21  | F22 | Coleman-Liau index                             |
//! | 22  | F23 | Flesch reading ease                            |
//! | 23  | F24 | Flesch-Kincaid grade level                     |
//! | 24  | F25 | Gunning fog index                              |
//! | 25  | F26 | Shannon entropy of the character distribution  |

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use crate::textproc::split_sentences;

pub const FEATURE_COUNT: usize = 26;

pub const F1: usize = 0;
pub const F2: usize = 1;
pub const F3: usize = 2;
pub const F4: usize = 3;
pub const F5: usize = 4;
pub const F6: usize = 5;
pub const F7: usize = 6;
pub const F8: usize = 7;
pub const F9: usize = 8;
pub const F10: usize = 9;
pub const F11: usize = 10;
pub const F12: usize = 11;
pub const F13: usize = 12;
pub const F14: usize = 13;
pub const F15: usize = 14;
pub const F16: usize = 15;
pub const F17: usize = 16;
pub const F18: usize = 17;
pub const F19: usize = 18;
pub const F20: usize = 19;
pub const F21: usize = 20;
pub const F22: usize = 21;
pub const F23: usize = 22;
pub const F24: usize = 23;
pub const F25: usize = 24;
pub const F26: usize = 25;

const EASY_WORDS_RAW: &str = include_str!("../resources/easy_words.txt");

/// Bundled familiar-words list used for the difficult-word count (F12).
pub fn easy_words() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        EASY_WORDS_RAW
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .collect()
    })
}

/// Sparse stem-count vector. No zero counts are ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermVector {
    counts: BTreeMap<String, u32>,
}

impl TermVector {
    pub fn get(&self, term: &str) -> u32 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.counts.iter().map(|(t, c)| (t.as_str(), *c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of stems counted.
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }
}

/// Exact multiset count of a stem list.
pub fn term_vector<S: AsRef<str>>(stems: &[S]) -> TermVector {
    let mut counts = BTreeMap::new();
    for stem in stems {
        *counts.entry(stem.as_ref().to_string()).or_insert(0) += 1;
    }
    TermVector { counts }
}

/// The 26 feature values, indexed by the `F*` constants above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
}

impl FeatureVector {
    pub fn zero() -> Self {
        FeatureVector {
            values: [0.0; FEATURE_COUNT],
        }
    }

    /// True when the text unit had no words; such vectors cannot score.
    pub fn is_zero_content(&self) -> bool {
        self.values[F1] == 0.0
    }
}

/// Count syllables in one word with the vowel-group heuristic: maximal runs
/// of a, e, i, o, u, y count one each; a terminal silent `e` is subtracted
/// unless the word ends in consonant + `le`; never less than one. Words that
/// are empty after stripping non-alphabetic characters count as one.
pub fn count_syllables(word: &str) -> u32 {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .map(|c| c.to_ascii_lowercase())
        .collect();
    if letters.is_empty() {
        return 1;
    }
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0u32;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' {
        let before = letters[n - 2];
        let consonant_le = before == 'l' && n >= 3 && !is_vowel(letters[n - 3]);
        if !consonant_le && !is_vowel(before) {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

/// Compute all 26 features over a text unit (a single sentence or a
/// space-joined summary). Empty text yields the all-zero vector.
pub fn extract_features(text: &str) -> FeatureVector {
    let mut v = FeatureVector::zero();
    if text.is_empty() {
        return v;
    }

    let words: Vec<&str> = text.split_whitespace().collect();
    let sentences = split_sentences(text);

    let f1 = words.len() as f64;
    v.values[F1] = f1;
    v.values[F2] = text.chars().count() as f64;
    v.values[F3] = text.chars().filter(|c| !c.is_whitespace()).count() as f64;
    v.values[F5] = sentences.len() as f64;

    let mut unique: HashSet<String> = HashSet::new();
    let mut total_syllables = 0u64;
    let mut mono = 0u64;
    let mut poly = 0u64;
    let mut difficult = 0u64;
    let mut short = 0u64;
    let mut long = 0u64;
    let mut longest_word = 0usize;
    let mut max_syllables = 0u32;
    for word in &words {
        let clean = word.trim_matches(|c: char| !c.is_alphanumeric());
        let clean_len = clean.chars().count();
        let syl = count_syllables(word);
        total_syllables += u64::from(syl);
        if syl == 1 {
            mono += 1;
        }
        if syl >= 3 {
            poly += 1;
        }
        if clean_len <= 3 {
            short += 1;
        }
        if clean_len >= 7 {
            long += 1;
        }
        longest_word = longest_word.max(clean_len);
        max_syllables = max_syllables.max(syl);
        if !clean.is_empty() {
            let lower = clean.to_lowercase();
            if !easy_words().contains(lower.as_str()) {
                difficult += 1;
            }
            unique.insert(lower);
        }
    }

    v.values[F4] = total_syllables as f64;
    v.values[F6] = unique.len() as f64;
    v.values[F9] = mono as f64;
    v.values[F10] = poly as f64;
    v.values[F12] = difficult as f64;
    v.values[F13] = short as f64;
    v.values[F14] = long as f64;
    v.values[F15] = sentences
        .iter()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(0) as f64;
    v.values[F16] = longest_word as f64;
    v.values[F17] = f64::from(max_syllables);

    if f1 > 0.0 {
        let f5 = v.values[F5];
        let f8 = if f5 > 0.0 { f1 / f5 } else { 0.0 };
        let f11 = v.values[F4] / f1;
        v.values[F7] = v.values[F3] / f1;
        v.values[F8] = f8;
        v.values[F11] = f11;
        v.values[F18] = f1 / 238.0;
        v.values[F19] = f1 / 183.0;

        let difficult_share = v.values[F12] / f1;
        let mut dale_chall = 0.1579 * (100.0 * difficult_share) + 0.0496 * f8;
        if difficult_share > 0.05 {
            dale_chall += 3.6365;
        }
        v.values[F20] = dale_chall;
        v.values[F21] = 4.71 * (v.values[F3] / f1) + 0.5 * f8 - 21.43;
        let letters = text.chars().filter(|c| c.is_alphabetic()).count() as f64;
        let l = 100.0 * letters / f1;
        let s = 100.0 * f5 / f1;
        v.values[F22] = 0.0588 * l - 0.296 * s - 15.8;
        v.values[F23] = 206.835 - 1.015 * f8 - 84.6 * f11;
        v.values[F24] = 0.39 * f8 + 11.8 * f11 - 15.59;
        v.values[F25] = 0.4 * (f8 + 100.0 * v.values[F10] / f1);
    }

    v.values[F26] = char_entropy_bits(text);
    v
}

/// Shannon entropy of the character distribution, in bits.
fn char_entropy_bits(text: &str) -> f64 {
    let mut freq: HashMap<char, u64> = HashMap::new();
    let mut total = 0u64;
    for c in text.chars() {
        *freq.entry(c).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    // Sort for a deterministic summation order.
    let mut counts: Vec<u64> = freq.into_values().collect();
    counts.sort_unstable();
    counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}
