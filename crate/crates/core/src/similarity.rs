//! Min-max normalization and cosine similarity: the fitness function shared
//! by every summary-construction algorithm.

use std::collections::HashMap;

use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::features::{extract_features, term_vector, FeatureVector, TermVector};

/// A fitness value. `valid` is false when either side of the cosine had zero
/// norm; such scores are fixed at 0 and excluded from aggregate analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub score: f64,
    pub valid: bool,
}

impl Fitness {
    pub const INVALID: Fitness = Fitness {
        score: 0.0,
        valid: false,
    };

    fn valid(score: f64) -> Fitness {
        Fitness { score, valid: true }
    }
}

/// Which representation drives the similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Word,
    Feature,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Word => "word",
            Mode::Feature => "feature",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "word" => Ok(Mode::Word),
            "feature" => Ok(Mode::Feature),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode `{other}` (expected word or feature)"
            ))),
        }
    }
}

/// Per-dimension observed minima and maxima, learned from pool vectors plus
/// the target, never from candidate summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationBounds {
    pub dims: Vec<(f64, f64)>,
}

/// Observed min and max per dimension. Requires at least one vector.
pub fn fit_bounds(vectors: &[&[f64]]) -> Result<NormalizationBounds> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidArgument("fit_bounds needs at least one vector".into()))?;
    let n = first.len();
    let mut dims = vec![(f64::INFINITY, f64::NEG_INFINITY); n];
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: v.len(),
            });
        }
        for (d, &x) in v.iter().enumerate() {
            dims[d].0 = dims[d].0.min(x);
            dims[d].1 = dims[d].1.max(x);
        }
    }
    Ok(NormalizationBounds { dims })
}

/// Min-max rescaling into the unit hypercube. Constant dimensions map to 0;
/// values outside the fitted bounds (possible for concatenated summaries)
/// are clamped.
pub fn normalize(v: &[f64], bounds: &NormalizationBounds) -> Result<Vec<f64>> {
    if v.len() != bounds.dims.len() {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: bounds.dims.len(),
        });
    }
    Ok(v.iter()
        .zip(&bounds.dims)
        .map(|(&x, &(lo, hi))| {
            if hi > lo {
                ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect())
}

/// Cosine similarity of two equal-length vectors. Zero norm on either side
/// yields the invalid fitness rather than an error.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<Fitness> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut dot = 0.0;
    let mut nx = 0.0;
    let mut ny = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        dot += a * b;
        nx += a * a;
        ny += b * b;
    }
    if nx == 0.0 || ny == 0.0 {
        return Ok(Fitness::INVALID);
    }
    Ok(Fitness::valid((dot / (nx * ny).sqrt()).clamp(-1.0, 1.0)))
}

/// The optimization target derived from a gold summary.
#[derive(Debug, Clone)]
pub enum TargetProfile {
    Word(TermVector),
    Feature(FeatureVector),
}

impl TargetProfile {
    /// Build the target representation for a mode from the gold summary text.
    pub fn from_text(text: &str, mode: Mode) -> TargetProfile {
        match mode {
            Mode::Word => {
                let stems: Vec<String> = crate::textproc::preprocess(text)
                    .into_iter()
                    .flat_map(|s| s.stems)
                    .collect();
                TargetProfile::Word(term_vector(&stems))
            }
            Mode::Feature => TargetProfile::Feature(extract_features(text)),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            TargetProfile::Word(_) => Mode::Word,
            TargetProfile::Feature(_) => Mode::Feature,
        }
    }
}

/// Precomputed state for evaluating selections from one pool against one
/// target: the fixed vocabulary, the fitted bounds and the normalized target.
/// Immutable once built, so evaluations can run concurrently.
pub struct FitnessContext {
    kind: ContextKind,
    pool_len: usize,
}

enum ContextKind {
    Word {
        /// Sparse per-sentence stem counts as (term id, count).
        sentence_terms: Vec<Vec<(u32, f64)>>,
        /// Per-term maximum count observed over pool sentences and target.
        term_max: Vec<f64>,
        /// Normalized target value per term id.
        target: Vec<f64>,
        target_norm_sq: f64,
    },
    Feature {
        raw_texts: Vec<String>,
        bounds: NormalizationBounds,
        target: Vec<f64>,
    },
}

impl FitnessContext {
    pub fn new(sentences: &[Sentence], target: &TargetProfile) -> FitnessContext {
        match target {
            TargetProfile::Word(target_tv) => Self::word_context(sentences, target_tv),
            TargetProfile::Feature(target_fv) => Self::feature_context(sentences, target_fv),
        }
    }

    fn word_context(sentences: &[Sentence], target_tv: &TermVector) -> FitnessContext {
        // Vocabulary is fixed up front as the union of pool and target stems
        // so fitness stays comparable across candidate selections.
        let sentence_tvs: Vec<TermVector> = sentences
            .iter()
            .map(|s| term_vector(&s.stems))
            .collect();

        let mut vocab_ids: HashMap<String, u32> = HashMap::new();
        let mut term_max: Vec<f64> = Vec::new();
        let mut target_counts: Vec<f64> = Vec::new();
        let id_of = |term: &str,
                         vocab_ids: &mut HashMap<String, u32>,
                         term_max: &mut Vec<f64>,
                         target_counts: &mut Vec<f64>| {
            if let Some(&id) = vocab_ids.get(term) {
                id
            } else {
                let id = term_max.len() as u32;
                vocab_ids.insert(term.to_string(), id);
                term_max.push(0.0);
                target_counts.push(0.0);
                id
            }
        };

        let mut sentence_terms: Vec<Vec<(u32, f64)>> = Vec::with_capacity(sentence_tvs.len());
        for tv in &sentence_tvs {
            let mut terms: Vec<(u32, f64)> = Vec::with_capacity(tv.len());
            for (term, count) in tv.iter() {
                let id = id_of(term, &mut vocab_ids, &mut term_max, &mut target_counts);
                let count = f64::from(count);
                term_max[id as usize] = term_max[id as usize].max(count);
                terms.push((id, count));
            }
            terms.sort_by_key(|&(id, _)| id);
            sentence_terms.push(terms);
        }
        for (term, count) in target_tv.iter() {
            let id = id_of(term, &mut vocab_ids, &mut term_max, &mut target_counts);
            let count = f64::from(count);
            term_max[id as usize] = term_max[id as usize].max(count);
            target_counts[id as usize] = count;
        }

        // Term-vector bounds are (0, max); max >= 1 for every vocabulary
        // term, so normalization never divides by zero.
        let target: Vec<f64> = target_counts
            .iter()
            .zip(&term_max)
            .map(|(&c, &m)| if m > 0.0 { (c / m).clamp(0.0, 1.0) } else { 0.0 })
            .collect();
        let target_norm_sq = target.iter().map(|&x| x * x).sum::<f64>();

        FitnessContext {
            pool_len: sentences.len(),
            kind: ContextKind::Word {
                sentence_terms,
                term_max,
                target,
                target_norm_sq,
            },
        }
    }

    fn feature_context(sentences: &[Sentence], target_fv: &FeatureVector) -> FitnessContext {
        let vectors: Vec<FeatureVector> = sentences
            .iter()
            .map(|s| extract_features(&s.raw))
            .collect();
        let mut refs: Vec<&[f64]> = vectors.iter().map(|v| v.values.as_slice()).collect();
        refs.push(target_fv.values.as_slice());
        let bounds = fit_bounds(&refs).expect("at least the target vector is present");
        let target = normalize(&target_fv.values, &bounds).expect("dimensions match");
        FitnessContext {
            pool_len: sentences.len(),
            kind: ContextKind::Feature {
                raw_texts: sentences.iter().map(|s| s.raw.clone()).collect(),
                bounds,
                target,
            },
        }
    }

    pub fn pool_len(&self) -> usize {
        self.pool_len
    }

    /// Fitness of a selection given as sorted pool indices. The empty
    /// selection is invalid by definition.
    pub fn evaluate(&self, selection: &[usize]) -> Fitness {
        if selection.is_empty() {
            return Fitness::INVALID;
        }
        match &self.kind {
            ContextKind::Word {
                sentence_terms,
                term_max,
                target,
                target_norm_sq,
            } => {
                if *target_norm_sq == 0.0 {
                    return Fitness::INVALID;
                }
                // Sum raw counts over the selection, then normalize by the
                // per-term maximum with clamping at 1.
                let mut sum: HashMap<u32, f64> = HashMap::new();
                for &i in selection {
                    for &(id, count) in &sentence_terms[i] {
                        *sum.entry(id).or_insert(0.0) += count;
                    }
                }
                let mut ids: Vec<u32> = sum.keys().copied().collect();
                ids.sort_unstable();
                let mut dot = 0.0;
                let mut norm_sq = 0.0;
                for id in ids {
                    let value = (sum[&id] / term_max[id as usize]).clamp(0.0, 1.0);
                    dot += value * target[id as usize];
                    norm_sq += value * value;
                }
                if norm_sq == 0.0 {
                    return Fitness::INVALID;
                }
                Fitness::valid((dot / (norm_sq * target_norm_sq).sqrt()).clamp(0.0, 1.0))
            }
            ContextKind::Feature {
                raw_texts,
                bounds,
                target,
            } => {
                let mut text = String::new();
                for (pos, &i) in selection.iter().enumerate() {
                    if pos > 0 {
                        text.push(' ');
                    }
                    text.push_str(&raw_texts[i]);
                }
                let fv = extract_features(&text);
                let normed = normalize(&fv.values, bounds).expect("dimensions match");
                cosine(&normed, target).expect("dimensions match")
            }
        }
    }
}

/// One-shot fitness of a sentence selection: build the context over
/// `pool_sentences` plus the target and evaluate `selected` (given as
/// indices into the pool). Searches should build the context once instead.
pub fn fitness(
    pool_sentences: &[Sentence],
    selected: &[usize],
    target: &TargetProfile,
) -> Fitness {
    FitnessContext::new(pool_sentences, target).evaluate(selected)
}
