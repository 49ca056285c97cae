//! Python bindings for the devsum library: corpus loading, preprocessing,
//! feature extraction, fitness and the summary-construction algorithms.

use std::collections::BTreeSet;
use std::path::PathBuf;

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use devsum::analysis;
use devsum::corpus::{self, ArtefactType, ScenarioSpec, TimeWindow};
use devsum::features;
use devsum::optim::{self, Algorithm, SearchBudget};
use devsum::similarity::{self, Mode, TargetProfile};

fn to_py_err(e: devsum::Error) -> PyErr {
    match e {
        devsum::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_timestamp(s: &str) -> PyResult<DateTime<Utc>> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(Utc.from_utc_datetime(&d.and_hms_opt(0, 0, 0).unwrap()));
    }
    Err(PyValueError::new_err(format!(
        "`{s}` is neither RFC 3339 nor YYYY-MM-DD"
    )))
}

fn parse_scenario(scenario: &str, types: Option<Vec<String>>) -> PyResult<ScenarioSpec> {
    if let Some(codes) = types {
        let mut set = BTreeSet::new();
        for code in codes {
            let t = ArtefactType::parse_code(&code)
                .ok_or_else(|| PyValueError::new_err(format!("unknown type code `{code}`")))?;
            set.insert(t);
        }
        if set.is_empty() {
            return Err(PyValueError::new_err("types list is empty"));
        }
        return Ok(if set.len() == 1 {
            ScenarioSpec::SingleType(set.into_iter().next().unwrap())
        } else {
            ScenarioSpec::TypeSubset(set)
        });
    }
    ScenarioSpec::parse(scenario).map_err(to_py_err)
}

/// An immutable artefact collection with preprocessed sentences.
#[pyclass(name = "Corpus")]
struct PyCorpus {
    inner: corpus::Corpus,
}

#[pymethods]
impl PyCorpus {
    /// Load a line-delimited corpus file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyCorpus {
            inner: corpus::load_corpus(&path).map_err(to_py_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn projects(&self) -> Vec<String> {
        self.inner.projects()
    }

    /// Per-type (code, artefact count, sentence count) rows.
    fn type_histogram(&self) -> Vec<(String, usize, usize)> {
        self.inner
            .type_histogram()
            .into_iter()
            .map(|(t, a, s)| (t.code().to_string(), a, s))
            .collect()
    }

    /// Raw text of one sentence, if the id resolves.
    fn sentence_text(&self, artefact_id: &str, index: u32) -> Option<String> {
        self.inner
            .resolve(&corpus::SentenceId(artefact_id.to_string(), index))
            .map(|s| s.raw.clone())
    }
}

/// Strip code blocks, split sentences, tokenize, remove stop words and stem.
/// Returns one (raw, tokens, stems) triple per sentence.
#[pyfunction]
fn preprocess(text: &str) -> Vec<(String, Vec<String>, Vec<String>)> {
    devsum::textproc::preprocess(text)
        .into_iter()
        .map(|s| (s.raw, s.tokens, s.stems))
        .collect()
}

/// Porter-stem one lowercase token.
#[pyfunction]
fn stem(word: &str) -> String {
    devsum::textproc::porter::stem(word)
}

/// Vowel-group syllable count of one word.
#[pyfunction]
fn count_syllables(word: &str) -> u32 {
    features::count_syllables(word)
}

/// The 26 feature values of a text unit.
#[pyfunction]
fn extract_features(text: &str) -> Vec<f64> {
    features::extract_features(text).values.to_vec()
}

/// Cosine similarity; returns (score, valid) where valid is False when
/// either vector has zero norm.
#[pyfunction]
fn cosine(x: Vec<f64>, y: Vec<f64>) -> PyResult<(f64, bool)> {
    let f = similarity::cosine(&x, &y).map_err(to_py_err)?;
    Ok((f.score, f.valid))
}

/// Two-sided Mann-Whitney U test; returns (U, p).
#[pyfunction]
fn mann_whitney_u(a: Vec<f64>, b: Vec<f64>) -> PyResult<(f64, f64)> {
    analysis::mann_whitney_u(&a, &b).map_err(to_py_err)
}

/// Run one summary-construction algorithm over a corpus window.
#[pyfunction]
#[pyo3(signature = (
    corpus, project, window_start, window_end, target_text,
    algo = "greedy", mode = "word", scenario = "all", types = None,
    max_len = 5, budget_evals = 10_000, seed = 0,
))]
#[allow(clippy::too_many_arguments)]
fn summarize<'py>(
    py: Python<'py>,
    corpus: &PyCorpus,
    project: &str,
    window_start: &str,
    window_end: &str,
    target_text: &str,
    algo: &str,
    mode: &str,
    scenario: &str,
    types: Option<Vec<String>>,
    max_len: usize,
    budget_evals: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let window = TimeWindow::new(parse_timestamp(window_start)?, parse_timestamp(window_end)?)
        .map_err(to_py_err)?;
    let algorithm = Algorithm::parse(algo).map_err(to_py_err)?;
    let mode = Mode::parse(mode).map_err(to_py_err)?;
    let scenario = parse_scenario(scenario, types)?;
    let pool = corpus
        .inner
        .restrict_to_project(project)
        .window_pool(window, &scenario);

    let target = TargetProfile::from_text(target_text, mode);
    let budget = SearchBudget::evals(budget_evals, seed);
    let summary = optim::run(algorithm, &pool.sentences, &target, max_len, &budget)
        .map_err(to_py_err)?;

    let sentences: Vec<String> = summary
        .sids
        .iter()
        .map(|sid| {
            corpus
                .inner
                .resolve(sid)
                .map(|s| s.raw.clone())
                .unwrap_or_default()
        })
        .collect();
    let sids: Vec<(String, u32)> = summary
        .sids
        .iter()
        .map(|sid| (sid.artefact().to_string(), sid.index()))
        .collect();

    let out = PyDict::new(py);
    out.set_item("algorithm", algorithm.name())?;
    out.set_item("mode", mode.label())?;
    out.set_item("scenario", scenario.label())?;
    out.set_item("pool_size", pool.len())?;
    out.set_item("sids", sids)?;
    out.set_item("sentences", sentences)?;
    out.set_item("score", summary.score.score)?;
    out.set_item("valid", summary.score.valid)?;
    out.set_item("evaluations", summary.evaluations)?;
    Ok(out)
}

#[pymodule]
fn devsum_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyCorpus>()?;
    m.add_function(wrap_pyfunction!(preprocess, m)?)?;
    m.add_function(wrap_pyfunction!(stem, m)?)?;
    m.add_function(wrap_pyfunction!(count_syllables, m)?)?;
    m.add_function(wrap_pyfunction!(extract_features, m)?)?;
    m.add_function(wrap_pyfunction!(cosine, m)?)?;
    m.add_function(wrap_pyfunction!(mann_whitney_u, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    Ok(())
}
