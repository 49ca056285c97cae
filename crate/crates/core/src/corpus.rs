//! Artefact corpus: loading, validation, time windowing and scenario-filtered
//! sentence pools.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc;

/// The fifteen artefact type codes, in their reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArtefactType {
    /// Issue titles
    IT,
    /// Issue bodies
    IB,
    /// Issue body comments
    IBC,
    /// Pull request titles
    PRT,
    /// Pull request bodies
    PRB,
    /// Pull request body comments
    PRBC,
    /// Pull request reviews
    PRRv,
    /// Pull request review comments
    PRRvC,
    /// Commit messages
    CM,
    /// Commit comments
    CMC,
    /// Milestone titles
    MT,
    /// Milestone descriptions
    MD,
    /// Readme files
    RMe,
    /// Wiki files
    Wiki,
    /// Releases
    Rel,
}

impl ArtefactType {
    pub const ALL: [ArtefactType; 15] = [
        ArtefactType::IT,
        ArtefactType::IB,
        ArtefactType::IBC,
        ArtefactType::PRT,
        ArtefactType::PRB,
        ArtefactType::PRBC,
        ArtefactType::PRRv,
        ArtefactType::PRRvC,
        ArtefactType::CM,
        ArtefactType::CMC,
        ArtefactType::MT,
        ArtefactType::MD,
        ArtefactType::RMe,
        ArtefactType::Wiki,
        ArtefactType::Rel,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            ArtefactType::IT => "IT",
            ArtefactType::IB => "IB",
            ArtefactType::IBC => "IBC",
            ArtefactType::PRT => "PRT",
            ArtefactType::PRB => "PRB",
            ArtefactType::PRBC => "PRBC",
            ArtefactType::PRRv => "PRRv",
            ArtefactType::PRRvC => "PRRvC",
            ArtefactType::CM => "CM",
            ArtefactType::CMC => "CMC",
            ArtefactType::MT => "MT",
            ArtefactType::MD => "MD",
            ArtefactType::RMe => "RMe",
            ArtefactType::Wiki => "Wiki",
            ArtefactType::Rel => "Rel",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ArtefactType::IT => "Issue titles",
            ArtefactType::IB => "Issue bodies",
            ArtefactType::IBC => "Issue body comments",
            ArtefactType::PRT => "Pull request titles",
            ArtefactType::PRB => "Pull request bodies",
            ArtefactType::PRBC => "Pull request body comments",
            ArtefactType::PRRv => "Pull request reviews",
            ArtefactType::PRRvC => "Pull request review comments",
            ArtefactType::CM => "Commit messages",
            ArtefactType::CMC => "Commit comments",
            ArtefactType::MT => "Milestone titles",
            ArtefactType::MD => "Milestone descriptions",
            ArtefactType::RMe => "Readme files",
            ArtefactType::Wiki => "Wiki files",
            ArtefactType::Rel => "Releases",
        }
    }

    pub fn parse_code(code: &str) -> Option<ArtefactType> {
        ArtefactType::ALL.iter().copied().find(|t| t.code() == code)
    }
}

impl fmt::Display for ArtefactType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// The eight artefact types reported as most relevant, most common first.
pub const RELEVANT_TYPES: [ArtefactType; 8] = [
    ArtefactType::Wiki,
    ArtefactType::IT,
    ArtefactType::IB,
    ArtefactType::IBC,
    ArtefactType::CM,
    ArtefactType::PRB,
    ArtefactType::RMe,
    ArtefactType::PRRv,
];

/// One raw repository item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artefact {
    pub id: String,
    pub project: String,
    #[serde(rename = "type")]
    pub atype: ArtefactType,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    pub text: String,
}

/// Half-open interval: `start` inclusive, `end` exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<TimeWindow> {
        if start < end {
            Ok(TimeWindow { start, end })
        } else {
            Err(Error::InvalidWindow)
        }
    }

    fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }

    /// An artefact belongs to the window if it was created or updated in it.
    pub fn admits(&self, artefact: &Artefact) -> bool {
        self.contains(artefact.created_at) || self.contains(artefact.updated_at)
    }
}

/// Which artefact types feed a sentence pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioSpec {
    AllTypes,
    SingleType(ArtefactType),
    TypeSubset(BTreeSet<ArtefactType>),
}

impl ScenarioSpec {
    /// The fixed eight-type subset scenario.
    pub fn relevant_subset() -> ScenarioSpec {
        ScenarioSpec::TypeSubset(RELEVANT_TYPES.into_iter().collect())
    }

    pub fn admits(&self, atype: ArtefactType) -> bool {
        match self {
            ScenarioSpec::AllTypes => true,
            ScenarioSpec::SingleType(t) => *t == atype,
            ScenarioSpec::TypeSubset(set) => set.contains(&atype),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ScenarioSpec::TypeSubset(set) if set.is_empty())
    }

    /// Canonical label used in run records and file names.
    pub fn label(&self) -> String {
        match self {
            ScenarioSpec::AllTypes => "all".to_string(),
            ScenarioSpec::SingleType(t) => format!("type:{t}"),
            ScenarioSpec::TypeSubset(set) => {
                let relevant: BTreeSet<ArtefactType> = RELEVANT_TYPES.into_iter().collect();
                if *set == relevant {
                    "subset".to_string()
                } else {
                    let codes: Vec<&str> = set.iter().map(|t| t.code()).collect();
                    format!("types:{}", codes.join("+"))
                }
            }
        }
    }

    /// Parse a scenario label: `all`, `subset`, a single type code, or a
    /// `+`-separated list of codes.
    pub fn parse(label: &str) -> Result<ScenarioSpec> {
        match label {
            "all" => return Ok(ScenarioSpec::AllTypes),
            "subset" => return Ok(ScenarioSpec::relevant_subset()),
            _ => {}
        }
        let body = label
            .strip_prefix("type:")
            .or_else(|| label.strip_prefix("types:"))
            .unwrap_or(label);
        let mut set = BTreeSet::new();
        for code in body.split('+') {
            let t = ArtefactType::parse_code(code.trim()).ok_or_else(|| {
                Error::InvalidArgument(format!("unknown artefact type code `{code}` in scenario"))
            })?;
            set.insert(t);
        }
        if set.is_empty() {
            return Err(Error::InvalidArgument("scenario has no types".into()));
        }
        if set.len() == 1 {
            Ok(ScenarioSpec::SingleType(set.into_iter().next().unwrap()))
        } else {
            Ok(ScenarioSpec::TypeSubset(set))
        }
    }
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Identity of one preprocessed sentence: artefact id and position within
/// the artefact. Serialized as a two-element array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentenceId(pub String, pub u32);

impl SentenceId {
    pub fn artefact(&self) -> &str {
        &self.0
    }

    pub fn index(&self) -> u32 {
        self.1
    }
}

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.0, self.1)
    }
}

/// A preprocessed sentence tied to its artefact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub sid: SentenceId,
    pub raw: String,
    pub tokens: Vec<String>,
    pub stems: Vec<String>,
}

impl Sentence {
    pub fn is_zero_content(&self) -> bool {
        self.stems.is_empty()
    }
}

#[derive(Debug)]
struct Entry {
    artefact: Artefact,
    sentences: Vec<Sentence>,
}

/// An immutable artefact collection with preprocessed sentences, ordered by
/// artefact id.
#[derive(Debug)]
pub struct Corpus {
    entries: Vec<Entry>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    pub fn from_artefacts(mut artefacts: Vec<Artefact>) -> Corpus {
        artefacts.sort_by(|a, b| a.id.cmp(&b.id));
        let entries: Vec<Entry> = artefacts
            .into_iter()
            .map(|artefact| {
                let sentences = textproc::preprocess(&artefact.text)
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| Sentence {
                        sid: SentenceId(artefact.id.clone(), i as u32),
                        raw: s.raw,
                        tokens: s.tokens,
                        stems: s.stems,
                    })
                    .collect();
                Entry { artefact, sentences }
            })
            .collect();
        let by_id = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.artefact.id.clone(), i))
            .collect();
        Corpus { entries, by_id }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn artefacts(&self) -> impl Iterator<Item = &Artefact> {
        self.entries.iter().map(|e| &e.artefact)
    }

    pub fn get(&self, id: &str) -> Option<&Artefact> {
        self.by_id.get(id).map(|&i| &self.entries[i].artefact)
    }

    /// Resolve a sentence id to its sentence, if present.
    pub fn resolve(&self, sid: &SentenceId) -> Option<&Sentence> {
        let &i = self.by_id.get(sid.artefact())?;
        self.entries[i].sentences.get(sid.index() as usize)
    }

    /// Every preprocessed sentence, in (artefact id, index) order.
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.entries.iter().flat_map(|e| e.sentences.iter())
    }

    /// All projects named in the corpus, sorted.
    pub fn projects(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .entries
            .iter()
            .map(|e| e.artefact.project.as_str())
            .collect();
        set.into_iter().map(str::to_string).collect()
    }

    /// A copy containing only one project's artefacts.
    pub fn restrict_to_project(&self, project: &str) -> Corpus {
        Corpus::from_artefacts(
            self.entries
                .iter()
                .filter(|e| e.artefact.project == project)
                .map(|e| e.artefact.clone())
                .collect(),
        )
    }

    /// Per-type artefact and sentence counts, in reporting order.
    pub fn type_histogram(&self) -> Vec<(ArtefactType, usize, usize)> {
        ArtefactType::ALL
            .iter()
            .map(|&t| {
                let mut artefacts = 0;
                let mut sentences = 0;
                for e in &self.entries {
                    if e.artefact.atype == t {
                        artefacts += 1;
                        sentences += e.sentences.len();
                    }
                }
                (t, artefacts, sentences)
            })
            .collect()
    }

    /// Sentences of artefacts admitted by both the window and the scenario,
    /// in (artefact id, sentence index) order. An empty result is not an
    /// error.
    pub fn window_pool(&self, window: TimeWindow, scenario: &ScenarioSpec) -> SentencePool {
        let sentences = self
            .entries
            .iter()
            .filter(|e| scenario.admits(e.artefact.atype) && window.admits(&e.artefact))
            .flat_map(|e| e.sentences.iter().cloned())
            .collect();
        SentencePool {
            sentences,
            window,
            scenario: scenario.clone(),
        }
    }

    /// Canonical line-delimited serialization, records sorted by id.
    pub fn to_canonical_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(&e.artefact).expect("artefact serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_canonical_jsonl())?;
        Ok(())
    }
}

/// Sentences feeding one optimization run.
#[derive(Debug, Clone)]
pub struct SentencePool {
    pub sentences: Vec<Sentence>,
    pub window: TimeWindow,
    pub scenario: ScenarioSpec,
}

impl SentencePool {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    project: String,
    #[serde(rename = "type")]
    type_code: String,
    created_at: String,
    updated_at: String,
    text: String,
}

/// Parse one corpus record line, reporting `path:line` on failure.
pub fn parse_record(path: &str, lineno: usize, line: &str) -> Result<Artefact> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
        path: path.to_string(),
        line: lineno,
        msg: e.to_string(),
    })?;
    let atype = ArtefactType::parse_code(&raw.type_code).ok_or_else(|| Error::UnknownType {
        path: path.to_string(),
        line: lineno,
        code: raw.type_code.clone(),
    })?;
    let created_at = parse_timestamp(&raw.created_at, path, lineno, "created_at")?;
    let updated_at = parse_timestamp(&raw.updated_at, path, lineno, "updated_at")?;
    if updated_at < created_at {
        return Err(Error::MalformedRecord {
            path: path.to_string(),
            line: lineno,
            msg: "updated_at precedes created_at".into(),
        });
    }
    Ok(Artefact {
        id: raw.id,
        project: raw.project,
        atype,
        created_at,
        updated_at,
        text: raw.text,
    })
}

/// Load a line-delimited corpus file. Every record is validated; the first
/// offending line aborts the load with its line number.
pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let content = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut artefacts: Vec<Artefact> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let artefact = parse_record(&display, lineno, line)?;
        if seen.insert(artefact.id.clone(), lineno).is_some() {
            return Err(Error::DuplicateId {
                path: display,
                line: lineno,
                id: artefact.id,
            });
        }
        artefacts.push(artefact);
    }
    Ok(Corpus::from_artefacts(artefacts))
}

fn parse_timestamp(
    value: &str,
    path: &str,
    line: usize,
    field: &str,
) -> Result<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(value)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|e| Error::MalformedRecord {
            path: path.to_string(),
            line,
            msg: format!("{field}: {e}"),
        })
}

/// One gold-standard summary: the optimization target for a project week.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldRecord {
    pub project: String,
    pub window_start: DateTime<Utc>,
    pub window_end: DateTime<Utc>,
    pub summary: String,
}

impl GoldRecord {
    pub fn window(&self) -> Result<TimeWindow> {
        TimeWindow::new(self.window_start, self.window_end)
    }
}

/// Load a line-delimited gold-summary file.
pub fn load_gold(path: &Path) -> Result<Vec<GoldRecord>> {
    let content = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut records = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: GoldRecord =
            serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
                path: display.clone(),
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}
