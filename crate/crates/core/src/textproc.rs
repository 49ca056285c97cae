//! Deterministic text preprocessing: code-block stripping, sentence
//! splitting, tokenization, stop-word removal and stemming.

use std::collections::HashSet;
use std::sync::OnceLock;

pub mod porter;

const STOPWORDS_RAW: &str = include_str!("../resources/stopwords.txt");

/// Bundled English stop-word list, one word per line in the resource file.
pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_RAW
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .collect()
    })
}

/// One preprocessed sentence, before it is tied to an artefact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceText {
    /// Original sentence as it appears in the artefact (code stripped).
    pub raw: String,
    /// Lowercased alphanumeric tokens of `raw`.
    pub tokens: Vec<String>,
    /// Stemmed tokens with stop words removed; may be empty.
    pub stems: Vec<String>,
}

impl SentenceText {
    /// A sentence whose stems list is empty can never score in word mode.
    pub fn is_zero_content(&self) -> bool {
        self.stems.is_empty()
    }
}

/// Remove fenced code blocks (``` delimited, unclosed fences run to the end
/// of the text), indented code blocks (lines indented by four or more spaces
/// or a tab, opened after a blank line), and inline backtick delimiters
/// (their content is kept).
pub fn strip_code_blocks(text: &str) -> String {
    let mut kept: Vec<&str> = Vec::new();
    let mut in_fence = false;
    for line in text.lines() {
        if line.trim_start().starts_with("```") {
            in_fence = !in_fence;
            continue;
        }
        if !in_fence {
            kept.push(line);
        }
    }

    let mut out: Vec<&str> = Vec::new();
    let mut prev_blank = true;
    let mut in_code = false;
    for line in kept {
        let blank = line.trim().is_empty();
        let indented = line.starts_with("    ") || line.starts_with('\t');
        if in_code {
            if indented && !blank {
                continue;
            }
            in_code = false;
        }
        if indented && !blank && prev_blank {
            in_code = true;
            continue;
        }
        out.push(line);
        prev_blank = blank;
    }

    let joined = out.join("\n");
    joined.replace('`', "")
}

/// Split text into sentences on `.`, `!`, `?` followed by whitespace or end
/// of text, and on newlines that end headings or list items. A period after
/// a lone capital letter (an initial such as "J.") does not split, and
/// periods inside digit sequences ("v2.1") never match because they are not
/// followed by whitespace. Empty fragments are dropped. Heading and
/// list-item markers stay part of the sentence text.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut block = String::new();

    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush_block(&mut block, &mut sentences);
            continue;
        }
        if let Some((marker, rest)) = split_marker(trimmed) {
            flush_block(&mut block, &mut sentences);
            let mut fragments = Vec::new();
            split_block(rest, &mut fragments);
            if let Some(first) = fragments.first_mut() {
                *first = format!("{marker} {first}");
            }
            sentences.append(&mut fragments);
            continue;
        }
        if !block.is_empty() {
            block.push(' ');
        }
        block.push_str(trimmed);
    }
    flush_block(&mut block, &mut sentences);
    sentences
}

fn flush_block(block: &mut String, sentences: &mut Vec<String>) {
    if !block.trim().is_empty() {
        split_block(block, sentences);
    }
    block.clear();
}

/// Detect a heading or list-item line; returns the marker and the content
/// after it, or None for ordinary prose lines.
fn split_marker(line: &str) -> Option<(&str, &str)> {
    if line.starts_with('#') {
        let hashes = line.chars().take_while(|&c| c == '#').count();
        let rest = &line[hashes..];
        if rest.is_empty() || rest.starts_with(' ') {
            return Some((&line[..hashes], rest.trim_start()));
        }
    }
    for marker in ["- ", "* ", "+ "] {
        if let Some(rest) = line.strip_prefix(marker) {
            return Some((&line[..1], rest.trim_start()));
        }
    }
    let digits = line.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits > 0 {
        let rest = &line[digits..];
        if (rest.starts_with(". ") || rest.starts_with(") "))
            && rest.len() > 2
        {
            return Some((&line[..digits + 1], rest[2..].trim_start()));
        }
    }
    None
}

/// Terminator-based splitting of a single block of prose.
fn split_block(block: &str, sentences: &mut Vec<String>) {
    let chars: Vec<char> = block.chars().collect();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            let run_start = i;
            while i + 1 < chars.len() && matches!(chars[i + 1], '.' | '!' | '?') {
                i += 1;
            }
            let at_end = i + 1 >= chars.len();
            let before_ws = !at_end && chars[i + 1].is_whitespace();
            let abbreviation = i == run_start
                && chars[i] == '.'
                && run_start >= 1
                && chars[run_start - 1].is_uppercase()
                && (run_start == 1 || !chars[run_start - 2].is_alphanumeric());
            if (at_end || before_ws) && !abbreviation {
                push_fragment(&chars[start..=i], sentences);
                i += 1;
                while i < chars.len() && chars[i].is_whitespace() {
                    i += 1;
                }
                start = i;
                continue;
            }
        }
        i += 1;
    }
    if start < chars.len() {
        push_fragment(&chars[start..], sentences);
    }
}

fn push_fragment(chars: &[char], sentences: &mut Vec<String>) {
    let fragment: String = chars.iter().collect();
    let fragment = fragment.trim();
    // fragments without any word content are dropped, not sentences
    if fragment.chars().any(|c| c.is_alphanumeric()) {
        sentences.push(fragment.to_string());
    }
}

/// Lowercased tokens of a sentence. Splitting on every character outside
/// ASCII [A-Za-z0-9] drops punctuation-only fragments and keeps stems inside
/// [a-z0-9].
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_ascii_lowercase())
        .collect()
}

/// Full pipeline: strip code, split into sentences, then tokenize, remove
/// stop words and stem each sentence. Sentences whose stems end up empty are
/// kept; callers decide what zero-content means for them.
pub fn preprocess(text: &str) -> Vec<SentenceText> {
    let stripped = strip_code_blocks(text);
    split_sentences(&stripped)
        .into_iter()
        .map(|raw| {
            let tokens = tokenize(&raw);
            let stems = tokens
                .iter()
                .filter(|t| !stopwords().contains(t.as_str()))
                .map(|t| porter::stem(t))
                .collect();
            SentenceText { raw, tokens, stems }
        })
        .collect()
}
