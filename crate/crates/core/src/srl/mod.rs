//! Data model for SRL-annotated sentences and the lexical helpers built on
//! top of it: role mapping, keyword specificity, keyword candidates and verb
//! feature detection.
//!
//! Sentences arrive fully annotated; nothing here tokenizes or parses.

mod corpus;
mod keywords;
mod roles;
mod verbs;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use corpus::{
    parse_corpus, parse_record, Corpus, CorpusRecord, RecordArg, RecordFrame, RecordRejection, RecordToken, Warning,
};
pub use keywords::{classify_specificity, extract_keyword_candidates, Keyword, KeywordCandidate};
pub use roles::{map_role_label, InvalidRoleName, RoleLabel, ADJUNCT_ROLES};
pub use verbs::{detect_aux_indices, detect_verb_features, VerbFeatures};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SrlError {
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("keyword {keyword:?} is not a subsequence of span {span:?}")]
    NotSubsequence { keyword: String, span: String },
    #[error("empty keyword")]
    EmptyKeyword,
    #[error("token {index} ({text:?}) has no part-of-speech tag")]
    MissingPos { index: usize, text: String },
    #[error("index {0} out of range")]
    OutOfRange(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
}

/// Keyword specificity. The derived order is `Sparse < Partial < Complete`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Specificity {
    Sparse,
    Partial,
    Complete,
}

impl Specificity {
    pub const ALL: [Specificity; 3] = [Specificity::Complete, Specificity::Partial, Specificity::Sparse];

    pub fn as_str(self) -> &'static str {
        match self {
            Specificity::Complete => "complete",
            Specificity::Partial => "partial",
            Specificity::Sparse => "sparse",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    Active,
    Passive,
}

impl Voice {
    pub fn as_str(self) -> &'static str {
        match self {
            Voice::Active => "active",
            Voice::Passive => "passive",
        }
    }

    pub fn flipped(self) -> Voice {
        match self {
            Voice::Active => Voice::Passive,
            Voice::Passive => Voice::Active,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
}

impl Tense {
    pub const ALL: [Tense; 3] = [Tense::Past, Tense::Present, Tense::Future];

    pub fn as_str(self) -> &'static str {
        match self {
            Tense::Past => "past",
            Tense::Present => "present",
            Tense::Future => "future",
        }
    }
}

macro_rules! impl_from_str_display {
    ($ty:ty, $what:literal, [$($name:literal => $variant:expr),+ $(,)?]) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(format!("unknown {} {:?}", $what, other)),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

impl_from_str_display!(Specificity, "specificity", [
    "complete" => Specificity::Complete,
    "partial" => Specificity::Partial,
    "sparse" => Specificity::Sparse,
]);
impl_from_str_display!(Voice, "voice", ["active" => Voice::Active, "passive" => Voice::Passive]);
impl_from_str_display!(Tense, "tense", [
    "past" => Tense::Past,
    "present" => Tense::Present,
    "future" => Tense::Future,
]);

/// A labeled, contiguous argument span `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgSpan {
    pub role: RoleLabel,
    pub start: usize,
    pub end: usize,
    pub raw_tag: String,
}

impl ArgSpan {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index < self.end
    }

    pub fn overlaps(&self, other: &ArgSpan) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// An argument dropped from the headers at ingestion (continuation or
/// referent tags). Kept so recipes can detect relative clauses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedArg {
    pub raw_tag: String,
    pub start: usize,
    pub end: usize,
}

impl ExcludedArg {
    pub fn is_referent(&self) -> bool {
        let tag = self.raw_tag.strip_prefix("B-").unwrap_or(&self.raw_tag);
        tag.starts_with("R-")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateFrame {
    pub verb_index: usize,
    pub lemma: String,
    pub voice: Voice,
    pub tense: Tense,
    pub args: Vec<ArgSpan>,
    #[serde(default)]
    pub aux_indices: Vec<usize>,
    #[serde(default)]
    pub excluded: Vec<ExcludedArg>,
}

impl PredicateFrame {
    pub fn arg(&self, role: &RoleLabel) -> Option<&ArgSpan> {
        self.args.iter().find(|a| &a.role == role)
    }

    pub fn arg_index(&self, role: &RoleLabel) -> Option<usize> {
        self.args.iter().position(|a| &a.role == role)
    }

    /// Token indices of the predicate and its auxiliaries, sorted.
    pub fn verb_group(&self) -> Vec<usize> {
        let mut group = self.aux_indices.clone();
        group.push(self.verb_index);
        group.sort_unstable();
        group.dedup();
        group
    }

    pub fn has_relative_clause(&self) -> bool {
        self.excluded.iter().any(ExcludedArg::is_referent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrlSentence {
    pub tokens: Vec<Token>,
    pub frames: Vec<PredicateFrame>,
    #[serde(default)]
    pub chunks: Option<Vec<(usize, usize)>>,
}

impl SrlSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn texts(&self, start: usize, end: usize) -> Vec<&str> {
        self.tokens[start..end].iter().map(|t| t.text.as_str()).collect()
    }

    pub fn span_text(&self, start: usize, end: usize) -> String {
        self.texts(start, end).join(" ")
    }

    pub fn text(&self) -> String {
        self.span_text(0, self.tokens.len())
    }

    /// Noun chunks clipped to `[start, end)`, in sentence order.
    pub fn chunks_within(&self, start: usize, end: usize) -> Vec<(usize, usize)> {
        self.chunks
            .iter()
            .flatten()
            .filter_map(|&(s, e)| {
                let (s, e) = (s.max(start), e.min(end));
                (s < e).then_some((s, e))
            })
            .collect()
    }
}

pub(crate) fn fold(s: &str) -> String {
    s.to_lowercase()
}
