//! Prompts: a bracketed header of control codes followed by a context of
//! literal tokens and blanks.
//!
//! ```text
//! [VERB+active+past: comfort | AGENT+complete: the doctor | LOCATIVE+partial: in] <extra_id_0> , <extra_id_1> <extra_id_2> the athlete .
//! ```
//!
//! Compiled prompts also carry annotations that never reach the wire: the
//! source token of each literal, which header code each blank was opened
//! for, and the frame they came from. [`PromptSpec::wire_form`] strips them.

mod assign;
mod compile;
mod serialize;
mod target;

use serde::{Deserialize, Serialize};

use crate::srl::{Keyword, RoleLabel, Tense, Voice};

pub use assign::{assign_blanks, BlankAssignment, CodeRef};
pub use compile::{compile, eligible_token_boundaries, CompileOptions, ExtraBlanks, MaskSpec};
pub use serialize::{parse_prompt, parse_prompt_with, serialize, serialize_with, Sentinel};
pub use target::{build_target, build_target_output, parse_tagged_output, Label, Segment, TaggedOutput};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PromptError {
    #[error("parse error at character {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("frame {0} does not exist")]
    FrameOutOfRange(usize),
    #[error("argument {0} does not exist in the frame")]
    ArgOutOfRange(usize),
    #[error("role {0} is not present")]
    UnknownRole(RoleLabel),
    #[error("invalid keyword content {0:?}")]
    InvalidContent(String),
    #[error("boundary {0} is not eligible for a blank")]
    IneligibleBoundary(usize),
    #[error("prompt does not match sentence: {0}")]
    TargetMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbCode {
    pub voice: Voice,
    pub tense: Tense,
    pub lemma: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgCode {
    pub role: RoleLabel,
    pub keyword: Keyword,
    /// Identifier linking the code to its blank and, for compiled prompts,
    /// to the frame argument of the same index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
}

impl ArgCode {
    pub fn new(role: RoleLabel, keyword: Keyword) -> Self {
        ArgCode { role, keyword, id: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub verb: VerbCode,
    pub args: Vec<ArgCode>,
}

impl Header {
    /// Verb first (structurally), then AGENT, then PATIENT, then adjuncts.
    pub fn is_canonical(&self) -> bool {
        let rank = |r: &RoleLabel| match r {
            RoleLabel::Agent => 0,
            RoleLabel::Patient => 1,
            _ => 2,
        };
        self.args.windows(2).all(|w| rank(&w[0].role) <= rank(&w[1].role))
    }

    pub fn position(&self, role: &RoleLabel) -> Option<usize> {
        self.args.iter().position(|a| &a.role == role)
    }

    pub fn code(&self, role: &RoleLabel) -> Option<&ArgCode> {
        self.args.iter().find(|a| &a.role == role)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    Verb,
    Arg(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContextItem {
    Literal {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        token: Option<usize>,
    },
    Blank {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        owner: Option<Owner>,
    },
}

impl ContextItem {
    pub fn literal(text: impl Into<String>) -> Self {
        ContextItem::Literal { text: text.into(), token: None }
    }

    pub fn blank() -> Self {
        ContextItem::Blank { owner: None }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, ContextItem::Blank { .. })
    }

    pub fn text(&self) -> Option<&str> {
        match self {
            ContextItem::Literal { text, .. } => Some(text),
            ContextItem::Blank { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceArg {
    pub id: u32,
    pub role: RoleLabel,
    pub start: usize,
    pub end: usize,
}

/// Where a compiled prompt came from: the frame index and its layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRef {
    pub frame_idx: usize,
    pub args: Vec<SourceArg>,
    pub verb_group: Vec<usize>,
}

impl SourceRef {
    /// Whether token boundary `t | t+1` lies inside one argument or the verb group.
    pub fn joins(&self, t: usize) -> bool {
        self.args.iter().any(|a| a.start <= t && t + 1 < a.end)
            || (self.verb_group.contains(&t) && self.verb_group.contains(&(t + 1)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub header: Header,
    pub context: Vec<ContextItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceRef>,
}

impl PromptSpec {
    pub fn blank_count(&self) -> usize {
        self.context.iter().filter(|i| i.is_blank()).count()
    }

    /// Context index of the `ordinal`-th blank.
    pub fn blank_position(&self, ordinal: usize) -> Option<usize> {
        self.context.iter().enumerate().filter(|(_, i)| i.is_blank()).nth(ordinal).map(|(p, _)| p)
    }

    pub fn literals(&self) -> Vec<&str> {
        self.context.iter().filter_map(ContextItem::text).collect()
    }

    /// The prompt as it would come back from [`parse_prompt`]: annotations
    /// removed.
    pub fn wire_form(&self) -> PromptSpec {
        PromptSpec {
            header: Header {
                verb: self.header.verb.clone(),
                args: self.header.args.iter().map(|a| ArgCode::new(a.role.clone(), a.keyword.clone())).collect(),
            },
            context: self
                .context
                .iter()
                .map(|item| match item {
                    ContextItem::Literal { text, .. } => ContextItem::literal(text.clone()),
                    ContextItem::Blank { .. } => ContextItem::blank(),
                })
                .collect(),
            source: None,
        }
    }

    /// Context positions where a new blank may go: everywhere except
    /// between two source tokens of the same unmasked argument or of the
    /// verb group.
    pub fn eligible_positions(&self) -> Vec<usize> {
        (0..=self.context.len())
            .filter(|&p| {
                if p == 0 || p == self.context.len() {
                    return true;
                }
                let (Some(src), ContextItem::Literal { token: Some(a), .. }, ContextItem::Literal { token: Some(b), .. }) =
                    (&self.source, &self.context[p - 1], &self.context[p])
                else {
                    return true;
                };
                !(*b == a + 1 && src.joins(*a))
            })
            .collect()
    }

    pub(crate) fn next_arg_id(&self) -> u32 {
        let from_codes = self.header.args.iter().filter_map(|a| a.id);
        let from_blanks = self.context.iter().filter_map(|i| match i {
            ContextItem::Blank { owner: Some(Owner::Arg(id)) } => Some(*id),
            _ => None,
        });
        let from_source = self.source.iter().flat_map(|s| s.args.iter().map(|a| a.id));
        from_codes.chain(from_blanks).chain(from_source).max().map_or(0, |m| m + 1)
    }
}

/// Checks that keyword text fits the serialization grammar.
pub fn validate_content(content: &str) -> Result<(), PromptError> {
    let ok = !content.is_empty()
        && content != "*"
        && !content.contains(['[', ']', '|', '\n', '\r', '\t'])
        && content.split(' ').all(|w| !w.is_empty());
    if ok {
        Ok(())
    } else {
        Err(PromptError::InvalidContent(content.to_string()))
    }
}

pub(crate) fn validate_keyword(keyword: &Keyword) -> Result<(), PromptError> {
    match keyword {
        Keyword::Any => Ok(()),
        Keyword::Text { content, .. } => validate_content(content),
    }
}

/// Normalizes free text to single-space-separated words.
pub fn normalize_space(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
