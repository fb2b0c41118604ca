use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ContextItem, Owner, PromptError, PromptSpec};
use crate::srl::{RoleLabel, SrlSentence};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Verb,
    Role(RoleLabel),
}

impl Label {
    pub fn role(&self) -> Option<&RoleLabel> {
        match self {
            Label::Verb => None,
            Label::Role(r) => Some(r),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Verb => f.write_str("VERB"),
            Label::Role(r) => f.write_str(r.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Segment {
    Literal(String),
    Tagged { label: Label, text: String },
}

impl Segment {
    pub fn text(&self) -> &str {
        match self {
            Segment::Literal(t) | Segment::Tagged { text: t, .. } => t,
        }
    }
}

/// A generated sentence with bracketed role spans.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedOutput {
    pub segments: Vec<Segment>,
}

impl TaggedOutput {
    /// The plain sentence: segment texts joined by single spaces.
    pub fn text(&self) -> String {
        self.segments.iter().map(Segment::text).filter(|t| !t.is_empty()).collect::<Vec<_>>().join(" ")
    }

    /// The bracketed form, e.g. `[AGENT: the doctor] [VERB: comforted] it .`
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .segments
            .iter()
            .filter(|s| !s.text().is_empty())
            .map(|s| match s {
                Segment::Literal(t) => t.clone(),
                Segment::Tagged { label, text } => format!("[{label}: {text}]"),
            })
            .collect();
        parts.join(" ")
    }

    pub fn tagged(&self) -> impl Iterator<Item = (&Label, &str)> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Tagged { label, text } => Some((label, text.as_str())),
            Segment::Literal(_) => None,
        })
    }

    /// Pushes a literal, merging with a preceding literal.
    pub fn push_literal(&mut self, text: &str) {
        if text.is_empty() {
            return;
        }
        if let Some(Segment::Literal(prev)) = self.segments.last_mut() {
            prev.push(' ');
            prev.push_str(text);
        } else {
            self.segments.push(Segment::Literal(text.to_string()));
        }
    }
}

fn parse_error(text: &str, byte: usize, message: &str) -> PromptError {
    PromptError::Parse { offset: text[..byte].chars().count(), message: message.to_string() }
}

/// Parses bracketed generator output. A tag is `[NAME:` followed by text
/// and `]`, where NAME is uppercase (`VERB` or a role). Duplicate labels
/// are kept; literal text between tags is whitespace-normalized.
pub fn parse_tagged_output(text: &str) -> Result<TaggedOutput, PromptError> {
    let mut out = TaggedOutput::default();
    let mut rest_at = 0;
    while rest_at < text.len() {
        let rest = &text[rest_at..];
        let open = rest.find('[');
        let close = rest.find(']');
        match (open, close) {
            (_, Some(c)) if open.is_none_or(|o| c < o) => {
                return Err(parse_error(text, rest_at + c, "unbalanced ']'"));
            }
            (None, None) => {
                out.push_literal(&super::normalize_space(rest));
                break;
            }
            (Some(o), close) => {
                out.push_literal(&super::normalize_space(&rest[..o]));
                let Some(c) = close else {
                    return Err(parse_error(text, rest_at + o, "unbalanced '['"));
                };
                let inner = &rest[o + 1..c];
                if let Some(nested) = inner.find('[') {
                    return Err(parse_error(text, rest_at + o + 1 + nested, "nested '['"));
                }
                let Some((name, body)) = inner.split_once(':') else {
                    return Err(parse_error(text, rest_at + o, "tag lacks ':'"));
                };
                let label = if name == "VERB" {
                    Label::Verb
                } else {
                    Label::Role(name.parse().map_err(|_| parse_error(text, rest_at + o + 1, "invalid tag name"))?)
                };
                out.segments.push(Segment::Tagged { label, text: super::normalize_space(body) });
                rest_at += c + 1;
            }
            (None, Some(_)) => unreachable!("handled by the first arm"),
        }
    }
    Ok(out)
}

/// The training target for a compiled prompt as segments.
pub fn build_target_output(sentence: &SrlSentence, prompt: &PromptSpec) -> Result<TaggedOutput, PromptError> {
    let source = prompt.source.as_ref().ok_or_else(|| PromptError::TargetMismatch("prompt has no source".into()))?;
    let frame = sentence.frames.get(source.frame_idx).ok_or(PromptError::FrameOutOfRange(source.frame_idx))?;
    if frame.args.len() != source.args.len() {
        return Err(PromptError::TargetMismatch("frame layout differs from the prompt source".into()));
    }
    let mut masked: Vec<usize> = Vec::new();
    for item in &prompt.context {
        if let ContextItem::Blank { owner: Some(Owner::Arg(id)) } = item {
            let i = *id as usize;
            if i >= frame.args.len() {
                return Err(PromptError::TargetMismatch(format!("blank owned by unknown argument {id}")));
            }
            masked.push(i);
        }
    }
    let group = frame.verb_group();
    let expected: Vec<usize> =
        (0..sentence.len()).filter(|t| !group.contains(t) && !masked.iter().any(|&i| frame.args[i].contains(*t))).collect();
    let literals: Vec<Option<usize>> = prompt
        .context
        .iter()
        .filter_map(|i| match i {
            ContextItem::Literal { token, .. } => Some(*token),
            ContextItem::Blank { .. } => None,
        })
        .collect();
    if literals != expected.iter().map(|&t| Some(t)).collect::<Vec<_>>() {
        return Err(PromptError::TargetMismatch("context literals are not the unmasked sentence tokens".into()));
    }

    let mut out = TaggedOutput::default();
    let mut t = 0;
    while t < sentence.len() {
        if group.contains(&t) {
            let start = t;
            while t < sentence.len() && group.contains(&t) {
                t += 1;
            }
            out.segments.push(Segment::Tagged { label: Label::Verb, text: sentence.span_text(start, t) });
        } else if let Some(&i) = masked.iter().find(|&&i| frame.args[i].start == t) {
            let arg = &frame.args[i];
            out.segments
                .push(Segment::Tagged { label: Label::Role(arg.role.clone()), text: sentence.span_text(arg.start, arg.end) });
            t = arg.end;
        } else {
            out.push_literal(&sentence.tokens[t].text);
            t += 1;
        }
    }
    Ok(out)
}

/// The original sentence with masked spans and the verb group wrapped as
/// `[ROLE: text]`, everything else verbatim.
pub fn build_target(sentence: &SrlSentence, prompt: &PromptSpec) -> Result<String, PromptError> {
    build_target_output(sentence, prompt).map(|o| o.render())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TARGET_A: &str = "[LOCATIVE: In the operating room] , [AGENT: the doctor] [VERB: comforted] [PATIENT: the athlete] .";

    #[test]
    fn parses_target_row() {
        let out = parse_tagged_output(TARGET_A).unwrap();
        assert_eq!(out.tagged().count(), 4);
        assert_eq!(out.segments.len(), 6);
        assert_eq!(out.render(), TARGET_A);
        assert_eq!(out.text(), "In the operating room , the doctor comforted the athlete .");
    }

    #[test]
    fn plain_and_duplicate() {
        let plain = parse_tagged_output("just words here").unwrap();
        assert_eq!(plain.segments, vec![Segment::Literal("just words here".into())]);
        let dup = parse_tagged_output("[AGENT: x] [AGENT: y]").unwrap();
        assert_eq!(dup.tagged().filter(|(l, _)| **l == Label::Role(RoleLabel::Agent)).count(), 2);
    }

    #[test]
    fn unbalanced_brackets() {
        assert!(parse_tagged_output("[AGENT: x").is_err());
        assert!(parse_tagged_output("x ] y").is_err());
        assert!(parse_tagged_output("[AGENT: [x]]").is_err());
        assert!(parse_tagged_output("[nope]").is_err());
    }
}
