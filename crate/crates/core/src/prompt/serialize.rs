use std::fmt::Write as _;

use super::{validate_content, ArgCode, ContextItem, Header, PromptError, PromptSpec, VerbCode};
use crate::srl::{Keyword, RoleLabel, Specificity, Tense, Voice};

/// Blank rendering. The default matches T5 sentinels: `<extra_id_N>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentinel {
    pub prefix: String,
    pub suffix: String,
}

impl Default for Sentinel {
    fn default() -> Self {
        Sentinel { prefix: "<extra_id_".into(), suffix: ">".into() }
    }
}

impl Sentinel {
    pub fn render(&self, n: usize) -> String {
        format!("{}{n}{}", self.prefix, self.suffix)
    }

    pub fn parse(&self, token: &str) -> Option<usize> {
        let digits = token.strip_prefix(&self.prefix)?.strip_suffix(&self.suffix)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
            return None;
        }
        digits.parse().ok()
    }
}

fn write_keyword(out: &mut String, role: &RoleLabel, keyword: &Keyword) {
    match keyword {
        Keyword::Any => {
            let _ = write!(out, "{role}: *");
        }
        Keyword::Text { content, spec } => {
            let _ = write!(out, "{role}+{spec}: {content}");
        }
    }
}

pub fn serialize(prompt: &PromptSpec) -> String {
    serialize_with(prompt, &Sentinel::default())
}

pub fn serialize_with(prompt: &PromptSpec, sentinel: &Sentinel) -> String {
    let verb = &prompt.header.verb;
    let mut out = format!("[VERB+{}+{}: {}", verb.voice, verb.tense, verb.lemma);
    for arg in &prompt.header.args {
        out.push_str(" | ");
        write_keyword(&mut out, &arg.role, &arg.keyword);
    }
    out.push(']');
    let mut blanks = 0;
    for item in &prompt.context {
        out.push(' ');
        match item {
            ContextItem::Literal { text, .. } => out.push_str(text),
            ContextItem::Blank { .. } => {
                out.push_str(&sentinel.render(blanks));
                blanks += 1;
            }
        }
    }
    out
}

pub fn parse_prompt(text: &str) -> Result<PromptSpec, PromptError> {
    parse_prompt_with(text, &Sentinel::default())
}

struct Cursor<'a> {
    text: &'a str,
}

impl Cursor<'_> {
    fn error(&self, byte: usize, message: impl Into<String>) -> PromptError {
        let offset = self.text[..byte.min(self.text.len())].chars().count();
        PromptError::Parse { offset, message: message.into() }
    }
}

/// Parses the prompt grammar. The parser is strict: single spaces only, no
/// trailing whitespace, blanks numbered `0..k` left to right.
pub fn parse_prompt_with(text: &str, sentinel: &Sentinel) -> Result<PromptSpec, PromptError> {
    let cur = Cursor { text };
    if !text.starts_with('[') {
        return Err(cur.error(0, "expected '[' opening the header"));
    }
    let close = text.find(']').ok_or_else(|| cur.error(text.len(), "unbalanced '[': header is not closed"))?;
    if let Some(extra) = text[1..close].find('[') {
        return Err(cur.error(extra + 1, "unexpected '[' inside header"));
    }

    let mut codes = Vec::new();
    let mut start = 1;
    for piece in text[1..close].split(" | ") {
        codes.push((start, piece));
        start += piece.len() + 3;
    }
    let (verb_at, verb_src) = codes[0];
    let verb = parse_verb_code(&cur, verb_at, verb_src)?;
    let args = codes[1..].iter().map(|&(at, src)| parse_arg_code(&cur, at, src)).collect::<Result<Vec<_>, _>>()?;

    let rest = &text[close + 1..];
    let mut context = Vec::new();
    if !rest.is_empty() {
        let Some(body) = rest.strip_prefix(' ') else {
            return Err(cur.error(close + 1, "expected a single space after ']'"));
        };
        if let Some(stray) = body.find(']') {
            return Err(cur.error(close + 2 + stray, "unbalanced ']' in context"));
        }
        let mut at = close + 2;
        let mut blanks = 0;
        for word in body.split(' ') {
            if word.is_empty() {
                return Err(cur.error(at, "empty token (double or trailing space)"));
            }
            if word.starts_with('[') {
                return Err(cur.error(at, "unexpected '[' in context"));
            }
            match sentinel.parse(word) {
                Some(n) if n == blanks => {
                    context.push(ContextItem::blank());
                    blanks += 1;
                }
                Some(n) => return Err(cur.error(at, format!("blank {n} out of order, expected {blanks}"))),
                None => context.push(ContextItem::literal(word)),
            }
            at += word.len() + 1;
        }
    }
    Ok(PromptSpec { header: Header { verb, args }, context, source: None })
}

fn split_code<'a>(cur: &Cursor, at: usize, src: &'a str) -> Result<(&'a str, &'a str), PromptError> {
    let sep = src.find(": ").ok_or_else(|| cur.error(at, format!("control code {src:?} lacks ': '")))?;
    let value = &src[sep + 2..];
    if value.is_empty() {
        return Err(cur.error(at + sep + 2, "empty code content"));
    }
    Ok((&src[..sep], value))
}

fn parse_verb_code(cur: &Cursor, at: usize, src: &str) -> Result<VerbCode, PromptError> {
    let (name, lemma) = split_code(cur, at, src)?;
    let parts: Vec<&str> = name.split('+').collect();
    if parts[0] != "VERB" {
        return Err(cur.error(at, "header must start with the VERB code"));
    }
    if parts.len() != 3 {
        return Err(cur.error(at, "verb code must be VERB+<voice>+<tense>"));
    }
    let voice: Voice = parts[1].parse().map_err(|e: String| cur.error(at + 5, e))?;
    let tense: Tense = parts[2].parse().map_err(|e: String| cur.error(at + 6 + parts[1].len(), e))?;
    validate_content(lemma).map_err(|_| cur.error(at + name.len() + 2, format!("invalid lemma {lemma:?}")))?;
    Ok(VerbCode { voice, tense, lemma: lemma.to_string() })
}

fn parse_arg_code(cur: &Cursor, at: usize, src: &str) -> Result<ArgCode, PromptError> {
    let (name, content) = split_code(cur, at, src)?;
    let content_at = at + name.len() + 2;
    let (role_name, spec) = match name.split_once('+') {
        Some((r, s)) => (r, Some(s)),
        None => (name, None),
    };
    if role_name == "VERB" {
        return Err(cur.error(at, "VERB code may only appear first"));
    }
    let role: RoleLabel = role_name.parse().map_err(|e| cur.error(at, format!("{e}")))?;
    let keyword = match (spec, content) {
        (None, "*") => Keyword::Any,
        (None, _) => return Err(cur.error(at + role_name.len(), "missing specificity")),
        (Some(_), "*") => return Err(cur.error(content_at, "'*' content takes no specificity")),
        (Some(s), content) => {
            let spec: Specificity = s.parse().map_err(|e: String| cur.error(at + role_name.len() + 1, e))?;
            validate_content(content).map_err(|_| cur.error(content_at, format!("invalid content {content:?}")))?;
            Keyword::Text { content: content.to_string(), spec }
        }
    };
    Ok(ArgCode::new(role, keyword))
}
