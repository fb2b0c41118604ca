//! JSON Lines corpus ingestion.
//!
//! One sentence per line:
//! `{"tokens":[{"text","pos","lemma"}],"frames":[{"verb_index","args":[{"tag","start","end"}]}],"chunks":[[s,e]]}`.
//! Frames may also carry `lemma`, `voice`, `tense` and `aux_indices` to
//! override rule-based detection, and args may carry a `function` tag used
//! to name numbered arguments.

use serde::{Deserialize, Serialize};

use super::{
    detect_aux_indices, detect_verb_features, map_role_label, ArgSpan, ExcludedArg, PredicateFrame, SrlError, SrlSentence, Tense,
    Token, Voice,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordToken {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordArg {
    pub tag: String,
    pub start: usize,
    pub end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordFrame {
    pub verb_index: usize,
    #[serde(default)]
    pub args: Vec<RecordArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voice: Option<Voice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tense: Option<Tense>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_indices: Option<Vec<usize>>,
}

/// The on-disk shape of one corpus line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub tokens: Vec<RecordToken>,
    #[serde(default)]
    pub frames: Vec<RecordFrame>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chunks: Option<Vec<(usize, usize)>>,
}

impl CorpusRecord {
    /// Serializable record for an ingested sentence. Detected features are
    /// written out explicitly so re-ingestion reproduces the sentence.
    pub fn from_sentence(sentence: &SrlSentence) -> Self {
        let frames = sentence
            .frames
            .iter()
            .map(|f| {
                let mut args: Vec<RecordArg> = f
                    .args
                    .iter()
                    .map(|a| RecordArg { tag: a.raw_tag.clone(), start: a.start, end: a.end, function: None })
                    .collect();
                // keep the role even when the raw tag would map differently
                for (arg, span) in args.iter_mut().zip(&f.args) {
                    if map_role_label(&arg.tag, None) != span.role {
                        arg.function = Some(span.role.as_str().to_string());
                    }
                }
                args.extend(f.excluded.iter().map(|e| RecordArg {
                    tag: e.raw_tag.clone(),
                    start: e.start,
                    end: e.end,
                    function: None,
                }));
                RecordFrame {
                    verb_index: f.verb_index,
                    args,
                    lemma: Some(f.lemma.clone()),
                    voice: Some(f.voice),
                    tense: Some(f.tense),
                    aux_indices: Some(f.aux_indices.clone()),
                }
            })
            .collect();
        CorpusRecord {
            tokens: sentence
                .tokens
                .iter()
                .map(|t| RecordToken { text: t.text.clone(), pos: t.pos.clone(), lemma: t.lemma.clone() })
                .collect(),
            frames,
            chunks: sentence.chunks.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRejection {
    pub line: usize,
    pub reason: String,
}

/// Parsed corpus: accepted sentences plus what was dropped along the way.
/// `lines[i]` is the 1-based source line of `sentences[i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub sentences: Vec<SrlSentence>,
    pub lines: Vec<usize>,
    pub warnings: Vec<Warning>,
    pub rejections: Vec<RecordRejection>,
}

fn is_excluded_tag(tag: &str) -> bool {
    let tag = tag.strip_prefix("B-").unwrap_or(tag);
    tag.starts_with("C-") || tag.starts_with("R-")
}

fn is_verb_tag(tag: &str) -> bool {
    matches!(tag.strip_prefix("B-").unwrap_or(tag), "V" | "VERB")
}

/// Validates one record. Returns the sentence and any non-fatal warnings;
/// an `Err` is a record-level rejection reason.
pub fn parse_record(record: CorpusRecord) -> Result<(SrlSentence, Vec<String>), String> {
    let mut warnings = Vec::new();
    if record.tokens.is_empty() {
        return Err("sentence has no tokens".into());
    }
    let tokens: Vec<Token> = record
        .tokens
        .into_iter()
        .enumerate()
        .map(|(index, t)| {
            if t.text.is_empty() || t.text.chars().any(char::is_whitespace) {
                Err(format!("token {index} ({:?}) is empty or contains whitespace", t.text))
            } else {
                Ok(Token { text: t.text, index, pos: t.pos.filter(|p| !p.is_empty()), lemma: t.lemma })
            }
        })
        .collect::<Result<_, _>>()?;
    let n = tokens.len();

    let mut sentence = SrlSentence { tokens, frames: Vec::new(), chunks: None };

    if let Some(chunks) = record.chunks {
        let mut kept = Vec::new();
        for (s, e) in chunks {
            if s < e && e <= n {
                kept.push((s, e));
            } else {
                warnings.push(format!("chunk [{s}, {e}) out of range; dropped"));
            }
        }
        sentence.chunks = Some(kept);
    }

    for (fi, frame) in record.frames.into_iter().enumerate() {
        let v = frame.verb_index;
        if v >= n {
            return Err(format!("frame {fi}: verb index {v} out of range"));
        }
        let mut args: Vec<ArgSpan> = Vec::new();
        let mut excluded = Vec::new();
        for arg in frame.args {
            if arg.start >= arg.end || arg.end > n {
                return Err(format!("frame {fi}: span [{}, {}) out of range for tag {}", arg.start, arg.end, arg.tag));
            }
            if is_verb_tag(&arg.tag) {
                continue;
            }
            if is_excluded_tag(&arg.tag) {
                warnings.push(format!("frame {fi}: excluded {} [{}, {})", arg.tag, arg.start, arg.end));
                excluded.push(ExcludedArg { raw_tag: arg.tag, start: arg.start, end: arg.end });
                continue;
            }
            let span = ArgSpan {
                role: map_role_label(&arg.tag, arg.function.as_deref()),
                start: arg.start,
                end: arg.end,
                raw_tag: arg.tag.strip_prefix("B-").unwrap_or(&arg.tag).to_string(),
            };
            if span.contains(v) {
                return Err(format!("frame {fi}: verb {v} inside {} span", span.raw_tag));
            }
            if let Some(other) = args.iter().find(|a| a.overlaps(&span)) {
                return Err(format!("frame {fi}: {} overlaps {}", span.raw_tag, other.raw_tag));
            }
            args.push(span);
        }
        args.sort_by_key(|a| a.start);

        let aux_indices = match frame.aux_indices {
            Some(aux) => {
                if let Some(&bad) = aux.iter().find(|&&i| i >= n || i == v || args.iter().any(|a| a.contains(i))) {
                    return Err(format!("frame {fi}: invalid auxiliary index {bad}"));
                }
                let mut aux = aux;
                aux.sort_unstable();
                aux.dedup();
                aux
            }
            None => detect_aux_indices(&sentence, v, &args),
        };

        let (lemma, voice, tense) = match (frame.lemma, frame.voice, frame.tense) {
            (Some(l), Some(vo), Some(t)) if !l.trim().is_empty() => (l, vo, t),
            (lemma, voice, tense) => {
                let detected = detect_verb_features(&sentence, v, &aux_indices, &args).map_err(|e| format!("frame {fi}: {e}"))?;
                (
                    lemma.filter(|l| !l.trim().is_empty()).unwrap_or(detected.lemma),
                    voice.unwrap_or(detected.voice),
                    tense.unwrap_or(detected.tense),
                )
            }
        };

        sentence.frames.push(PredicateFrame { verb_index: v, lemma, voice, tense, args, aux_indices, excluded });
    }
    Ok((sentence, warnings))
}

/// Parses a whole JSON Lines corpus. Blank lines are skipped. Malformed JSON
/// fails the whole parse; invalid records are rejected individually.
pub fn parse_corpus(text: &str) -> Result<Corpus, SrlError> {
    let mut corpus = Corpus::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord = serde_json::from_str(raw).map_err(|e| SrlError::Malformed { line, message: e.to_string() })?;
        match parse_record(record) {
            Ok((sentence, warnings)) => {
                for message in warnings {
                    log::warn!("line {line}: {message}");
                    corpus.warnings.push(Warning { line, message });
                }
                corpus.sentences.push(sentence);
                corpus.lines.push(line);
            }
            Err(reason) => {
                log::warn!("line {line}: rejected: {reason}");
                corpus.rejections.push(RecordRejection { line, reason });
            }
        }
    }
    Ok(corpus)
}
