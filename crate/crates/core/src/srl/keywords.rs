use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fold, ArgSpan, Specificity, SrlError, SrlSentence};

/// Keyword content attached to an argument control code: either the `*`
/// symbol (nothing specified, no specificity) or literal text with its
/// specificity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Keyword {
    Any,
    Text { content: String, spec: Specificity },
}

/// Keyword candidates are keywords paired with the specificity they earn
/// against their source span.
pub type KeywordCandidate = Keyword;

impl Keyword {
    pub fn text(content: impl Into<String>, spec: Specificity) -> Self {
        Keyword::Text { content: content.into(), spec }
    }

    pub fn content(&self) -> &str {
        match self {
            Keyword::Any => "*",
            Keyword::Text { content, .. } => content,
        }
    }

    pub fn spec(&self) -> Option<Specificity> {
        match self {
            Keyword::Any => None,
            Keyword::Text { spec, .. } => Some(*spec),
        }
    }

    /// Specificity used for keying keyword tables; `*` counts as sparse.
    pub fn spec_key(&self) -> Specificity {
        self.spec().unwrap_or(Specificity::Sparse)
    }

    pub fn is_any(&self) -> bool {
        matches!(self, Keyword::Any)
    }
}

const MAX_PARTIAL_MISSING: usize = 5;
const RANDOM_WINDOWS: usize = 3;

fn is_subsequence(needle: &[String], haystack: &[String]) -> bool {
    let mut rest = haystack.iter();
    needle.iter().all(|n| rest.any(|h| h == n))
}

/// Classifies how much of `span_tokens` the keyword covers.
///
/// Comparison is case-folded. The keyword must be a (not necessarily
/// contiguous) subsequence of the span; the single token `*` is reported as
/// sparse.
pub fn classify_specificity<K: AsRef<str>, S: AsRef<str>>(
    keyword_tokens: &[K],
    span_tokens: &[S],
) -> Result<Specificity, SrlError> {
    if keyword_tokens.len() == 1 && keyword_tokens[0].as_ref() == "*" {
        return Ok(Specificity::Sparse);
    }
    if keyword_tokens.is_empty() {
        return Err(SrlError::EmptyKeyword);
    }
    let kw: Vec<String> = keyword_tokens.iter().map(|t| fold(t.as_ref())).collect();
    let span: Vec<String> = span_tokens.iter().map(|t| fold(t.as_ref())).collect();
    if !is_subsequence(&kw, &span) {
        return Err(SrlError::NotSubsequence { keyword: kw.join(" "), span: span.join(" ") });
    }
    let missing = span.len() - kw.len();
    Ok(match missing {
        0 => Specificity::Complete,
        m if m <= MAX_PARTIAL_MISSING => Specificity::Partial,
        _ => Specificity::Sparse,
    })
}

/// Keyword candidates for one argument span, deduplicated in a fixed order:
/// the exact span, every shorter prefix, noun chunks clipped to the span,
/// seeded random sub-windows (a stand-in for syntactic subtrees) and `*`.
///
/// With `lowercase` set, contents are case-folded before deduplication.
pub fn extract_keyword_candidates(span: &ArgSpan, sentence: &SrlSentence, seed: u64, lowercase: bool) -> Vec<Keyword> {
    let tokens = sentence.texts(span.start, span.end);
    let n = tokens.len();
    let mut windows: Vec<(usize, usize)> = Vec::new();

    windows.push((0, n));
    for len in 1..n {
        windows.push((0, len));
    }
    for (s, e) in sentence.chunks_within(span.start, span.end) {
        windows.push((s - span.start, e - span.start));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_WINDOWS {
        let start = rng.gen_range(0..n);
        let len = rng.gen_range(1..=n - start);
        windows.push((start, start + len));
    }

    let mut out: Vec<Keyword> = Vec::new();
    for (s, e) in windows {
        let words = &tokens[s..e];
        let mut content = words.join(" ");
        if lowercase {
            content = fold(&content);
        }
        // windows are contiguous slices of the span, so classification cannot fail
        let spec = classify_specificity(words, &tokens).expect("window is a subsequence of its span");
        let candidate = Keyword::Text { content, spec };
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out.push(Keyword::Any);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srl::{RoleLabel, Token};

    fn sentence(words: &[&str]) -> SrlSentence {
        SrlSentence {
            tokens: words
                .iter()
                .enumerate()
                .map(|(i, w)| Token { text: w.to_string(), index: i, pos: None, lemma: None })
                .collect(),
            frames: vec![],
            chunks: None,
        }
    }

    fn span(start: usize, end: usize) -> ArgSpan {
        ArgSpan { role: RoleLabel::Locative, start, end, raw_tag: "ARGM-LOC".into() }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_specificity(&["the", "doctor"], &["the", "doctor"]).unwrap(), Specificity::Complete);
        assert_eq!(classify_specificity(&["in"], &["In", "the", "operating", "room"]).unwrap(), Specificity::Partial);
        let ten: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        assert_eq!(classify_specificity(&["w3"], &ten).unwrap(), Specificity::Sparse);
        assert_eq!(classify_specificity(&["*"], &ten).unwrap(), Specificity::Sparse);
    }

    #[test]
    fn partial_threshold_is_five_missing() {
        let span: Vec<String> = (0..7).map(|i| format!("w{i}")).collect();
        assert_eq!(classify_specificity(&span[..2], &span).unwrap(), Specificity::Partial);
        assert_eq!(classify_specificity(&span[..1], &span).unwrap(), Specificity::Sparse);
    }

    #[test]
    fn non_subsequence_is_rejected() {
        assert!(matches!(classify_specificity(&["room", "the"], &["the", "room"]), Err(SrlError::NotSubsequence { .. })));
        let empty: [&str; 0] = [];
        assert_eq!(classify_specificity(&empty, &["a"]), Err(SrlError::EmptyKeyword));
    }

    #[test]
    fn candidates_for_locative_span() {
        let s = sentence(&["In", "the", "operating", "room", ",", "the", "doctor"]);
        let cands = extract_keyword_candidates(&span(0, 4), &s, 3, true);
        assert_eq!(cands[0], Keyword::text("in the operating room", Specificity::Complete));
        assert!(cands.contains(&Keyword::text("in", Specificity::Partial)));
        assert_eq!(cands.last(), Some(&Keyword::Any));
    }

    #[test]
    fn single_token_span_yields_exact_and_star() {
        let s = sentence(&["yesterday", "it", "rained"]);
        let cands = extract_keyword_candidates(&span(0, 1), &s, 11, false);
        assert_eq!(cands, vec![Keyword::text("yesterday", Specificity::Complete), Keyword::Any]);
    }

    #[test]
    fn candidates_are_deterministic_and_consistent() {
        let mut s = sentence(&["in", "the", "very", "big", "old", "operating", "room", "of", "the", "clinic"]);
        s.chunks = Some(vec![(1, 7), (8, 10)]);
        let a = extract_keyword_candidates(&span(0, 10), &s, 42, false);
        let b = extract_keyword_candidates(&span(0, 10), &s, 42, false);
        assert_eq!(a, b);
        assert!(a.contains(&Keyword::text("the clinic", Specificity::Sparse)));
        let words = s.texts(0, 10);
        for c in &a {
            if let Keyword::Text { content, spec } = c {
                let kw: Vec<&str> = content.split(' ').collect();
                assert_eq!(classify_specificity(&kw, &words).unwrap(), *spec);
            }
        }
    }
}
