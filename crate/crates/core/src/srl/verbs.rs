//! Rule-based voice/tense detection over provided POS tags.

use serde::{Deserialize, Serialize};

use super::{fold, ArgSpan, SrlError, SrlSentence, Tense, Token, Voice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbFeatures {
    pub voice: Voice,
    pub tense: Tense,
    pub lemma: String,
}

const BE_FORMS: &[&str] = &["be", "am", "is", "are", "was", "were", "been", "being", "'s", "'re", "'m"];
const HAVE_FORMS: &[&str] = &["have", "has", "had", "having", "'ve", "'d"];
const DO_FORMS: &[&str] = &["do", "does", "did"];
const MODALS: &[&str] = &["will", "shall", "would", "should", "can", "could", "may", "might", "must", "'ll", "wo", "ca"];
const FUTURE_MODALS: &[&str] = &["will", "shall", "'ll", "wo"];
const PAST_FINITE: &[&str] = &["was", "were", "had", "did"];

fn lower(token: &Token) -> String {
    fold(&token.text)
}

fn is_be(token: &Token) -> bool {
    token.lemma.as_deref().map(fold).as_deref() == Some("be") || BE_FORMS.contains(&lower(token).as_str())
}

fn is_aux_word(token: &Token) -> bool {
    let w = lower(token);
    token.pos.as_deref() == Some("MD")
        || BE_FORMS.contains(&w.as_str())
        || HAVE_FORMS.contains(&w.as_str())
        || DO_FORMS.contains(&w.as_str())
        || MODALS.contains(&w.as_str())
}

fn in_any_span(args: &[ArgSpan], index: usize) -> bool {
    args.iter().any(|a| a.contains(index))
}

/// Auxiliaries of the predicate at `verb_index`: the maximal run of auxiliary
/// words immediately to its left (including a `going to` periphrasis), never
/// crossing into an argument span.
pub fn detect_aux_indices(sentence: &SrlSentence, verb_index: usize, args: &[ArgSpan]) -> Vec<usize> {
    let tokens = &sentence.tokens;
    let mut aux = Vec::new();
    let mut j = verb_index;
    while j > 0 {
        let i = j - 1;
        if in_any_span(args, i) {
            break;
        }
        let w = lower(&tokens[i]);
        if w == "to" && i > 0 && lower(&tokens[i - 1]) == "going" && !in_any_span(args, i - 1) {
            aux.push(i);
            aux.push(i - 1);
            j = i - 1;
            continue;
        }
        if is_aux_word(&tokens[i]) {
            aux.push(i);
            j = i;
            continue;
        }
        break;
    }
    aux.sort_unstable();
    aux
}

fn is_going_to(sentence: &SrlSentence, aux: &[usize]) -> bool {
    aux.windows(2).any(|w| lower(&sentence.tokens[w[0]]) == "going" && lower(&sentence.tokens[w[1]]) == "to" && w[1] == w[0] + 1)
}

fn is_past_finite(token: &Token) -> bool {
    match token.pos.as_deref() {
        Some(pos) => pos == "VBD",
        None => PAST_FINITE.contains(&lower(token).as_str()),
    }
}

/// A `do` form left of the predicate separated from it only by argument
/// tokens, as in question inversion ("did the Huguenots defend").
fn inverted_do<'a>(sentence: &'a SrlSentence, verb_index: usize, args: &[ArgSpan]) -> Option<&'a Token> {
    let mut j = verb_index;
    let mut crossed_arg = false;
    while j > 0 {
        let i = j - 1;
        let tok = &sentence.tokens[i];
        if in_any_span(args, i) {
            crossed_arg = true;
        } else if crossed_arg && DO_FORMS.contains(&lower(tok).as_str()) {
            return Some(tok);
        } else {
            return None;
        }
        j = i;
    }
    None
}

/// Detects voice, tense and lemma of a predicate.
///
/// Passive iff a form of *be* among the auxiliaries precedes a past
/// participle (`VBN`). Future iff a future modal or `going to` is present.
/// Otherwise the tense follows the finite verb (first auxiliary, an inverted
/// *do*, or the predicate itself): past iff it is a past form.
pub fn detect_verb_features(
    sentence: &SrlSentence,
    verb_index: usize,
    aux_indices: &[usize],
    args: &[ArgSpan],
) -> Result<VerbFeatures, SrlError> {
    let verb = sentence.tokens.get(verb_index).ok_or(SrlError::OutOfRange(verb_index))?;
    let pos = verb.pos.as_deref().ok_or_else(|| SrlError::MissingPos { index: verb_index, text: verb.text.clone() })?;
    let lemma = verb.lemma.clone().filter(|l| !l.trim().is_empty()).unwrap_or_else(|| lower(verb));

    let mut aux: Vec<usize> = aux_indices.iter().copied().filter(|&i| i < verb_index).collect();
    aux.sort_unstable();
    let aux_tokens: Vec<&Token> = aux.iter().map(|&i| &sentence.tokens[i]).collect();

    let passive = pos == "VBN" && aux_tokens.iter().any(|t| is_be(t));
    let voice = if passive { Voice::Passive } else { Voice::Active };

    let future = aux_tokens.iter().any(|t| FUTURE_MODALS.contains(&lower(t).as_str())) || is_going_to(sentence, &aux);
    let tense = if future {
        Tense::Future
    } else if let Some(finite) = aux_tokens.first() {
        if is_past_finite(finite) {
            Tense::Past
        } else {
            Tense::Present
        }
    } else if let Some(do_token) = inverted_do(sentence, verb_index, args) {
        if is_past_finite(do_token) {
            Tense::Past
        } else {
            Tense::Present
        }
    } else if pos == "VBD" {
        Tense::Past
    } else {
        Tense::Present
    };

    Ok(VerbFeatures { voice, tense, lemma })
}
