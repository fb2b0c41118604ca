use serde::{Deserialize, Serialize};

use crate::morph::{self, Person};
use crate::prompt::{Label, PromptSpec, TaggedOutput};
use crate::srl::{classify_specificity, Keyword, RoleLabel, SrlSentence, Tense, Voice};

/// What a generation looked like to the checker: the generator's own tags,
/// or an SRL prediction over its plain text.
#[derive(Clone, Copy, Debug)]
pub enum Observed<'a> {
    Tagged(&'a TaggedOutput),
    Srl(&'a SrlSentence),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbCheck {
    pub lemma_ok: bool,
    pub tense_ok: bool,
    pub voice_ok: bool,
}

impl VerbCheck {
    pub fn all(self) -> bool {
        self.lemma_ok && self.tense_ok && self.voice_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgCheck {
    pub role: RoleLabel,
    pub role_ok: bool,
    pub content_ok: bool,
    pub spec_ok: bool,
    /// More than one span carried the role; the best match was scored.
    pub ambiguous: bool,
    pub matched: Option<String>,
}

impl ArgCheck {
    pub fn all(&self) -> bool {
        self.role_ok && self.content_ok && self.spec_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllabilityReport {
    pub verb: VerbCheck,
    pub args: Vec<ArgCheck>,
}

impl ControllabilityReport {
    pub fn all_ok(&self) -> bool {
        self.verb.all() && self.args.iter().all(ArgCheck::all)
    }
}

const PERSONS: [Person; 3] = [Person::FirstSingular, Person::ThirdSingular, Person::Plural];
const VOICES: [Voice; 2] = [Voice::Active, Voice::Passive];

fn generates(lemma: &str, voices: &[Voice], tenses: &[Tense], text: &str) -> bool {
    voices
        .iter()
        .any(|&v| tenses.iter().any(|&t| PERSONS.iter().any(|&p| morph::conjugate(lemma, v, t, p).to_lowercase() == text)))
}

/// Checks a surface verb group against `(lemma, voice, tense)`.
///
/// Analysis by generation comes first: the group matches a feature if some
/// conjugation carrying it produces the group verbatim. Groups no
/// conjugation explains (modals, progressives) are read by
/// [`morph::read_verb_group`].
pub fn verb_check(words: &[&str], lemma: &str, voice: Voice, tense: Tense) -> VerbCheck {
    let text = words.iter().map(|w| w.to_lowercase()).collect::<Vec<_>>().join(" ");
    if generates(lemma, &VOICES, &Tense::ALL, &text) {
        return VerbCheck {
            lemma_ok: true,
            voice_ok: generates(lemma, &[voice], &Tense::ALL, &text),
            tense_ok: generates(lemma, &VOICES, &[tense], &text),
        };
    }
    match morph::read_verb_group(words, lemma) {
        Some(r) => VerbCheck { lemma_ok: r.lemma_ok, voice_ok: r.voice == voice, tense_ok: r.tense == tense },
        None => VerbCheck::default(),
    }
}

fn fold_words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

fn subsequence(needle: &[String], hay: &[String]) -> bool {
    let mut rest = hay.iter();
    needle.iter().all(|n| rest.any(|h| h == n))
}

fn check_arg(role: &RoleLabel, keyword: &Keyword, spans: &[(Label, String)]) -> ArgCheck {
    let candidates: Vec<&String> = spans.iter().filter(|(l, _)| l.role() == Some(role)).map(|(_, t)| t).collect();
    let mut check = ArgCheck {
        role: role.clone(),
        role_ok: !candidates.is_empty(),
        content_ok: false,
        spec_ok: false,
        ambiguous: candidates.len() > 1,
        matched: None,
    };
    let kw = fold_words(keyword.content());
    let score = |span: &str| {
        let words = fold_words(span);
        (subsequence(&kw, &words), kw.iter().filter(|k| words.contains(k)).count())
    };
    // max_by_key keeps the last maximum; iterate reversed so ties go to the first span
    let Some(best) = candidates.iter().rev().max_by_key(|s| score(s)) else {
        return check;
    };
    check.matched = Some((*best).clone());
    match keyword {
        Keyword::Any => {
            check.content_ok = true;
            check.spec_ok = true;
        }
        Keyword::Text { spec, .. } => {
            let words = fold_words(best);
            check.content_ok = subsequence(&kw, &words);
            check.spec_ok = classify_specificity(&kw, &words).is_ok_and(|s| s == *spec);
        }
    }
    check
}

/// Compares a generation against the prompt's control codes.
///
/// Each argument code looks for a span carrying its role; content holds if
/// the keyword is a case-folded subsequence of that span, specificity if
/// the keyword classifies against it as coded (`*` passes both). On the SRL
/// path the frame whose lemma matches the code is used (the first frame
/// otherwise), and its detected features back up the surface check.
pub fn cycle_consistency(prompt: &PromptSpec, observed: Observed<'_>) -> ControllabilityReport {
    let v = &prompt.header.verb;
    let (verb, spans): (VerbCheck, Vec<(Label, String)>) = match observed {
        Observed::Tagged(out) => {
            let verb = out
                .tagged()
                .find(|(l, _)| **l == Label::Verb)
                .map(|(_, text)| verb_check(&text.split_whitespace().collect::<Vec<_>>(), &v.lemma, v.voice, v.tense))
                .unwrap_or_default();
            let spans = out.tagged().filter(|(l, _)| **l != Label::Verb).map(|(l, t)| (l.clone(), t.to_string())).collect();
            (verb, spans)
        }
        Observed::Srl(sentence) => {
            let frame =
                sentence.frames.iter().find(|f| f.lemma.eq_ignore_ascii_case(&v.lemma)).or_else(|| sentence.frames.first());
            match frame {
                None => (VerbCheck::default(), Vec::new()),
                Some(f) => {
                    let words: Vec<&str> = f.verb_group().iter().map(|&i| sentence.tokens[i].text.as_str()).collect();
                    let surface = verb_check(&words, &v.lemma, v.voice, v.tense);
                    let verb = if surface.all() {
                        surface
                    } else {
                        VerbCheck {
                            lemma_ok: surface.lemma_ok || f.lemma.eq_ignore_ascii_case(&v.lemma),
                            voice_ok: f.voice == v.voice,
                            tense_ok: f.tense == v.tense,
                        }
                    };
                    let spans =
                        f.args.iter().map(|a| (Label::Role(a.role.clone()), sentence.span_text(a.start, a.end))).collect();
                    (verb, spans)
                }
            }
        }
    };
    let args = prompt.header.args.iter().map(|code| check_arg(&code.role, &code.keyword, &spans)).collect();
    ControllabilityReport { verb, args }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clients::{mock_generate_output, srl_from_tagged};
    use crate::prompt::{parse_prompt, parse_tagged_output};

    #[test]
    fn mock_generation_is_consistent() {
        let p = parse_prompt("[VERB+passive+future: read | AGENT+partial: the doctor | TEMPORAL: *] <extra_id_0> the book <extra_id_1> <extra_id_2> .").unwrap();
        let out = mock_generate_output(&p);
        assert!(cycle_consistency(&p, Observed::Tagged(&out)).all_ok(), "{}", out.render());
        let srl = srl_from_tagged(&out);
        assert!(cycle_consistency(&p, Observed::Srl(&srl)).all_ok());
    }

    #[test]
    fn wrong_role_and_partial_keyword() {
        let p =
            parse_prompt("[VERB+active+past: comfort | TEMPORAL+partial: in] <extra_id_0> , the doctor <extra_id_1> .").unwrap();
        let out = parse_tagged_output("[LOCATIVE: in the hospital] , the doctor [VERB: comforted] .").unwrap();
        let r = cycle_consistency(&p, Observed::Tagged(&out));
        assert!(r.verb.all());
        assert!(!r.args[0].role_ok);

        let p =
            parse_prompt("[VERB+active+past: comfort | LOCATIVE+partial: in] <extra_id_0> , the doctor <extra_id_1> .").unwrap();
        let r = cycle_consistency(&p, Observed::Tagged(&out));
        assert!(r.all_ok());
    }

    #[test]
    fn verb_features() {
        assert_eq!(
            verb_check(&["was", "comforted"], "comfort", Voice::Active, Tense::Past),
            VerbCheck { lemma_ok: true, tense_ok: true, voice_ok: false }
        );
        assert_eq!(
            verb_check(&["read"], "read", Voice::Active, Tense::Past),
            VerbCheck { lemma_ok: true, tense_ok: true, voice_ok: true }
        );
        assert!(verb_check(&["will", "be", "watching"], "watch", Voice::Active, Tense::Future).all());
        assert!(!verb_check(&["watched"], "comfort", Voice::Active, Tense::Past).lemma_ok);
    }

    #[test]
    fn ambiguous_roles_pick_best_overlap() {
        let p =
            parse_prompt("[VERB+active+past: go | TEMPORAL+complete: on monday] <extra_id_0> <extra_id_1> <extra_id_2>").unwrap();
        let out = parse_tagged_output("[TEMPORAL: yesterday] [VERB: went] [TEMPORAL: on Monday]").unwrap();
        let r = cycle_consistency(&p, Observed::Tagged(&out));
        assert!(r.args[0].ambiguous);
        assert_eq!(r.args[0].matched.as_deref(), Some("on Monday"));
        assert!(r.all_ok());
    }
}
