use super::{ClientError, GenerateRequest, Generator, ScoreResponse, Scorer, SrlPredictor};
use crate::morph::{self, Person};
use crate::prompt::{
    assign_blanks, parse_prompt, parse_tagged_output, BlankAssignment, CodeRef, ContextItem, Label, PromptSpec, Segment,
    TaggedOutput,
};
use crate::srl::{ArgSpan, Keyword, PredicateFrame, RoleLabel, Specificity, SrlSentence, Tense, Token, Voice};

/// Filler words appended to keyword content: one for partial keywords, all
/// six for sparse ones (enough to clear the partial threshold).
pub const FILLER: [&str; 6] = ["lorem", "ipsum", "dolor", "sit", "amet", "consectetur"];

/// Stand-in phrase realizing a `*` keyword.
pub fn placeholder(role: &RoleLabel) -> &'static str {
    match role {
        RoleLabel::Agent => "someone",
        RoleLabel::Patient => "something",
        RoleLabel::Temporal => "at some point",
        RoleLabel::Locative => "somewhere",
        RoleLabel::Manner => "somehow",
        RoleLabel::Cause => "for some reason",
        RoleLabel::Extent => "somewhat",
        RoleLabel::Purpose => "for some purpose",
        RoleLabel::Discourse => "anyway",
        RoleLabel::Goal => "to someone",
        RoleLabel::Adverbial => "then",
        RoleLabel::Modal => "can",
        RoleLabel::Negation => "not",
        RoleLabel::Direction => "away",
        RoleLabel::Predicative => "as something",
        RoleLabel::Comitative => "with someone",
        RoleLabel::Other(_) => "something",
    }
}

fn realize_keyword(role: &RoleLabel, keyword: &Keyword) -> String {
    match keyword {
        Keyword::Any => placeholder(role).to_string(),
        Keyword::Text { content, spec: Specificity::Complete } => content.clone(),
        Keyword::Text { content, spec: Specificity::Partial } => format!("{content} {}", FILLER[0]),
        Keyword::Text { content, spec: Specificity::Sparse } => format!("{content} {}", FILLER.join(" ")),
    }
}

fn subject_person(prompt: &PromptSpec) -> Person {
    let subject = match prompt.header.verb.voice {
        Voice::Active => RoleLabel::Agent,
        Voice::Passive => RoleLabel::Patient,
    };
    match prompt.header.code(&subject) {
        Some(code) => morph::subject_person(&realize_keyword(&code.role, &code.keyword)),
        None => Person::ThirdSingular,
    }
}

/// A literal do/does/did before the verb's blank ("does he know", "How
/// did they"): the verb then surfaces as the bare lemma.
fn do_before_verb(prompt: &PromptSpec, assignment: &BlankAssignment) -> bool {
    let Some(at) = assignment.blank_of(CodeRef::Verb).and_then(|b| prompt.blank_position(b)) else { return false };
    prompt.context[..at].iter().filter_map(ContextItem::text).any(|t| matches!(t.to_lowercase().as_str(), "do" | "does" | "did"))
}

/// Deterministic realization of a prompt: every code fills the blank
/// [`assign_blanks`] gives it, literals are copied through, extra blanks
/// stay empty.
pub fn mock_generate_output(prompt: &PromptSpec) -> TaggedOutput {
    let assignment = assign_blanks(prompt);
    let person = subject_person(prompt);
    let passive = prompt.header.verb.voice == Voice::Passive;
    let do_support = !passive && prompt.header.verb.tense != Tense::Future && do_before_verb(prompt, &assignment);
    let mut out = TaggedOutput::default();
    let emit = |out: &mut TaggedOutput, code: CodeRef| match code {
        CodeRef::Verb => {
            let v = &prompt.header.verb;
            let text = if do_support { v.lemma.clone() } else { morph::conjugate(&v.lemma, v.voice, v.tense, person) };
            out.segments.push(Segment::Tagged { label: Label::Verb, text });
        }
        CodeRef::Arg(i) => {
            let code = &prompt.header.args[i];
            let text = realize_keyword(&code.role, &code.keyword);
            if passive && code.role == RoleLabel::Agent && !text.to_lowercase().starts_with("by ") {
                out.push_literal("by");
            }
            out.segments.push(Segment::Tagged { label: Label::Role(code.role.clone()), text });
        }
    };
    let mut blank = 0;
    for item in &prompt.context {
        match item {
            ContextItem::Literal { text, .. } => out.push_literal(text),
            ContextItem::Blank { .. } => {
                for &code in &assignment.blanks[blank] {
                    emit(&mut out, code);
                }
                blank += 1;
            }
        }
    }
    for &code in &assignment.trailing {
        emit(&mut out, code);
    }
    out
}

/// [`mock_generate_output`] rendered in the bracketed format.
pub fn mock_generate(prompt: &PromptSpec) -> String {
    mock_generate_output(prompt).render()
}

const AUX_WORDS: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "been", "being", "will", "shall", "have", "has", "had", "do", "does", "did", "going",
    "to", "would", "can", "could", "may", "might", "must", "should",
];

/// Rebuilds an SRL analysis from tagged output: the `VERB` span becomes the
/// predicate (first non-auxiliary word, auxiliaries before it, particles
/// after), every other tag an argument. Acts as an SRL predictor that
/// reads the generator's own annotations.
pub fn srl_from_tagged(output: &TaggedOutput) -> SrlSentence {
    let mut tokens: Vec<Token> = Vec::new();
    let mut args = Vec::new();
    let mut verb: Option<(usize, usize)> = None;
    for seg in &output.segments {
        let start = tokens.len();
        for w in seg.text().split_whitespace() {
            tokens.push(Token { text: w.to_string(), index: tokens.len(), pos: None, lemma: None });
        }
        let end = tokens.len();
        if start == end {
            continue;
        }
        match seg {
            Segment::Tagged { label: Label::Verb, .. } if verb.is_none() => verb = Some((start, end)),
            Segment::Tagged { label: Label::Role(role), .. } => {
                args.push(ArgSpan { role: role.clone(), start, end, raw_tag: role.as_str().to_string() })
            }
            _ => {}
        }
    }
    let mut frames = Vec::new();
    if let Some((start, end)) = verb {
        let words: Vec<String> = tokens[start..end].iter().map(|t| t.text.to_lowercase()).collect();
        let k = words.iter().position(|w| !AUX_WORDS.contains(&w.as_str())).unwrap_or(words.len() - 1);
        let mut lemma = morph::lemmatize(&words[k]);
        for p in &words[k + 1..] {
            lemma.push(' ');
            lemma.push_str(p);
        }
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let reading = morph::read_verb_group(&refs, &lemma);
        let verb_index = start + k;
        tokens[verb_index].lemma = Some(lemma.clone());
        frames.push(PredicateFrame {
            verb_index,
            lemma,
            voice: reading.map_or(Voice::Active, |r| r.voice),
            tense: reading.map_or(crate::srl::Tense::Present, |r| r.tense),
            args,
            aux_indices: (start..verb_index).collect(),
            excluded: Vec::new(),
        });
    }
    SrlSentence { tokens, frames, chunks: None }
}

/// Generator backed by [`mock_generate`]. Constraints are not honored; a
/// banned phrase surviving into the output is logged, not an error.
#[derive(Clone, Copy, Debug, Default)]
pub struct MockGenerator;

impl Generator for MockGenerator {
    fn generate(&self, request: &GenerateRequest) -> Result<Vec<String>, ClientError> {
        request.validate()?;
        if request.max_candidates == 0 {
            return Ok(Vec::new());
        }
        let prompt = parse_prompt(&request.prompt).map_err(|e| ClientError::InvalidRequest(e.to_string()))?;
        let text = mock_generate(&prompt);
        for banned in &request.banned_phrases {
            if !banned.is_empty() && text.contains(banned.as_str()) {
                log::warn!("mock generator does not support constraints; output contains banned phrase {banned:?}");
            }
        }
        Ok(vec![text])
    }
}

/// SRL predictor that reads bracketed tags back out of its input.
#[derive(Clone, Copy, Debug, Default)]
pub struct MockSrl;

impl SrlPredictor for MockSrl {
    fn predict(&self, text: &str) -> Result<SrlSentence, ClientError> {
        if text.trim().is_empty() {
            return Err(ClientError::Schema { request_id: "mock".into(), message: "empty text".into() });
        }
        let out =
            parse_tagged_output(text).map_err(|e| ClientError::Schema { request_id: "mock".into(), message: e.to_string() })?;
        Ok(srl_from_tagged(&out))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Scorer assigning each text the mean of per-token pseudo-losses: a fixed
/// hash of the word mapped into `[1, 3)`, or 4.5 for filler words and
/// immediate repeats, so degenerate text scores worse.
#[derive(Clone, Copy, Debug, Default)]
pub struct MockScorer;

impl MockScorer {
    pub fn loss(text: &str) -> f64 {
        let words: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
        if words.is_empty() {
            return 5.0;
        }
        let total: f64 = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                if FILLER.contains(&w.as_str()) || (i > 0 && words[i - 1] == *w) {
                    4.5
                } else {
                    1.0 + (fnv1a(w.as_bytes()) % 1000) as f64 / 500.0
                }
            })
            .sum();
        total / words.len() as f64
    }
}

impl Scorer for MockScorer {
    fn score(&self, texts: &[String]) -> Result<Vec<ScoreResponse>, ClientError> {
        Ok(texts.iter().map(|t| ScoreResponse::from_loss(Self::loss(t)).expect("mock losses are positive")).collect())
    }
}
