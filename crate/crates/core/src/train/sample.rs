use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{KeywordTable, Provenance, Strategy, TrainingExample};
use crate::prompt::{
    build_target, compile, parse_prompt, parse_tagged_output, serialize, CompileOptions, ExtraBlanks, Label, MaskSpec,
    PromptError, PromptSpec, Segment,
};
use crate::srl::{extract_keyword_candidates, Keyword, RoleLabel, Specificity, SrlSentence, Tense, ADJUNCT_ROLES};

const MAX_BLANK_DRAW: usize = 10;

/// Samples the training prompt for one frame.
///
/// Draw order, all from one seeded stream: mask everything with
/// probability 1/2, otherwise `ceil(u * n)` arguments with `u` uniform in
/// `(0, 1]`, chosen without replacement; a blank count uniform in `[0, 10)`
/// raised to at least the number masked, whose excess over it becomes extra
/// blanks; one lowercased keyword candidate per masked argument; the
/// compile seed.
pub fn sample_positive_prompt(sentence: &SrlSentence, frame_idx: usize, seed: u64) -> Result<PromptSpec, PromptError> {
    let frame = sentence.frames.get(frame_idx).ok_or(PromptError::FrameOutOfRange(frame_idx))?;
    let n = frame.args.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask_all = rng.gen_bool(0.5);
    let mut masked: Vec<usize> = if mask_all || n == 0 {
        (0..n).collect()
    } else {
        let u = 1.0 - rng.gen::<f64>();
        let k = ((u * n as f64).ceil() as usize).clamp(1, n);
        index::sample(&mut rng, n, k).into_vec()
    };
    masked.sort_unstable();
    let blanks = rng.gen_range(0..MAX_BLANK_DRAW).max(masked.len());
    let extras = blanks - masked.len();

    let mut keywords = BTreeMap::new();
    for &i in &masked {
        let candidates = extract_keyword_candidates(&frame.args[i], sentence, rng.gen(), true);
        keywords.insert(i, candidates[rng.gen_range(0..candidates.len())].clone());
    }
    let options = CompileOptions { mask: MaskSpec::Args(masked), extra: ExtraBlanks::Count(extras), keywords, seed: rng.gen() };
    compile(sentence, frame_idx, &options)
}

pub fn sample_positive(
    sentence: &SrlSentence,
    sentence_id: usize,
    frame_idx: usize,
    seed: u64,
) -> Result<TrainingExample, PromptError> {
    let prompt = sample_positive_prompt(sentence, frame_idx, seed)?;
    Ok(TrainingExample {
        input: serialize(&prompt),
        target: build_target(sentence, &prompt)?,
        reward: 1,
        provenance: Provenance { sentence: sentence_id, frame: frame_idx, strategy: Strategy::Positive, skipped: Vec::new() },
    })
}

fn other_tense<R: Rng>(tense: Tense, rng: &mut R) -> Tense {
    let others: Vec<Tense> = Tense::ALL.into_iter().filter(|&t| t != tense).collect();
    others[rng.gen_range(0..others.len())]
}

fn other_spec<R: Rng>(spec: Specificity, rng: &mut R) -> Specificity {
    let others: Vec<Specificity> = Specificity::ALL.into_iter().filter(|&s| s != spec).collect();
    others[rng.gen_range(0..others.len())]
}

/// Strategy 1: AGENT and PATIENT trade labels, every other role moves to a
/// different adjunct role, voice flips and tense changes. The target's tags
/// are relabeled the same way.
fn controls_negative<R: Rng>(prompt: &PromptSpec, target: &str, rng: &mut R) -> Result<(PromptSpec, String), PromptError> {
    let mut mapping: Vec<(RoleLabel, RoleLabel)> = Vec::new();
    for code in &prompt.header.args {
        if mapping.iter().any(|(from, _)| *from == code.role) {
            continue;
        }
        let to = match &code.role {
            RoleLabel::Agent => RoleLabel::Patient,
            RoleLabel::Patient => RoleLabel::Agent,
            role => {
                let pool: Vec<&RoleLabel> = ADJUNCT_ROLES.iter().filter(|r| *r != role).collect();
                pool[rng.gen_range(0..pool.len())].clone()
            }
        };
        mapping.push((code.role.clone(), to));
    }
    let relabel = |r: &RoleLabel| mapping.iter().find(|(from, _)| from == r).map_or_else(|| r.clone(), |(_, to)| to.clone());

    let mut neg = prompt.clone();
    neg.header.verb.voice = neg.header.verb.voice.flipped();
    neg.header.verb.tense = other_tense(neg.header.verb.tense, rng);
    for code in &mut neg.header.args {
        code.role = relabel(&code.role);
    }
    let mut out = parse_tagged_output(target)?;
    for seg in &mut out.segments {
        if let Segment::Tagged { label: Label::Role(r), .. } = seg {
            *r = relabel(r);
        }
    }
    Ok((neg, out.render()))
}

/// Strategy 2: each specified content is replaced by a different content
/// from the table entry for its (role, specificity), and the lemma by a
/// different frequent lemma. `None` if nothing could change.
fn contents_negative<R: Rng>(prompt: &PromptSpec, table: &KeywordTable, rng: &mut R) -> Option<PromptSpec> {
    let mut neg = prompt.clone();
    let mut changed = false;
    for code in &mut neg.header.args {
        if let Keyword::Text { content, spec } = &mut code.keyword {
            let pool: Vec<&String> = table.contents(&code.role, *spec).iter().map(|(c, _)| c).filter(|c| *c != content).collect();
            if !pool.is_empty() {
                *content = pool[rng.gen_range(0..pool.len())].clone();
                changed = true;
            }
        }
    }
    let lemmas: Vec<&String> = table.lemmas.iter().map(|(l, _)| l).filter(|l| **l != neg.header.verb.lemma).collect();
    if !lemmas.is_empty() {
        neg.header.verb.lemma = lemmas[rng.gen_range(0..lemmas.len())].clone();
        changed = true;
    }
    changed.then_some(neg)
}

/// Strategy 3: every specified keyword gets a different specificity.
fn specificity_negative<R: Rng>(prompt: &PromptSpec, rng: &mut R) -> Option<PromptSpec> {
    let mut neg = prompt.clone();
    let mut changed = false;
    for code in &mut neg.header.args {
        if let Keyword::Text { spec, .. } = &mut code.keyword {
            *spec = other_spec(*spec, rng);
            changed = true;
        }
    }
    changed.then_some(neg)
}

/// Up to three negatives for a positive, in strategy order, and the
/// strategies that were skipped for lack of material. Strategy 1 always
/// applies; 2 needs a table entry or lemma to swap in; 3 needs a keyword
/// that is not `*`.
pub fn gen_negatives(
    positive: &TrainingExample,
    table: &KeywordTable,
    seed: u64,
) -> Result<(Vec<TrainingExample>, Vec<Strategy>), PromptError> {
    let prompt = parse_prompt(&positive.input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |strategy: Strategy, p: Option<(PromptSpec, String)>| match p {
        Some((p, target)) => out.push(TrainingExample {
            input: serialize(&p),
            target,
            reward: -1,
            provenance: Provenance { strategy, skipped: Vec::new(), ..positive.provenance.clone() },
        }),
        None => skipped.push(strategy),
    };
    push(Strategy::Controls, Some(controls_negative(&prompt, &positive.target, &mut rng)?));
    push(Strategy::Contents, contents_negative(&prompt, table, &mut rng).map(|p| (p, positive.target.clone())));
    push(Strategy::Specificity, specificity_negative(&prompt, &mut rng).map(|p| (p, positive.target.clone())));
    Ok((out, skipped))
}
