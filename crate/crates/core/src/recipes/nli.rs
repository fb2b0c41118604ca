use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{add_by, recase, strip_by, Build, RecipeError, RecipeOutput};
use crate::dsl::{Clause, OpProgram, PerturbOp, Scope};
use crate::srl::{PredicateFrame, RoleLabel, SrlSentence, Voice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NliLabel {
    Entailment,
    Neutral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NliStrategy {
    UntangleRelativeClause,
    ShortenCore,
    ChangeVoice,
    ReplaceCoreWithSubsequences,
    SwapCore,
}

impl NliStrategy {
    pub const ALL: [NliStrategy; 5] = [
        NliStrategy::UntangleRelativeClause,
        NliStrategy::ShortenCore,
        NliStrategy::ChangeVoice,
        NliStrategy::ReplaceCoreWithSubsequences,
        NliStrategy::SwapCore,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NliStrategy::UntangleRelativeClause => "untangle_relative_clause",
            NliStrategy::ShortenCore => "shorten_core",
            NliStrategy::ChangeVoice => "change_voice",
            NliStrategy::ReplaceCoreWithSubsequences => "replace_core_with_subsequences",
            NliStrategy::SwapCore => "swap_core",
        }
    }

    /// The first three keep the premise true; the last two change who did
    /// what, so the pair is labeled neutral.
    pub fn label(self) -> NliLabel {
        match self {
            NliStrategy::UntangleRelativeClause | NliStrategy::ShortenCore | NliStrategy::ChangeVoice => NliLabel::Entailment,
            NliStrategy::ReplaceCoreWithSubsequences | NliStrategy::SwapCore => NliLabel::Neutral,
        }
    }
}

impl fmt::Display for NliStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NliStrategy {
    type Err = RecipeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NliStrategy::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| RecipeError::UnknownRecipe(s.to_string()))
    }
}

/// Outputs for every frame the strategy applies to, and a reason for each
/// frame it does not.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NliOutcome {
    pub outputs: Vec<RecipeOutput>,
    pub skipped: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub premise: String,
    pub hypothesis: String,
    pub label: NliLabel,
    pub strategy: String,
}

/// Pairs the original sentence with a generated perturbation.
pub fn labeled_pair(sentence: &SrlSentence, output: &RecipeOutput, hypothesis: &str) -> Option<LabeledPair> {
    Some(LabeledPair {
        premise: sentence.text(),
        hypothesis: hypothesis.to_string(),
        label: output.label?,
        strategy: output.recipe.clone(),
    })
}

pub fn nli_perturb(sentence: &SrlSentence, strategy: NliStrategy, seed: u64) -> NliOutcome {
    let mut outcome = NliOutcome::default();
    for fi in 0..sentence.frames.len() {
        match frame_outputs(sentence, fi, strategy, seed) {
            Ok(outputs) => outcome.outputs.extend(outputs.into_iter().map(|mut o| {
                o.label = Some(strategy.label());
                o
            })),
            Err(e) => outcome.skipped.push((fi, e.to_string())),
        }
    }
    outcome
}

pub(crate) fn core_indices(frame: &PredicateFrame) -> Vec<usize> {
    frame.args.iter().enumerate().filter(|(_, a)| a.role.is_core()).map(|(i, _)| i).collect()
}

fn text_of(sentence: &SrlSentence, frame: &PredicateFrame, role: &RoleLabel) -> Option<String> {
    frame.arg(role).map(|a| sentence.span_text(a.start, a.end))
}

fn starts_sentence(frame: &PredicateFrame, role: &RoleLabel) -> bool {
    frame.arg(role).is_some_and(|a| a.start == 0)
}

fn content_program(changes: Vec<(RoleLabel, String)>) -> OpProgram {
    OpProgram {
        clauses: changes
            .into_iter()
            .map(|(role, c)| Clause { scope: Scope::Role(role), ops: vec![PerturbOp::ChangeContent(c)] })
            .collect(),
    }
}

/// Voice change plus the content fixes it needs: the passive AGENT gains
/// "by", the active one loses it, and the new subject takes the sentence
/// initial capital.
pub(crate) fn voice_program(sentence: &SrlSentence, frame: &PredicateFrame, target: Voice) -> Result<OpProgram, RecipeError> {
    let (agent, patient) = (RoleLabel::Agent, RoleLabel::Patient);
    let (Some(a), Some(p)) = (text_of(sentence, frame, &agent), text_of(sentence, frame, &patient)) else {
        return Err(RecipeError::Inapplicable("needs both AGENT and PATIENT".into()));
    };
    let initial = starts_sentence(frame, &agent) || starts_sentence(frame, &patient);
    let (new_a, new_p) = match target {
        Voice::Passive => (add_by(&recase(&a, false)), recase(&p, initial)),
        Voice::Active => (recase(&strip_by(&a), initial), recase(&p, false)),
    };
    let mut changes = Vec::new();
    if new_a != a {
        changes.push((agent, new_a));
    }
    if new_p != p {
        changes.push((patient, new_p));
    }
    Ok(OpProgram::global(vec![PerturbOp::ChangeVVoice(target)]).then(content_program(changes)))
}

fn frame_outputs(sentence: &SrlSentence, fi: usize, strategy: NliStrategy, seed: u64) -> Result<Vec<RecipeOutput>, RecipeError> {
    let frame = &sentence.frames[fi];
    let name = strategy.as_str();
    let (agent, patient) = (RoleLabel::Agent, RoleLabel::Patient);
    match strategy {
        NliStrategy::UntangleRelativeClause => {
            if !frame.has_relative_clause() {
                return Err(RecipeError::Inapplicable("no relative clause".into()));
            }
            let b = Build::new(sentence, fi, (0..frame.args.len()).collect(), seed);
            let program = OpProgram::global(vec![PerturbOp::ContextDeleteText(None)]);
            Ok(vec![b.finish(name, b.base()?, program)?])
        }
        NliStrategy::ShortenCore => {
            let mut changes = Vec::new();
            for &i in &core_indices(frame) {
                let a = &frame.args[i];
                let Some(&(s, e)) = sentence.chunks_within(a.start, a.end).first() else { continue };
                if (s, e) == (a.start, a.end) {
                    continue;
                }
                let chunk = sentence.span_text(s, e);
                let by = frame.voice == Voice::Passive && a.role == agent;
                let short = if by { add_by(&chunk) } else { chunk };
                if short != sentence.span_text(a.start, a.end) {
                    changes.push((a.role.clone(), short));
                }
            }
            if changes.is_empty() {
                return Err(RecipeError::Inapplicable("core arguments are already single noun chunks".into()));
            }
            let b = Build::new(sentence, fi, core_indices(frame), seed);
            Ok(vec![b.finish(name, b.base()?, content_program(changes))?])
        }
        NliStrategy::ChangeVoice => {
            let program = voice_program(sentence, frame, frame.voice.flipped())?;
            let b = Build::new(sentence, fi, core_indices(frame), seed);
            Ok(vec![b.finish(name, b.base()?, program)?])
        }
        NliStrategy::ReplaceCoreWithSubsequences => {
            let cores = core_indices(frame);
            let mut options: Vec<(RoleLabel, Vec<String>)> = Vec::new();
            for &i in &cores {
                let a = &frame.args[i];
                let own = sentence.span_text(a.start, a.end).to_lowercase();
                let mut pool: Vec<String> = Vec::new();
                for (j, other) in frame.args.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    for (s, e) in sentence.chunks_within(other.start, other.end) {
                        let chunk = sentence.span_text(s, e);
                        let by = frame.voice == Voice::Passive && a.role == agent;
                        let chunk = recase(&if by { add_by(&chunk) } else { chunk }, a.start == 0);
                        if chunk.to_lowercase() != own && !pool.contains(&chunk) {
                            pool.push(chunk);
                        }
                    }
                }
                if !pool.is_empty() {
                    options.push((a.role.clone(), pool));
                }
            }
            if options.is_empty() {
                return Err(RecipeError::Inapplicable("no noun chunks outside the core arguments".into()));
            }
            let mut combos: Vec<Vec<(RoleLabel, String)>> = vec![Vec::new()];
            for (role, pool) in &options {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        pool.iter().map(move |p| {
                            let mut c = c.clone();
                            c.push((role.clone(), p.clone()));
                            c
                        })
                    })
                    .collect();
            }
            combos.retain(|c| {
                let contents: Vec<String> = c.iter().map(|(_, t)| strip_by(t).to_lowercase()).collect();
                contents.iter().enumerate().all(|(i, t)| !contents[..i].contains(t))
            });
            combos.truncate(MAX_COMBOS);
            let b = Build::new(sentence, fi, cores, seed);
            let base = b.base()?;
            combos.into_iter().map(|c| b.finish(name, base.clone(), content_program(c))).collect()
        }
        NliStrategy::SwapCore => {
            let (Some(a), Some(p)) = (text_of(sentence, frame, &agent), text_of(sentence, frame, &patient)) else {
                return Err(RecipeError::Inapplicable("needs both AGENT and PATIENT".into()));
            };
            // After the swap AGENT holds the old patient and vice versa;
            // fix the passive "by" and sentence-initial case.
            let passive = frame.voice == Voice::Passive;
            let swapped_a = recase(&strip_by(&p), starts_sentence(frame, &agent));
            let swapped_a = if passive { add_by(&swapped_a) } else { swapped_a };
            let swapped_p = recase(&strip_by(&a), starts_sentence(frame, &patient));
            let mut program = OpProgram::global(vec![PerturbOp::SwapCore]);
            if swapped_a != p {
                program = program.then(OpProgram::role(agent.clone(), vec![PerturbOp::ChangeContent(swapped_a)]));
            }
            if swapped_p != a {
                program = program.then(OpProgram::role(patient.clone(), vec![PerturbOp::ChangeContent(swapped_p)]));
            }
            let b = Build::new(sentence, fi, core_indices(frame), seed);
            Ok(vec![b.finish(name, b.base()?, program)?])
        }
    }
}

const MAX_COMBOS: usize = 16;
