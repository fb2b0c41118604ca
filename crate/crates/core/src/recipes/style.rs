use std::fmt;
use std::str::FromStr;

use super::nli::{core_indices, voice_program};
use super::{recase, Build, RecipeError, RecipeOutput};
use crate::dsl::{apply, OpProgram, PerturbOp};
use crate::prompt::{assign_blanks, CodeRef, ContextItem, PromptSpec};
use crate::srl::{ArgSpan, Keyword, PredicateFrame, RoleLabel, Specificity, SrlSentence, Tense, Voice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StyleTransfer {
    ToFuture,
    ToPast,
    ToPresent,
    ActiveToPassive,
    PassiveToActive,
    AdjAdvRemoval,
    PpFrontToBack,
    PpRemoval,
}

impl StyleTransfer {
    pub const ALL: [StyleTransfer; 8] = [
        StyleTransfer::ToFuture,
        StyleTransfer::ToPast,
        StyleTransfer::ToPresent,
        StyleTransfer::ActiveToPassive,
        StyleTransfer::PassiveToActive,
        StyleTransfer::AdjAdvRemoval,
        StyleTransfer::PpFrontToBack,
        StyleTransfer::PpRemoval,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StyleTransfer::ToFuture => "to_future",
            StyleTransfer::ToPast => "to_past",
            StyleTransfer::ToPresent => "to_present",
            StyleTransfer::ActiveToPassive => "active_to_passive",
            StyleTransfer::PassiveToActive => "passive_to_active",
            StyleTransfer::AdjAdvRemoval => "adj_adv_removal",
            StyleTransfer::PpFrontToBack => "pp_front_to_back",
            StyleTransfer::PpRemoval => "pp_removal",
        }
    }

    fn tense(self) -> Option<Tense> {
        match self {
            StyleTransfer::ToFuture => Some(Tense::Future),
            StyleTransfer::ToPast => Some(Tense::Past),
            StyleTransfer::ToPresent => Some(Tense::Present),
            _ => None,
        }
    }

    /// `to_past+active_to_passive` style compositions.
    pub fn parse_list(text: &str) -> Result<Vec<StyleTransfer>, RecipeError> {
        text.split('+').map(|t| t.trim().parse()).collect()
    }
}

impl fmt::Display for StyleTransfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StyleTransfer {
    type Err = RecipeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StyleTransfer::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| RecipeError::UnknownRecipe(format!("style:{s}")))
    }
}

/// Tense-only transfers leave room for auxiliaries.
const TENSE_EXTRA_BLANKS: usize = 2;

const SUBORDINATORS: &[&str] = &["that", "if", "because", "while", "although", "though", "whether", "unless"];

fn is_adj_adv(pos: &str) -> bool {
    pos.starts_with("JJ") || pos.starts_with("RB")
}

fn pos(sentence: &SrlSentence, t: usize) -> &str {
    sentence.tokens[t].pos.as_deref().unwrap_or("")
}

fn is_preposition(sentence: &SrlSentence, t: usize) -> bool {
    let tok = &sentence.tokens[t];
    pos(sentence, t) == "IN" && !SUBORDINATORS.contains(&tok.text.to_lowercase().as_str())
}

/// Arguments the removal transfers edit; modal and negation are never
/// touched, and only the first argument per role is addressable.
fn removal_targets(frame: &PredicateFrame, hit: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen: Vec<&RoleLabel> = Vec::new();
    let mut out = Vec::new();
    for (i, a) in frame.args.iter().enumerate() {
        if seen.contains(&&a.role) {
            continue;
        }
        seen.push(&a.role);
        if matches!(a.role, RoleLabel::Modal | RoleLabel::Negation) {
            continue;
        }
        if (a.start..a.end).any(&hit) {
            out.push(i);
        }
    }
    out
}

fn leading_pp(sentence: &SrlSentence, frame: &PredicateFrame) -> Option<usize> {
    frame.args.iter().position(|a| a.start == 0 && !a.role.is_core() && is_preposition(sentence, 0))
}

/// Content with some tokens dropped, or `None` when nothing is left.
fn kept_text(sentence: &SrlSentence, a: &ArgSpan, keep: impl Fn(usize) -> bool) -> Option<String> {
    let words: Vec<&str> = (a.start..a.end).filter(|&t| keep(t)).map(|t| sentence.tokens[t].text.as_str()).collect();
    (!words.is_empty()).then(|| recase(&words.join(" "), a.start == 0))
}

fn removal_program(
    sentence: &SrlSentence,
    frame: &PredicateFrame,
    targets: &[usize],
    keep: impl Fn(&ArgSpan, usize) -> bool,
) -> OpProgram {
    let mut program = OpProgram { clauses: Vec::new() };
    for &i in targets {
        let a = &frame.args[i];
        let op = match kept_text(sentence, a, |t| keep(a, t)) {
            Some(text) => PerturbOp::ChangeContent(text),
            None => PerturbOp::Delete,
        };
        program = program.then(OpProgram::role(a.role.clone(), vec![op]));
    }
    program
}

/// Drops every token from the first preposition on; a span that opens
/// with one goes entirely.
fn pp_keep(sentence: &SrlSentence, a: &ArgSpan, t: usize) -> bool {
    (a.start..=t).all(|u| !is_preposition(sentence, u))
}

fn is_punct(item: &ContextItem) -> bool {
    item.text().is_some_and(|t| t.chars().all(|c| c.is_ascii_punctuation()))
}

fn front_to_back(state: &PromptSpec, role: &RoleLabel) -> Result<OpProgram, RecipeError> {
    let code = state.header.position(role).ok_or_else(|| RecipeError::Inapplicable(format!("{role} was removed")))?;
    let from = assign_blanks(state)
        .blank_of(CodeRef::Arg(code))
        .and_then(|b| state.blank_position(b))
        .ok_or_else(|| RecipeError::Inapplicable(format!("{role} has no blank")))?;
    let rest = state.context.len() - 1;
    let to = if state.context.last().is_some_and(is_punct) && from != rest { rest - 1 } else { rest };
    Ok(OpProgram::global(vec![PerturbOp::ChangeIdx { from, to }]))
}

/// One candidate per frame the transfers all apply to.
///
/// Masks: tense transfers blank the verb, modal and negation (with two
/// extra blanks when only tense changes); voice transfers the core
/// arguments; removals the arguments containing the removed material,
/// whose keyword contents drop it. Keywords keep their case except for
/// the PP moved to the back, which is lowercased.
pub fn style_transfer_program(sentence: &SrlSentence, transfers: &[StyleTransfer], seed: u64) -> Vec<RecipeOutput> {
    let name = format!("style:{}", transfers.iter().map(|t| t.as_str()).collect::<Vec<_>>().join("+"));
    (0..sentence.frames.len())
        .filter_map(|fi| match frame_transfer(sentence, fi, transfers, &name, seed) {
            Ok(o) => Some(o),
            Err(e) => {
                log::debug!("{name}: frame {fi} skipped: {e}");
                None
            }
        })
        .collect()
}

fn frame_transfer(
    sentence: &SrlSentence,
    fi: usize,
    transfers: &[StyleTransfer],
    name: &str,
    seed: u64,
) -> Result<RecipeOutput, RecipeError> {
    let frame = &sentence.frames[fi];
    let mut masked: Vec<usize> = Vec::new();
    let mut keywords = std::collections::BTreeMap::new();
    for &t in transfers {
        match t {
            StyleTransfer::ToFuture | StyleTransfer::ToPast | StyleTransfer::ToPresent => {
                masked.extend(
                    frame
                        .args
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| matches!(a.role, RoleLabel::Modal | RoleLabel::Negation))
                        .map(|(i, _)| i),
                );
            }
            StyleTransfer::ActiveToPassive | StyleTransfer::PassiveToActive => {
                let source = if t == StyleTransfer::ActiveToPassive { Voice::Active } else { Voice::Passive };
                if frame.voice != source {
                    return Err(RecipeError::Inapplicable(format!("frame is not {source}")));
                }
                masked.extend(core_indices(frame));
            }
            StyleTransfer::AdjAdvRemoval => {
                let targets = removal_targets(frame, |t| is_adj_adv(pos(sentence, t)));
                if targets.is_empty() {
                    return Err(RecipeError::Inapplicable("no adjectives or adverbs".into()));
                }
                masked.extend(targets);
            }
            StyleTransfer::PpRemoval => {
                let targets = removal_targets(frame, |t| is_preposition(sentence, t));
                if targets.is_empty() {
                    return Err(RecipeError::Inapplicable("no prepositional phrases".into()));
                }
                masked.extend(targets);
            }
            StyleTransfer::PpFrontToBack => {
                let i = leading_pp(sentence, frame).ok_or_else(|| RecipeError::Inapplicable("no fronted PP".into()))?;
                let a = &frame.args[i];
                let mut text = sentence.span_text(a.start, a.end);
                if let Some(first) = text.get(..1) {
                    text = first.to_lowercase() + &text[1..];
                }
                keywords.insert(i, Keyword::text(text, Specificity::Complete));
                masked.push(i);
            }
        }
    }
    masked.sort_unstable();
    masked.dedup();
    let mut b = Build::new(sentence, fi, masked, seed);
    b.keywords = keywords;
    if transfers.iter().all(|t| t.tense().is_some()) {
        b.extras = TENSE_EXTRA_BLANKS;
    }
    let base = b.base()?;

    let mut state = base.clone();
    let mut program = OpProgram { clauses: Vec::new() };
    for &t in transfers {
        let piece = match t {
            StyleTransfer::ToFuture | StyleTransfer::ToPast | StyleTransfer::ToPresent => {
                let mut p = OpProgram::global(vec![PerturbOp::ChangeVTense(t.tense().expect("tense transfer"))]);
                if state.header.position(&RoleLabel::Modal).is_some() {
                    p = p.then(OpProgram::role(RoleLabel::Modal, vec![PerturbOp::Delete]));
                }
                p
            }
            StyleTransfer::ActiveToPassive => voice_program(sentence, frame, Voice::Passive)?,
            StyleTransfer::PassiveToActive => voice_program(sentence, frame, Voice::Active)?,
            StyleTransfer::AdjAdvRemoval => {
                let targets = removal_targets(frame, |t| is_adj_adv(pos(sentence, t)));
                removal_program(sentence, frame, &targets, |_, t| !is_adj_adv(pos(sentence, t)))
            }
            StyleTransfer::PpRemoval => {
                let targets = removal_targets(frame, |t| is_preposition(sentence, t));
                removal_program(sentence, frame, &targets, |a, t| pp_keep(sentence, a, t))
            }
            StyleTransfer::PpFrontToBack => {
                let i = leading_pp(sentence, frame).expect("checked above");
                front_to_back(&state, &frame.args[i].role)?
            }
        };
        state = apply(&state, &piece, seed)?;
        program = program.then(piece);
        // Removing or moving a fronted phrase can leave its comma in front.
        if state.context.first().is_some_and(is_punct) && !base.context.first().is_some_and(is_punct) {
            let tidy = OpProgram::global(vec![PerturbOp::ContextDeleteText(Some((0, 1)))]);
            state = apply(&state, &tidy, seed)?;
            program = program.then(tidy);
        }
    }
    b.finish(name, base, program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clients::mock_generate_output;
    use crate::prompt::serialize;
    use crate::testutil::canonical;

    fn run(transfers: &str) -> Vec<RecipeOutput> {
        style_transfer_program(&canonical(), &StyleTransfer::parse_list(transfers).unwrap(), 4)
    }

    #[test]
    fn tense_uses_extra_blanks() {
        let o = &run("to_future")[0];
        assert_eq!(o.base.blank_count(), 3);
        assert!(serialize(&o.perturbed).starts_with("[VERB+active+future: comfort] "));
        assert_eq!(mock_generate_output(&o.perturbed).text(), "In the operating room , the doctor will comfort the athlete .");
    }

    #[test]
    fn voice_and_composition() {
        let o = &run("to_present+active_to_passive")[0];
        assert_eq!(o.base.blank_count(), 3);
        assert_eq!(mock_generate_output(&o.perturbed).text(), "In the operating room , the athlete is comforted by the doctor .");
        assert!(run("passive_to_active").is_empty());
    }

    #[test]
    fn removals_and_fronted_pp() {
        let o = &run("pp_removal")[0];
        assert_eq!(o.program.to_string(), "LOCATIVE:DELETE;CONTEXT_DELETE_TEXT(0:1)");
        assert_eq!(mock_generate_output(&o.perturbed).text(), "the doctor comforted the athlete .");

        let o = &run("pp_front_to_back")[0];
        assert_eq!(o.program.to_string(), "CHANGE_IDX(0:6);CONTEXT_DELETE_TEXT(0:1)");
        assert_eq!(mock_generate_output(&o.perturbed).text(), "the doctor comforted the athlete in the operating room .");

        assert!(run("adj_adv_removal").is_empty());
    }
}
