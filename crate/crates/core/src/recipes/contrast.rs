use std::str::FromStr;

use super::{frame_param, param, Build, Params, RecipeError, RecipeOutput};
use crate::dsl::{apply, OpProgram, PerturbOp};
use crate::prompt::ContextItem;
use crate::srl::{PredicateFrame, RoleLabel, SrlSentence, Tense};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpDirection {
    /// A verb-attached PP becomes part of the object noun phrase.
    ToNoun,
    /// A PP inside the object becomes an adjunct of the verb.
    ToVerb,
}

/// The adjunct role a verb-attached PP headed by `prep` gets.
pub fn preposition_role(prep: &str) -> RoleLabel {
    match prep.to_lowercase().as_str() {
        "at" | "in" | "on" | "near" | "inside" | "outside" | "under" | "above" | "behind" => RoleLabel::Locative,
        "during" | "before" | "after" | "until" | "since" => RoleLabel::Temporal,
        "with" | "by" | "like" => RoleLabel::Manner,
        "for" => RoleLabel::Purpose,
        "because" => RoleLabel::Cause,
        "to" | "into" | "toward" | "towards" | "onto" => RoleLabel::Direction,
        _ => RoleLabel::Adverbial,
    }
}

fn frame(sentence: &SrlSentence, fi: usize) -> Result<&PredicateFrame, RecipeError> {
    sentence.frames.get(fi).ok_or_else(|| RecipeError::Parameter(format!("frame {fi} out of range")))
}

pub fn pp_attachment_swap(
    sentence: &SrlSentence,
    fi: usize,
    direction: PpDirection,
    prep: &str,
    seed: u64,
) -> Result<RecipeOutput, RecipeError> {
    let f = frame(sentence, fi)?;
    let prep_lc = prep.to_lowercase();
    let pi = f.arg_index(&RoleLabel::Patient).ok_or_else(|| RecipeError::Inapplicable("no PATIENT".into()))?;
    let patient = &f.args[pi];
    match direction {
        PpDirection::ToNoun => {
            let (ai, adjunct) = f
                .args
                .iter()
                .enumerate()
                .find(|(_, a)| !a.role.is_core() && sentence.tokens[a.start].text.to_lowercase() == prep_lc)
                .ok_or_else(|| RecipeError::Inapplicable(format!("no adjunct headed by {prep:?}")))?;
            let content = format!("{} {}", sentence.span_text(patient.start, patient.end), sentence.tokens[adjunct.start].text);
            let program = OpProgram::role(
                RoleLabel::Patient,
                vec![PerturbOp::ChangeContent(content), PerturbOp::ChangeSpec(crate::srl::Specificity::Partial)],
            )
            .then(OpProgram::role(adjunct.role.clone(), vec![PerturbOp::Delete]));
            let mut masked = vec![pi, ai];
            masked.sort_unstable();
            let b = Build::new(sentence, fi, masked, seed);
            b.finish("pp_to_noun", b.base()?, program)
        }
        PpDirection::ToVerb => {
            let at = (patient.start + 1..patient.end)
                .find(|&t| sentence.tokens[t].text.to_lowercase() == prep_lc)
                .ok_or_else(|| RecipeError::Inapplicable(format!("no {prep:?} inside the PATIENT")))?;
            let role = preposition_role(prep);
            if f.arg(&role).is_some() {
                return Err(RecipeError::Inapplicable(format!("frame already has {role}")));
            }
            // MOVE places the new adjunct after the object instead of at a
            // random eligible boundary.
            let program =
                OpProgram::role(RoleLabel::Patient, vec![PerturbOp::ChangeContent(sentence.span_text(patient.start, at))]).then(
                    OpProgram::role(
                        role,
                        vec![
                            PerturbOp::ChangeContent(sentence.tokens[at].text.clone()),
                            PerturbOp::ChangeSpec(crate::srl::Specificity::Partial),
                            PerturbOp::Move(None),
                        ],
                    ),
                );
            let b = Build::new(sentence, fi, vec![pi], seed);
            b.finish("pp_to_verb", b.base()?, program)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContrastRecipe {
    /// Replace one argument's content (`role`, default AGENT; `text`).
    ChangeEntity,
    /// Move an event to another tense (`tense`, default past); a modal is
    /// dropped.
    MatresChangeTense,
    /// Move the governing frame's PATIENT to the end, reordering the
    /// reported events.
    MatresChangeOrder,
    /// Ask about the agent instead: AGENT becomes the WH word (`wh`,
    /// default "who") and the questioned role holds the `answer`.
    QaSwapAnswerToAgent,
}

impl ContrastRecipe {
    pub fn as_str(self) -> &'static str {
        match self {
            ContrastRecipe::ChangeEntity => "change_entity",
            ContrastRecipe::MatresChangeTense => "matres_change_tense",
            ContrastRecipe::MatresChangeOrder => "matres_change_order",
            ContrastRecipe::QaSwapAnswerToAgent => "qa_swap_answer_to_agent",
        }
    }
}

impl FromStr for ContrastRecipe {
    type Err = RecipeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            ContrastRecipe::ChangeEntity,
            ContrastRecipe::MatresChangeTense,
            ContrastRecipe::MatresChangeOrder,
            ContrastRecipe::QaSwapAnswerToAgent,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
        .ok_or_else(|| RecipeError::UnknownRecipe(s.to_string()))
    }
}

const WH_WORDS: &[&str] = &["how", "why", "when", "where", "what", "who", "whom", "which"];

fn role_param(params: &Params, key: &str) -> Result<Option<RoleLabel>, RecipeError> {
    params.get(key).map(|r| r.parse::<RoleLabel>().map_err(|_| RecipeError::Parameter(format!("{key}={r:?}")))).transpose()
}

/// The frame to use: the `frame` parameter, else the first frame that has
/// `role` (any frame when `role` is `None`).
fn pick_frame(sentence: &SrlSentence, params: &Params, role: Option<&RoleLabel>) -> Result<usize, RecipeError> {
    if let Some(fi) = frame_param(params)? {
        frame(sentence, fi)?;
        return Ok(fi);
    }
    sentence.frames.iter().position(|f| role.is_none_or(|r| f.arg(r).is_some())).ok_or_else(|| {
        RecipeError::Inapplicable(match role {
            Some(r) => format!("no frame has {r}"),
            None => "sentence has no frames".into(),
        })
    })
}

pub fn contrast_recipe(
    sentence: &SrlSentence,
    recipe: ContrastRecipe,
    params: &Params,
    seed: u64,
) -> Result<RecipeOutput, RecipeError> {
    let name = recipe.as_str();
    match recipe {
        ContrastRecipe::ChangeEntity => {
            let role = role_param(params, "role")?.unwrap_or(RoleLabel::Agent);
            let text = param(params, "text")?;
            let fi = pick_frame(sentence, params, Some(&role))?;
            let ai = frame(sentence, fi)?.arg_index(&role).ok_or_else(|| RecipeError::Inapplicable(format!("no {role}")))?;
            let b = Build::new(sentence, fi, vec![ai], seed);
            b.finish(name, b.base()?, OpProgram::role(role, vec![PerturbOp::ChangeContent(text.to_string())]))
        }
        ContrastRecipe::MatresChangeTense => {
            let tense: Tense = match params.get("tense") {
                Some(t) => t.parse().map_err(|_| RecipeError::Parameter(format!("tense={t:?}")))?,
                None => Tense::Past,
            };
            let fi = pick_frame(sentence, params, None)?;
            let f = frame(sentence, fi)?;
            let modal = f.arg_index(&RoleLabel::Modal);
            let mut program = OpProgram::global(vec![PerturbOp::ChangeVTense(tense)]);
            if modal.is_some() {
                program = program.then(OpProgram::role(RoleLabel::Modal, vec![PerturbOp::Delete]));
            }
            let b = Build::new(sentence, fi, modal.into_iter().collect(), seed);
            b.finish(name, b.base()?, program)
        }
        ContrastRecipe::MatresChangeOrder => {
            let fi = pick_frame(sentence, params, Some(&RoleLabel::Patient))?;
            let pi = frame(sentence, fi)?
                .arg_index(&RoleLabel::Patient)
                .ok_or_else(|| RecipeError::Inapplicable("no PATIENT".into()))?;
            let b = Build::new(sentence, fi, vec![pi], seed);
            let base = b.base()?;
            let mut program = OpProgram::role(RoleLabel::Patient, vec![PerturbOp::Move(None)]);
            // A clause that used to follow the object may now open with a comma.
            let moved = apply(&base, &program, seed)?;
            if let Some(ContextItem::Literal { text, .. }) = moved.context.first() {
                if text.chars().all(|c| c.is_ascii_punctuation()) {
                    program = program.then(OpProgram::global(vec![PerturbOp::ContextDeleteText(Some((0, 1)))]));
                }
            }
            b.finish(name, base, program)
        }
        ContrastRecipe::QaSwapAnswerToAgent => {
            let answer = param(params, "answer")?;
            let wh = params.get("wh").map_or("who", String::as_str);
            let fi = pick_frame(sentence, params, None)?;
            let f = frame(sentence, fi)?;
            let role = match role_param(params, "role")? {
                Some(r) => r,
                None => f
                    .args
                    .iter()
                    .find(|a| a.len() == 1 && WH_WORDS.contains(&sentence.tokens[a.start].text.to_lowercase().as_str()))
                    .map(|a| a.role.clone())
                    .ok_or_else(|| RecipeError::Inapplicable("no questioned argument".into()))?,
            };
            if role == RoleLabel::Agent {
                return Err(RecipeError::Inapplicable("the question is already about the AGENT".into()));
            }
            let b = Build::new(sentence, fi, (0..f.args.len()).collect(), seed);
            let base = b.base()?;
            let mut answer_ops =
                vec![PerturbOp::ChangeContent(answer.to_string()), PerturbOp::ChangeSpec(crate::srl::Specificity::Partial)];
            // A fronted WH phrase becomes the answer, which belongs after the verb.
            let fronted = f.arg(&role).is_some_and(|a| a.start == 0);
            if fronted {
                answer_ops.push(PerturbOp::Move(None));
            }
            let mut program = OpProgram::role(RoleLabel::Agent, vec![PerturbOp::ChangeContent(wh.to_string())])
                .then(OpProgram::role(role, answer_ops));
            // With a WH subject there is no inversion, so stranded do-support goes.
            let moved = apply(&base, &program, seed)?;
            let stranded = moved.context.iter().position(|c| {
                matches!(c, ContextItem::Literal { text, .. } if matches!(text.to_lowercase().as_str(), "do" | "does" | "did"))
            });
            if let (true, Some(i)) = (fronted, stranded) {
                program = program.then(OpProgram::global(vec![PerturbOp::ContextDeleteText(Some((i, i + 1)))]));
            }
            b.finish(name, base, program)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clients::mock_generate_output;
    use crate::prompt::serialize;
    use crate::recipes::parse_params;
    use crate::testutil::sentence;

    fn toks(words: &[(&str, &str)]) -> String {
        words
            .iter()
            .map(|(w, p)| {
                let lemma = if p.starts_with("VB") { crate::morph::lemmatize(w) } else { w.to_string() };
                format!(r#"{{"text":"{w}","pos":"{p}","lemma":"{lemma}"}}"#)
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    #[test]
    fn pp_to_noun() {
        let t = toks(&[
            ("Do", "VBP"),
            ("you", "PRP"),
            ("prefer", "VB"),
            ("ham", "NN"),
            ("or", "CC"),
            ("sausages", "NNS"),
            ("with", "IN"),
            ("your", "PRP$"),
            ("breakfast", "NN"),
            ("?", "."),
        ]);
        let s = sentence(&format!(
            r#"{{"tokens":[{t}],"frames":[{{"verb_index":2,"args":[{{"tag":"ARG0","start":1,"end":2}},{{"tag":"ARG1","start":3,"end":6}},{{"tag":"ARGM-ADV","start":6,"end":9}}]}}]}}"#
        ));
        let o = pp_attachment_swap(&s, 0, PpDirection::ToNoun, "with", 0).unwrap();
        assert_eq!(o.program.to_string(), "PATIENT:CHANGE_CONTENT(ham or sausages with),CHANGE_SPEC(partial);ADVERBIAL:DELETE");
        assert_eq!(
            serialize(&o.perturbed),
            "[VERB+active+present: prefer | PATIENT+partial: ham or sausages with] Do you <extra_id_0> <extra_id_1> ?"
        );
        assert_eq!(mock_generate_output(&o.perturbed).text(), "Do you prefer ham or sausages with lorem ?");
        assert!(matches!(pp_attachment_swap(&s, 0, PpDirection::ToNoun, "at", 0), Err(RecipeError::Inapplicable(_))));
    }

    #[test]
    fn pp_to_verb() {
        let t = toks(&[
            ("It", "PRP"),
            ("has", "VBZ"),
            ("local", "JJ"),
            ("boutiques", "NNS"),
            ("and", "CC"),
            ("a", "DT"),
            ("diverse", "JJ"),
            ("range", "NN"),
            ("of", "IN"),
            ("food", "NN"),
            ("at", "IN"),
            ("all", "DT"),
            ("prices", "NNS"),
            ("and", "CC"),
            ("styles", "NNS"),
            (".", "."),
        ]);
        let s = sentence(&format!(
            r#"{{"tokens":[{t}],"frames":[{{"verb_index":1,"args":[{{"tag":"ARG0","start":0,"end":1}},{{"tag":"ARG1","start":2,"end":15}}]}}]}}"#
        ));
        let o = pp_attachment_swap(&s, 0, PpDirection::ToVerb, "at", 3).unwrap();
        assert_eq!(
            serialize(&o.perturbed),
            "[VERB+active+present: have | PATIENT+complete: local boutiques and a diverse range of food | LOCATIVE+partial: at] It <extra_id_0> <extra_id_1> <extra_id_2> ."
        );
        assert_eq!(mock_generate_output(&o.perturbed).text(), "It has local boutiques and a diverse range of food at lorem .");
    }

    #[test]
    fn entity_and_qa() {
        let t = toks(&[
            ("does", "VBZ"),
            ("Deadpool", "NNP"),
            ("have", "VB"),
            ("a", "DT"),
            ("kid", "NN"),
            ("in", "IN"),
            ("the", "DT"),
            ("comics", "NNS"),
            ("?", "."),
        ]);
        let s = sentence(&format!(
            r#"{{"tokens":[{t}],"frames":[{{"verb_index":2,"args":[{{"tag":"ARG0","start":1,"end":2}},{{"tag":"ARG1","start":3,"end":5}},{{"tag":"ARGM-LOC","start":5,"end":8}}]}}]}}"#
        ));
        let o = contrast_recipe(&s, ContrastRecipe::ChangeEntity, &parse_params("text=his bride").unwrap(), 0).unwrap();
        assert_eq!(mock_generate_output(&o.perturbed).text(), "does his bride have a kid in the comics ?");

        let t = toks(&[
            ("How", "WRB"),
            ("did", "VBD"),
            ("the", "DT"),
            ("Huguenots", "NNPS"),
            ("defend", "VB"),
            ("themselves", "PRP"),
            ("?", "."),
        ]);
        let s = sentence(&format!(
            r#"{{"tokens":[{t}],"frames":[{{"verb_index":4,"args":[{{"tag":"ARGM-MNR","start":0,"end":1}},{{"tag":"ARG0","start":2,"end":4}},{{"tag":"ARG1","start":5,"end":6}}]}}]}}"#
        ));
        let o = contrast_recipe(&s, ContrastRecipe::QaSwapAnswerToAgent, &parse_params("answer=their own militia").unwrap(), 0)
            .unwrap();
        assert_eq!(
            o.program.to_string(),
            "AGENT:CHANGE_CONTENT(who);MANNER:CHANGE_CONTENT(their own militia),CHANGE_SPEC(partial),MOVE;CONTEXT_DELETE_TEXT(0:1)"
        );
        assert_eq!(mock_generate_output(&o.perturbed).text(), "who defended themselves their own militia lorem ?");
        assert!(serialize(&o.perturbed).starts_with(
            "[VERB+active+past: defend | AGENT+complete: who | PATIENT+complete: themselves | MANNER+partial: their own militia]"
        ));
    }

    #[test]
    fn matres() {
        let t = toks(&[
            ("Volleyball", "NN"),
            ("is", "VBZ"),
            ("a", "DT"),
            ("popular", "JJ"),
            ("sport", "NN"),
            ("in", "IN"),
            ("the", "DT"),
            ("area", "NN"),
            (",", ","),
            ("and", "CC"),
            ("more", "JJR"),
            ("than", "IN"),
            ("200", "CD"),
            ("people", "NNS"),
            ("would", "MD"),
            ("be", "VB"),
            ("watching", "VBG"),
            ("the", "DT"),
            ("game", "NN"),
            (",", ","),
            ("the", "DT"),
            ("chief", "NN"),
            ("said", "VBD"),
            (".", "."),
        ]);
        let s = sentence(&format!(
            r#"{{"tokens":[{t}],"frames":[{{"verb_index":16,"args":[{{"tag":"ARG0","start":10,"end":14}},{{"tag":"ARGM-MOD","start":14,"end":15}},{{"tag":"ARG1","start":17,"end":19}}]}},{{"verb_index":22,"args":[{{"tag":"ARG1","start":0,"end":19}},{{"tag":"ARG0","start":20,"end":22}}]}}]}}"#
        ));
        let o = contrast_recipe(&s, ContrastRecipe::MatresChangeTense, &Params::new(), 0).unwrap();
        assert!(serialize(&o.perturbed).starts_with("[VERB+active+past: watch]"));
        assert_eq!(
            mock_generate_output(&o.perturbed).text(),
            "Volleyball is a popular sport in the area , and more than 200 people watched the game , the chief said ."
        );

        let o = contrast_recipe(&s, ContrastRecipe::MatresChangeOrder, &parse_params("frame=1").unwrap(), 0).unwrap();
        assert_eq!(o.program.to_string(), "PATIENT:MOVE;CONTEXT_DELETE_TEXT(0:1)");
        assert_eq!(
            mock_generate_output(&o.perturbed).text(),
            "the chief said Volleyball is a popular sport in the area , and more than 200 people would be watching the game ."
        );
    }
}
