use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Clause, DslError, OpProgram, PerturbOp, Scope};
use crate::prompt::{assign_blanks, ArgCode, CodeRef, ContextItem, Owner, PromptSpec};
use crate::srl::{Keyword, RoleLabel, Specificity};

/// Applies `program` to a copy of `prompt`. The seed only matters when an
/// op has to pick a position for a new blank.
pub fn apply(prompt: &PromptSpec, program: &OpProgram, seed: u64) -> Result<PromptSpec, DslError> {
    let mut out = prompt.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for clause in &program.clauses {
        apply_clause(&mut out, clause, &mut rng)?;
    }
    Ok(out)
}

pub fn apply_clause<R: Rng>(prompt: &mut PromptSpec, clause: &Clause, rng: &mut R) -> Result<(), DslError> {
    for op in &clause.ops {
        match &clause.scope {
            Scope::Global => apply_global(prompt, op)?,
            Scope::Role(role) => apply_role(prompt, role, op, rng)?,
        }
    }
    Ok(())
}

/// Records the current blank assignment as explicit owners, so that
/// structural edits do not reshuffle which blank realizes which code.
fn pin(prompt: &mut PromptSpec) {
    let assignment = assign_blanks(prompt);
    let mut next = prompt.next_arg_id();
    let positions: Vec<usize> = (0..prompt.context.len()).filter(|&p| prompt.context[p].is_blank()).collect();
    for (b, codes) in assignment.blanks.iter().enumerate() {
        let ContextItem::Blank { owner } = &prompt.context[positions[b]] else { unreachable!() };
        if owner.is_some() || codes.len() != 1 {
            continue;
        }
        let owner = match codes[0] {
            CodeRef::Verb => Owner::Verb,
            CodeRef::Arg(i) => {
                let code = &mut prompt.header.args[i];
                let id = *code.id.get_or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                Owner::Arg(id)
            }
        };
        prompt.context[positions[b]] = ContextItem::Blank { owner: Some(owner) };
    }
}

fn check_index(index: usize, len: usize) -> Result<(), DslError> {
    if index > len {
        Err(DslError::Range { index, len })
    } else {
        Ok(())
    }
}

fn is_punct(item: &ContextItem) -> bool {
    item.text().is_some_and(|t| t.chars().all(|c| c.is_ascii_punctuation()))
}

fn apply_global(prompt: &mut PromptSpec, op: &PerturbOp) -> Result<(), DslError> {
    match op {
        PerturbOp::ChangeVTense(t) => prompt.header.verb.tense = *t,
        PerturbOp::ChangeVVoice(v) => prompt.header.verb.voice = *v,
        PerturbOp::ChangeVLemma(l) => prompt.header.verb.lemma = l.clone(),
        PerturbOp::SwapCore => {
            let a = prompt.header.position(&RoleLabel::Agent).ok_or(DslError::MissingCore)?;
            let p = prompt.header.position(&RoleLabel::Patient).ok_or(DslError::MissingCore)?;
            let ka = prompt.header.args[a].keyword.clone();
            prompt.header.args[a].keyword = std::mem::replace(&mut prompt.header.args[p].keyword, ka);
        }
        PerturbOp::ChangeIdx { from, to } => {
            let len = prompt.context.len();
            if *from >= len {
                return Err(DslError::Range { index: *from, len });
            }
            if !prompt.context[*from].is_blank() {
                return Err(DslError::NotBlank(*from));
            }
            check_index(*to, len - 1)?;
            pin(prompt);
            let item = prompt.context.remove(*from);
            prompt.context.insert(*to, item);
        }
        PerturbOp::ContextDeleteText(range) => {
            let (a, b) = range.unwrap_or((0, prompt.context.len()));
            check_index(b, prompt.context.len())?;
            if a > b {
                return Err(DslError::Range { index: a, len: b });
            }
            let mut p = 0;
            prompt.context.retain(|item| {
                p += 1;
                !((a..b).contains(&(p - 1)) && !item.is_blank())
            });
        }
        PerturbOp::Move(_) | PerturbOp::ChangeContent(_) | PerturbOp::ChangeSpec(_) | PerturbOp::Delete => {
            return Err(DslError::Misplaced(op.name()))
        }
    }
    Ok(())
}

fn canonical_slot(prompt: &PromptSpec, role: &RoleLabel) -> usize {
    let args = &prompt.header.args;
    match role {
        RoleLabel::Agent => 0,
        RoleLabel::Patient => args.iter().rposition(|a| a.role == RoleLabel::Agent).map_or(0, |i| i + 1),
        _ => args.len(),
    }
}

fn apply_role<R: Rng>(prompt: &mut PromptSpec, role: &RoleLabel, op: &PerturbOp, rng: &mut R) -> Result<(), DslError> {
    let pos = prompt.header.position(role);
    match op {
        PerturbOp::ChangeContent(content) => {
            let keyword = if content == "*" { Keyword::Any } else { Keyword::text(content.clone(), Specificity::Complete) };
            match pos {
                Some(i) => prompt.header.args[i].keyword = keyword,
                None => {
                    pin(prompt);
                    let id = prompt.next_arg_id();
                    let slot = canonical_slot(prompt, role);
                    prompt.header.args.insert(slot, ArgCode { role: role.clone(), keyword, id: Some(id) });
                    let eligible = prompt.eligible_positions();
                    let at = eligible[rng.gen_range(0..eligible.len())];
                    prompt.context.insert(at, ContextItem::Blank { owner: Some(Owner::Arg(id)) });
                }
            }
        }
        PerturbOp::ChangeSpec(spec) => {
            let i = pos.ok_or_else(|| DslError::UnknownRole(role.clone()))?;
            match &mut prompt.header.args[i].keyword {
                Keyword::Any => return Err(DslError::SpecOnAny(role.clone())),
                Keyword::Text { spec: s, .. } => *s = *spec,
            }
        }
        PerturbOp::Delete => {
            let i = pos.ok_or_else(|| DslError::UnknownRole(role.clone()))?;
            pin(prompt);
            let assignment = assign_blanks(prompt);
            if let Some(b) = assignment.blank_of(CodeRef::Arg(i)) {
                if assignment.blanks[b].len() == 1 {
                    let at = prompt.blank_position(b).expect("assignment blanks exist");
                    prompt.context.remove(at);
                }
            }
            prompt.header.args.remove(i);
        }
        PerturbOp::Move(target) => {
            let i = pos.ok_or_else(|| DslError::UnknownRole(role.clone()))?;
            pin(prompt);
            let assignment = assign_blanks(prompt);
            let b = assignment.blank_of(CodeRef::Arg(i)).ok_or_else(|| DslError::NotMasked(role.clone()))?;
            let at = prompt.blank_position(b).expect("assignment blanks exist");
            let item = prompt.context.remove(at);
            let to = match target {
                Some(n) => {
                    check_index(*n, prompt.context.len())?;
                    *n
                }
                None => match prompt.context.last() {
                    Some(last) if is_punct(last) => prompt.context.len() - 1,
                    _ => prompt.context.len(),
                },
            };
            prompt.context.insert(to, item);
        }
        _ => return Err(DslError::Misplaced(op.name())),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_program;
    use crate::prompt::{parse_prompt, serialize};

    fn run(prompt: &str, program: &str, seed: u64) -> Result<String, DslError> {
        let p = parse_prompt(prompt).unwrap();
        apply(&p, &parse_program(program).unwrap(), seed).map(|p| serialize(&p))
    }

    const CORE3: &str = "[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete] In the operating room , <extra_id_0> <extra_id_1> <extra_id_2> .";
    const LOC: &str = "[VERB+active+past: comfort | LOCATIVE+complete: in the operating room] <extra_id_0> , the doctor <extra_id_1> the athlete .";

    #[test]
    fn verb_ops() {
        assert_eq!(
            run(
                "[VERB+active+past: comfort] In the operating room , the doctor <extra_id_0> the athlete .",
                "CHANGE_VTENSE(present)",
                0
            )
            .unwrap(),
            "[VERB+active+present: comfort] In the operating room , the doctor <extra_id_0> the athlete ."
        );
        assert_eq!(
            run(CORE3, "CHANGE_VVOICE(passive)", 0).unwrap(),
            "[VERB+passive+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete] In the operating room , <extra_id_0> <extra_id_1> <extra_id_2> ."
        );
    }

    #[test]
    fn swap_and_index() {
        assert_eq!(
            run(CORE3, "CORE(SWAP_CORE)", 0).unwrap(),
            "[VERB+active+past: comfort | AGENT+complete: the athlete | PATIENT+complete: the doctor] In the operating room , <extra_id_0> <extra_id_1> <extra_id_2> ."
        );
        assert_eq!(
            run("[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete] In the operating room <extra_id_0>", "CHANGE_IDX(4:0)", 0).unwrap(),
            "[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete] <extra_id_0> In the operating room"
        );
        assert_eq!(run(CORE3, "CHANGE_IDX(0:1)", 0), Err(DslError::NotBlank(0)));
        assert_eq!(run("[VERB+active+past: go] <extra_id_0>", "CHANGE_IDX(0:2)", 0), Err(DslError::Range { index: 2, len: 0 }));
        assert_eq!(run(LOC, "SWAP_CORE", 0), Err(DslError::MissingCore));
    }

    #[test]
    fn locative_ops() {
        assert_eq!(
            run(LOC, "LOCATIVE:CHANGE_SPEC(partial)", 0).unwrap(),
            "[VERB+active+past: comfort | LOCATIVE+partial: in the operating room] <extra_id_0> , the doctor <extra_id_1> the athlete ."
        );
        assert_eq!(
            run(LOC, "LOCATIVE:CHANGE_CONTENT(in the room)", 0).unwrap(),
            "[VERB+active+past: comfort | LOCATIVE+complete: in the room] <extra_id_0> , the doctor <extra_id_1> the athlete ."
        );
        assert_eq!(
            run(LOC, "LOCATIVE:DELETE", 0).unwrap(),
            "[VERB+active+past: comfort] , the doctor <extra_id_0> the athlete ."
        );
        assert_eq!(run(LOC, "TEMPORAL:DELETE", 0), Err(DslError::UnknownRole(RoleLabel::Temporal)));
    }

    #[test]
    fn insert_absent_role() {
        let hits: Vec<String> = (0..20).map(|s| run(CORE3, "CAUSE:CHANGE_CONTENT(because he was in pain)", s).unwrap()).collect();
        for h in &hits {
            assert!(h.starts_with("[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete | CAUSE+complete: because he was in pain] "), "{h}");
            assert_eq!(parse_prompt(h).unwrap().blank_count(), 4);
        }
        assert!(hits
            .iter()
            .any(|h| h.ends_with("In the operating room , <extra_id_0> <extra_id_1> <extra_id_2> <extra_id_3> .")));
        let agent = run(LOC, "AGENT:CHANGE_CONTENT(the adult)", 3).unwrap();
        assert!(agent
            .starts_with("[VERB+active+past: comfort | AGENT+complete: the adult | LOCATIVE+complete: in the operating room]"));
    }

    #[test]
    fn content_then_spec_and_any() {
        let out = run(CORE3, "AGENT:CHANGE_CONTENT(*);PATIENT:CONTENT(athlete),SPEC(partial)", 0).unwrap();
        assert!(out.starts_with("[VERB+active+past: comfort | AGENT: * | PATIENT+partial: athlete]"), "{out}");
        assert_eq!(run(&out, "AGENT:CHANGE_SPEC(partial)", 0), Err(DslError::SpecOnAny(RoleLabel::Agent)));
    }

    #[test]
    fn move_and_context_delete() {
        let moved = run(LOC, "LOCATIVE:MOVE", 0).unwrap();
        assert_eq!(moved, "[VERB+active+past: comfort | LOCATIVE+complete: in the operating room] , the doctor <extra_id_0> the athlete <extra_id_1> .");
        // the moved blank still realizes LOCATIVE, not the verb
        let p = apply(&parse_prompt(LOC).unwrap(), &parse_program("LOCATIVE:MOVE").unwrap(), 0).unwrap();
        let a = assign_blanks(&p);
        assert_eq!(a.blanks, vec![vec![CodeRef::Verb], vec![CodeRef::Arg(0)]]);
        assert_eq!(
            run(LOC, "CONTEXT_DELETE_TEXT", 0).unwrap(),
            "[VERB+active+past: comfort | LOCATIVE+complete: in the operating room] <extra_id_0> <extra_id_1>"
        );
        assert_eq!(
            run(LOC, "CONTEXT_DELETE_TEXT(1:4)", 0).unwrap(),
            "[VERB+active+past: comfort | LOCATIVE+complete: in the operating room] <extra_id_0> <extra_id_1> the athlete ."
        );
    }

    #[test]
    fn no_op_program_leaves_prompt_equal() {
        let p = parse_prompt(CORE3).unwrap();
        assert_eq!(apply(&p, &parse_program("CHANGE_VTENSE(past)").unwrap(), 9).unwrap(), p);
    }
}
