use super::{ContextItem, Owner, PromptSpec};
use crate::srl::{RoleLabel, Voice};

/// A header code: the verb or an argument by header position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeRef {
    Verb,
    Arg(usize),
}

/// Which codes are realized in which blank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlankAssignment {
    /// Per blank, in left-to-right order.
    pub blanks: Vec<Vec<CodeRef>>,
    /// Codes with no blank to go to (context without blanks).
    pub trailing: Vec<CodeRef>,
}

impl BlankAssignment {
    pub fn blank_of(&self, code: CodeRef) -> Option<usize> {
        self.blanks.iter().position(|b| b.contains(&code))
    }
}

fn is_role(prompt: &PromptSpec, code: CodeRef, role: &RoleLabel) -> bool {
    matches!(code, CodeRef::Arg(i) if &prompt.header.args[i].role == role)
}

/// Decides which blank each header code fills.
///
/// Blanks opened for a code at compile time keep it. Remaining codes go to
/// the remaining blanks left to right in realization order: adjuncts in
/// header order, then the core clause (agent, verb, patient when active;
/// patient, verb, agent when passive). Codes left over share the last
/// blank. Finally, if the agent and patient sit in two single-code blanks
/// in an order contradicting the voice, they trade places.
pub fn assign_blanks(prompt: &PromptSpec) -> BlankAssignment {
    let args = &prompt.header.args;
    let owners: Vec<Option<Owner>> = prompt
        .context
        .iter()
        .filter_map(|i| match i {
            ContextItem::Blank { owner } => Some(*owner),
            ContextItem::Literal { .. } => None,
        })
        .collect();
    let mut blanks: Vec<Vec<CodeRef>> = vec![Vec::new(); owners.len()];
    let mut placed = vec![false; args.len()];
    let mut verb_placed = false;
    let mut free: Vec<usize> = Vec::new();

    for (b, owner) in owners.iter().enumerate() {
        match owner {
            Some(Owner::Verb) if !verb_placed => {
                blanks[b].push(CodeRef::Verb);
                verb_placed = true;
            }
            Some(Owner::Arg(id)) => match (0..args.len()).find(|&i| !placed[i] && args[i].id == Some(*id)) {
                Some(i) => {
                    blanks[b].push(CodeRef::Arg(i));
                    placed[i] = true;
                }
                None => free.push(b),
            },
            _ => free.push(b),
        }
    }

    let core = |role: RoleLabel| (0..args.len()).filter(move |&i| args[i].role == role).map(CodeRef::Arg);
    let mut order: Vec<CodeRef> = (0..args.len()).filter(|&i| !args[i].role.is_core()).map(CodeRef::Arg).collect();
    let (first, second) = match prompt.header.verb.voice {
        Voice::Active => (RoleLabel::Agent, RoleLabel::Patient),
        Voice::Passive => (RoleLabel::Patient, RoleLabel::Agent),
    };
    order.extend(core(first.clone()));
    order.push(CodeRef::Verb);
    order.extend(core(second.clone()));
    let pending: Vec<CodeRef> = order
        .into_iter()
        .filter(|c| match c {
            CodeRef::Verb => !verb_placed,
            CodeRef::Arg(i) => !placed[*i],
        })
        .collect();

    let mut trailing = Vec::new();
    for (k, code) in pending.into_iter().enumerate() {
        if let Some(&b) = free.get(k) {
            blanks[b].push(code);
        } else if let Some(last) = blanks.last_mut() {
            last.push(code);
        } else {
            trailing.push(code);
        }
    }

    let single = |role: &RoleLabel, blanks: &[Vec<CodeRef>]| -> Option<usize> {
        let hits: Vec<usize> =
            blanks.iter().enumerate().filter(|(_, b)| b.iter().any(|&c| is_role(prompt, c, role))).map(|(i, _)| i).collect();
        match hits.as_slice() {
            [b] if blanks[*b].len() == 1 => Some(*b),
            _ => None,
        }
    };
    if let (Some(a), Some(b)) = (single(&first, &blanks), single(&second, &blanks)) {
        if a > b {
            blanks.swap(a, b);
        }
    }

    BlankAssignment { blanks, trailing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::parse_prompt;

    fn assigned(text: &str) -> Vec<Vec<CodeRef>> {
        assign_blanks(&parse_prompt(text).unwrap()).blanks
    }

    #[test]
    fn adjuncts_then_core_clause() {
        let b = assigned("[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+partial: athlete | LOCATIVE+partial: in] <extra_id_0> , <extra_id_1> <extra_id_2> <extra_id_3> .");
        assert_eq!(b, vec![vec![CodeRef::Arg(2)], vec![CodeRef::Arg(0)], vec![CodeRef::Verb], vec![CodeRef::Arg(1)]]);
    }

    #[test]
    fn passive_puts_patient_first() {
        let b = assigned("[VERB+passive+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete] <extra_id_0> <extra_id_1> <extra_id_2>");
        assert_eq!(b, vec![vec![CodeRef::Arg(1)], vec![CodeRef::Verb], vec![CodeRef::Arg(0)]]);
    }

    #[test]
    fn leftovers_share_the_last_blank() {
        let b = assigned(
            "[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+complete: the athlete] In the room <extra_id_0>",
        );
        assert_eq!(b, vec![vec![CodeRef::Arg(0), CodeRef::Verb, CodeRef::Arg(1)]]);
        let none = assign_blanks(&parse_prompt("[VERB+active+past: go] home").unwrap());
        assert_eq!(none.trailing, vec![CodeRef::Verb]);
    }
}
