use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::dsl::{apply_clause, Clause, OpProgram, PerturbOp, Scope};
use crate::prompt::{assign_blanks, CodeRef, ContextItem, Label, PromptSpec};
use crate::srl::{RoleLabel, SrlSentence};

/// For each original token, whether a minimal unit-cost edit script
/// substitutes or deletes it. Ties in the backtrace prefer the diagonal,
/// then deletion, then insertion.
pub fn align_tokens<A: AsRef<str>, B: AsRef<str>>(original: &[A], edited: &[B]) -> Vec<bool> {
    let (n, m) = (original.len(), edited.len());
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dp[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = usize::from(original[i - 1].as_ref() != edited[j - 1].as_ref());
            dp[i][j] = (dp[i - 1][j - 1] + sub).min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
        }
    }
    let mut changed = vec![false; n];
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let sub = usize::from(original[i - 1].as_ref() != edited[j - 1].as_ref());
            if dp[i][j] == dp[i - 1][j - 1] + sub {
                changed[i - 1] = sub == 1;
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && dp[i][j] == dp[i - 1][j] + 1 {
            changed[i - 1] = true;
            i -= 1;
        } else {
            j -= 1;
        }
    }
    changed
}

/// Whether at least half of a span's tokens were substituted or deleted,
/// given the per-token flags from [`align_tokens`] restricted to the span.
pub fn span_changed(flags: &[bool]) -> Result<bool, EvalError> {
    if flags.is_empty() {
        return Err(EvalError::EmptySpan);
    }
    Ok(2 * flags.iter().filter(|&&f| f).count() >= flags.len())
}

/// Spans an edit is meant to touch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedSpans {
    pub verb: bool,
    pub roles: BTreeSet<RoleLabel>,
}

impl ExpectedSpans {
    fn add_code(&mut self, prompt: &PromptSpec, code: CodeRef) {
        match code {
            CodeRef::Verb => self.verb = true,
            CodeRef::Arg(i) => {
                self.roles.insert(prompt.header.args[i].role.clone());
            }
        }
    }
}

/// Every role scoped by a clause, both core roles for `SWAP_CORE`, the
/// verb for verb ops, the codes of a blank moved by `CHANGE_IDX`, and the
/// source arguments whose tokens `CONTEXT_DELETE_TEXT` removes. Ops are
/// replayed on `prompt` so positions refer to the state each op sees.
pub fn expected_spans(prompt: &PromptSpec, program: &OpProgram) -> ExpectedSpans {
    let mut out = ExpectedSpans::default();
    let mut state = prompt.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for clause in &program.clauses {
        if let Scope::Role(r) = &clause.scope {
            out.roles.insert(r.clone());
        }
        for op in &clause.ops {
            match op {
                op if op.touches_verb() => out.verb = true,
                PerturbOp::SwapCore => {
                    out.roles.insert(RoleLabel::Agent);
                    out.roles.insert(RoleLabel::Patient);
                }
                PerturbOp::ChangeIdx { from, .. } if state.context.get(*from).is_some_and(ContextItem::is_blank) => {
                    let ordinal = state.context[..*from].iter().filter(|i| i.is_blank()).count();
                    for &code in &assign_blanks(&state).blanks[ordinal] {
                        out.add_code(&state, code);
                    }
                }
                PerturbOp::ContextDeleteText(range) => {
                    let (a, b) = range.unwrap_or((0, state.context.len()));
                    let tokens = state.context.iter().take(b.min(state.context.len())).skip(a).filter_map(|i| match i {
                        ContextItem::Literal { token: Some(t), .. } => Some(*t),
                        _ => None,
                    });
                    if let Some(src) = &state.source {
                        for t in tokens {
                            if src.verb_group.contains(&t) {
                                out.verb = true;
                            }
                            for arg in src.args.iter().filter(|a| a.start <= t && t < a.end) {
                                out.roles.insert(arg.role.clone());
                            }
                        }
                    }
                }
                _ => {}
            }
            let single = Clause { scope: clause.scope.clone(), ops: vec![op.clone()] };
            if apply_clause(&mut state, &single, &mut rng).is_err() {
                return out;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub label: Label,
    pub start: usize,
    pub end: usize,
    pub expected: bool,
    pub changed: bool,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosenessReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_span: Vec<SpanReport>,
}

/// Length-weighted F1 between the spans of frame `frame_idx` that changed
/// in `edited` and the spans expected to change. Spans are the frame's
/// arguments plus the predicate token; tokens compare exactly.
pub fn closeness(
    original: &SrlSentence,
    frame_idx: usize,
    edited: &str,
    expected: &ExpectedSpans,
) -> Result<ClosenessReport, EvalError> {
    let frame = original.frames.get(frame_idx).ok_or(EvalError::FrameOutOfRange(frame_idx))?;
    let orig: Vec<&str> = original.tokens.iter().map(|t| t.text.as_str()).collect();
    let edit: Vec<&str> = edited.split_whitespace().collect();
    let flags = align_tokens(&orig, &edit);

    let mut spans: Vec<(Label, usize, usize)> =
        frame.args.iter().map(|a| (Label::Role(a.role.clone()), a.start, a.end)).collect();
    spans.push((Label::Verb, frame.verb_index, frame.verb_index + 1));
    spans.sort_by_key(|s| s.1);

    let mut per_span = Vec::with_capacity(spans.len());
    let (mut both, mut changed_w, mut expected_w) = (0usize, 0usize, 0usize);
    for (label, start, end) in spans {
        let changed = span_changed(&flags[start..end])?;
        let is_expected = match &label {
            Label::Verb => expected.verb,
            Label::Role(r) => expected.roles.contains(r),
        };
        let weight = end - start;
        if changed {
            changed_w += weight;
        }
        if is_expected {
            expected_w += weight;
        }
        if changed && is_expected {
            both += weight;
        }
        per_span.push(SpanReport { label, start, end, expected: is_expected, changed, weight });
    }
    let (precision, recall, f1) = if changed_w == 0 && expected_w == 0 {
        (1.0, 1.0, 1.0)
    } else {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let (p, r) = (ratio(both, changed_w), ratio(both, expected_w));
        (p, r, if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) })
    };
    Ok(ClosenessReport { precision, recall, f1, per_span })
}
