//! The perturbation language.
//!
//! A program is a list of clauses separated by `;` (or `|`). Each clause is
//! an optional `ROLE:` scope followed by comma-separated operations:
//!
//! ```text
//! PATIENT:CHANGE_CONTENT(ham or sausages with),CHANGE_SPEC(partial);ADVERBIAL:DELETE
//! ```
//!
//! Operations apply left to right, each seeing the effect of the previous.

mod apply;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::prompt::PromptError;
use crate::srl::{RoleLabel, Specificity, Tense, Voice};

pub use apply::{apply, apply_clause};
pub use parse::{parse_program, render_program};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("parse error at character {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("role {0} is not in the header")]
    UnknownRole(RoleLabel),
    #[error("SWAP_CORE needs both AGENT and PATIENT codes")]
    MissingCore,
    #[error("cannot set specificity of {0}: its content is '*'")]
    SpecOnAny(RoleLabel),
    #[error("role {0} has no blank of its own")]
    NotMasked(RoleLabel),
    #[error("context position {0} is not a blank")]
    NotBlank(usize),
    #[error("position {index} out of range (context has {len} items)")]
    Range { index: usize, len: usize },
    /// A role op in a global clause or the reverse; only reachable for
    /// programs built in code, the parser rejects them.
    #[error("{0} is in the wrong kind of clause")]
    Misplaced(&'static str),
    #[error(transparent)]
    Prompt(#[from] PromptError),
}

/// One primitive operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbOp {
    ChangeVTense(Tense),
    ChangeVVoice(Voice),
    ChangeVLemma(String),
    SwapCore,
    /// Moves the blank at context position `from` to position `to`
    /// (counted after removal).
    ChangeIdx {
        from: usize,
        to: usize,
    },
    /// Moves the scoped role's blank to a context position; `None` means
    /// sentence-final (before trailing punctuation).
    Move(Option<usize>),
    /// New keyword content; `*` clears it.
    ChangeContent(String),
    ChangeSpec(Specificity),
    Delete,
    /// Removes literal context items in `[start, end)`; `None` removes all.
    ContextDeleteText(Option<(usize, usize)>),
}

impl PerturbOp {
    /// Whether the op needs a `ROLE:` scope.
    pub fn is_role_scoped(&self) -> bool {
        matches!(self, PerturbOp::Move(_) | PerturbOp::ChangeContent(_) | PerturbOp::ChangeSpec(_) | PerturbOp::Delete)
    }

    /// Whether the op edits the verb code.
    pub fn touches_verb(&self) -> bool {
        matches!(self, PerturbOp::ChangeVTense(_) | PerturbOp::ChangeVVoice(_) | PerturbOp::ChangeVLemma(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            PerturbOp::ChangeVTense(_) => "CHANGE_VTENSE",
            PerturbOp::ChangeVVoice(_) => "CHANGE_VVOICE",
            PerturbOp::ChangeVLemma(_) => "CHANGE_VLEMMA",
            PerturbOp::SwapCore => "SWAP_CORE",
            PerturbOp::ChangeIdx { .. } => "CHANGE_IDX",
            PerturbOp::Move(_) => "MOVE",
            PerturbOp::ChangeContent(_) => "CHANGE_CONTENT",
            PerturbOp::ChangeSpec(_) => "CHANGE_SPEC",
            PerturbOp::Delete => "DELETE",
            PerturbOp::ContextDeleteText(_) => "CONTEXT_DELETE_TEXT",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scope {
    Global,
    Role(RoleLabel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub scope: Scope,
    pub ops: Vec<PerturbOp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpProgram {
    pub clauses: Vec<Clause>,
}

impl OpProgram {
    pub fn global(ops: Vec<PerturbOp>) -> Self {
        OpProgram { clauses: vec![Clause { scope: Scope::Global, ops }] }
    }

    pub fn role(role: RoleLabel, ops: Vec<PerturbOp>) -> Self {
        OpProgram { clauses: vec![Clause { scope: Scope::Role(role), ops }] }
    }

    pub fn then(mut self, other: OpProgram) -> Self {
        self.clauses.extend(other.clauses);
        self
    }

    /// Roles named by any clause scope, in first-mention order.
    pub fn roles(&self) -> Vec<RoleLabel> {
        let mut out: Vec<RoleLabel> = Vec::new();
        for c in &self.clauses {
            if let Scope::Role(r) = &c.scope {
                if !out.contains(r) {
                    out.push(r.clone());
                }
            }
        }
        out
    }

    pub fn touches_verb(&self) -> bool {
        self.clauses.iter().flat_map(|c| &c.ops).any(PerturbOp::touches_verb)
    }

    pub fn swaps_core(&self) -> bool {
        self.clauses.iter().flat_map(|c| &c.ops).any(|op| *op == PerturbOp::SwapCore)
    }
}

impl fmt::Display for OpProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_program(self))
    }
}

impl std::str::FromStr for OpProgram {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}
