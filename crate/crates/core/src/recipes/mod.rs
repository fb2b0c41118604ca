//! Named perturbation strategies built from compile + the op language:
//! NLI augmentation, contrast-set recipes and style transfers.
//!
//! Every recipe compiles a base prompt for a frame and pairs it with an
//! [`OpProgram`]; the perturbed prompt is the program applied to the base.

mod contrast;
mod nli;
mod style;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsl::{apply, DslError, OpProgram};
use crate::prompt::{compile, CompileOptions, ExtraBlanks, MaskSpec, PromptError, PromptSpec};
use crate::srl::{Keyword, SrlSentence};

pub use contrast::{contrast_recipe, pp_attachment_swap, preposition_role, ContrastRecipe, PpDirection};
pub use nli::{labeled_pair, nli_perturb, LabeledPair, NliLabel, NliOutcome, NliStrategy};
pub use style::{style_transfer_program, StyleTransfer};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecipeError {
    #[error("recipe does not apply: {0}")]
    Inapplicable(String),
    #[error("missing or invalid recipe parameter: {0}")]
    Parameter(String),
    #[error("unknown recipe {0:?}")]
    UnknownRecipe(String),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

/// One perturbation candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecipeOutput {
    pub recipe: String,
    pub frame: usize,
    pub base: PromptSpec,
    pub program: OpProgram,
    pub perturbed: PromptSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<NliLabel>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

pub type Params = BTreeMap<String, String>;

/// Parses `k=v,k=v`. Values may not contain commas.
pub fn parse_params(text: &str) -> Result<Params, RecipeError> {
    let mut out = Params::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| RecipeError::Parameter(format!("expected key=value, got {part:?}")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub(crate) fn param<'a>(params: &'a Params, key: &str) -> Result<&'a str, RecipeError> {
    params.get(key).map(String::as_str).ok_or_else(|| RecipeError::Parameter(key.to_string()))
}

pub(crate) fn frame_param(params: &Params) -> Result<Option<usize>, RecipeError> {
    params.get("frame").map(|f| f.parse().map_err(|_| RecipeError::Parameter(format!("frame={f:?}")))).transpose()
}

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "his", "her", "their", "its", "my", "our", "your", "some", "by", "who",
    "what", "which", "how", "when", "where", "why",
];

/// Adjusts the first letter of `content` for its new position: capitalized
/// at the start of a sentence, lowercased elsewhere when it begins with a
/// function word (proper nouns keep their case).
pub(crate) fn recase(content: &str, sentence_initial: bool) -> String {
    let mut chars = content.chars();
    let Some(first) = chars.next() else { return String::new() };
    let first_word = content.split(' ').next().unwrap_or("").to_lowercase();
    if sentence_initial {
        first.to_uppercase().chain(chars).collect()
    } else if DETERMINERS.contains(&first_word.as_str()) {
        first.to_lowercase().chain(chars).collect()
    } else {
        content.to_string()
    }
}

pub(crate) fn strip_by(content: &str) -> String {
    let lower = content.to_lowercase();
    if lower.starts_with("by ") {
        content[3..].to_string()
    } else {
        content.to_string()
    }
}

pub(crate) fn add_by(content: &str) -> String {
    if content.to_lowercase().starts_with("by ") {
        content.to_string()
    } else {
        format!("by {content}")
    }
}

pub(crate) struct Build<'a> {
    pub sentence: &'a SrlSentence,
    pub frame: usize,
    pub masked: Vec<usize>,
    pub extras: usize,
    pub keywords: BTreeMap<usize, Keyword>,
    pub seed: u64,
}

impl<'a> Build<'a> {
    pub fn new(sentence: &'a SrlSentence, frame: usize, masked: Vec<usize>, seed: u64) -> Self {
        Build { sentence, frame, masked, extras: 0, keywords: BTreeMap::new(), seed }
    }

    pub fn base(&self) -> Result<PromptSpec, RecipeError> {
        let options = CompileOptions {
            mask: MaskSpec::Args(self.masked.clone()),
            extra: ExtraBlanks::Count(self.extras),
            keywords: self.keywords.clone(),
            seed: self.seed,
        };
        Ok(compile(self.sentence, self.frame, &options)?)
    }

    pub fn finish(&self, recipe: &str, base: PromptSpec, program: OpProgram) -> Result<RecipeOutput, RecipeError> {
        let perturbed = apply(&base, &program, self.seed)?;
        Ok(RecipeOutput {
            recipe: recipe.to_string(),
            frame: self.frame,
            base,
            program,
            perturbed,
            label: None,
            metadata: BTreeMap::new(),
        })
    }
}

/// Recipe names accepted by [`run_recipe`].
pub const RECIPE_NAMES: &[&str] = &[
    "untangle_relative_clause",
    "shorten_core",
    "change_voice",
    "replace_core_with_subsequences",
    "swap_core",
    "pp_to_noun",
    "pp_to_verb",
    "change_entity",
    "matres_change_tense",
    "matres_change_order",
    "qa_swap_answer_to_agent",
    "style:<transfer>[+<transfer>...]",
];

/// Dispatches a recipe by name.
///
/// Parameters: `frame` (index; defaults per recipe), `prep` for the PP
/// recipes, `role` and `text` for `change_entity`, `tense` for
/// `matres_change_tense`, `answer` (and optionally `wh`, `role`) for
/// `qa_swap_answer_to_agent`. NLI strategies and style transfers run on
/// every frame; NLI frames that do not apply are skipped silently here
/// (see [`nli_perturb`] for the reasons).
pub fn run_recipe(name: &str, sentence: &SrlSentence, params: &Params, seed: u64) -> Result<Vec<RecipeOutput>, RecipeError> {
    if let Ok(strategy) = name.parse::<NliStrategy>() {
        return Ok(nli_perturb(sentence, strategy, seed).outputs);
    }
    if let Some(spec) = name.strip_prefix("style:") {
        let transfers = StyleTransfer::parse_list(spec)?;
        return Ok(style_transfer_program(sentence, &transfers, seed));
    }
    match name {
        "pp_to_noun" | "pp_to_verb" => {
            let direction = if name == "pp_to_noun" { PpDirection::ToNoun } else { PpDirection::ToVerb };
            let frame = frame_param(params)?.unwrap_or(0);
            Ok(vec![pp_attachment_swap(sentence, frame, direction, param(params, "prep")?, seed)?])
        }
        other => {
            let recipe: ContrastRecipe = other.parse()?;
            Ok(vec![contrast_recipe(sentence, recipe, params, seed)?])
        }
    }
}

impl fmt::Display for NliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NliLabel::Entailment => "entailment",
            NliLabel::Neutral => "neutral",
        })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::srl::SrlSentence;
    use crate::testutil::sentence;

    pub fn relative_clause() -> SrlSentence {
        sentence(
            r#"{"tokens":[{"text":"The","pos":"DT"},{"text":"athlete","pos":"NN"},{"text":"who","pos":"WP"},{"text":"was","pos":"VBD"},{"text":"seen","pos":"VBN","lemma":"see"},{"text":"by","pos":"IN"},{"text":"the","pos":"DT"},{"text":"judges","pos":"NNS"},{"text":"yesterday","pos":"NN"},{"text":"called","pos":"VBD","lemma":"call"},{"text":"the","pos":"DT"},{"text":"manager","pos":"NN"},{"text":".","pos":"."}],"frames":[{"verb_index":4,"args":[{"tag":"ARG1","start":0,"end":2},{"tag":"R-ARG1","start":2,"end":3},{"tag":"ARG0","start":5,"end":8},{"tag":"ARGM-TMP","start":8,"end":9}]},{"verb_index":9,"args":[{"tag":"ARG0","start":0,"end":9},{"tag":"ARG1","start":10,"end":12}]}],"chunks":[[0,2],[6,8],[10,12]]}"#,
        )
    }
}
