//! Training data: positive examples sampled from gold frames, and up to
//! three negatives per positive whose controls no longer match the target
//! (rewarded -1 for unlikelihood training).

mod sample;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::prompt::PromptError;
use crate::srl::SrlSentence;

pub use sample::{gen_negatives, sample_positive, sample_positive_prompt};
pub use table::{build_keyword_table, KeywordTable, TABLE_TOP_K};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Positive,
    /// Role labels swapped or remapped, verb voice and tense changed.
    Controls,
    /// Keyword contents (and the lemma) resampled from the keyword table.
    Contents,
    /// Every specificity changed.
    Specificity,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Positive => "positive",
            Strategy::Controls => "controls",
            Strategy::Contents => "contents",
            Strategy::Specificity => "specificity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub sentence: usize,
    pub frame: usize,
    pub strategy: Strategy,
    /// Negative strategies that had nothing to perturb (positives only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Strategy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub input: String,
    pub target: String,
    pub reward: i8,
    pub provenance: Provenance,
}

/// Deterministically derives a seed from a base seed and a path of
/// indices (splitmix64 finalizer per step).
pub fn mix_seed(seed: u64, parts: &[u64]) -> u64 {
    let mut z = seed;
    for &p in parts {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(p.wrapping_mul(0xbf58_476d_1ce4_e5b9));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
    }
    z
}

/// The positive and negatives for one frame, positive first. Seeds derive
/// from `(seed, sentence_id, frame_idx)`, so output does not depend on
/// processing order.
pub fn frame_examples(
    sentence: &SrlSentence,
    sentence_id: usize,
    frame_idx: usize,
    table: &KeywordTable,
    seed: u64,
) -> Result<Vec<TrainingExample>, PromptError> {
    let base = [sentence_id as u64, frame_idx as u64];
    let mut positive = sample_positive(sentence, sentence_id, frame_idx, mix_seed(seed, &[base[0], base[1], 0]))?;
    let (negatives, skipped) = gen_negatives(&positive, table, mix_seed(seed, &[base[0], base[1], 1]))?;
    positive.provenance.skipped = skipped;
    let mut out = Vec::with_capacity(1 + negatives.len());
    out.push(positive);
    out.extend(negatives);
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub positives: usize,
    pub negatives: usize,
    pub skipped: BTreeMap<Strategy, usize>,
    /// (sentence, frame, message) for frames that could not be compiled.
    pub failures: Vec<(usize, usize, String)>,
}

impl DatasetSummary {
    pub fn record(&mut self, examples: &[TrainingExample]) {
        for ex in examples {
            if ex.reward > 0 {
                self.positives += 1;
                for s in &ex.provenance.skipped {
                    *self.skipped.entry(*s).or_default() += 1;
                }
            } else {
                self.negatives += 1;
            }
        }
    }
}

/// Streams examples for every frame of every sentence, in corpus order.
/// Frames that fail are recorded in the summary and skipped; an error
/// from `sink` stops the run.
pub fn gen_dataset<E>(
    corpus: &[SrlSentence],
    table: &KeywordTable,
    seed: u64,
    mut sink: impl FnMut(&TrainingExample) -> Result<(), E>,
) -> Result<DatasetSummary, E> {
    let mut summary = DatasetSummary::default();
    for (si, sentence) in corpus.iter().enumerate() {
        for fi in 0..sentence.frames.len() {
            match frame_examples(sentence, si, fi, table, seed) {
                Ok(examples) => {
                    summary.record(&examples);
                    for ex in &examples {
                        sink(ex)?;
                    }
                }
                Err(e) => summary.failures.push((si, fi, e.to_string())),
            }
        }
    }
    Ok(summary)
}
