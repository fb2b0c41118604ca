//! Benchmark fixtures.

use tailor_core::srl::{parse_corpus, SrlSentence};

pub const CORPUS: &str = include_str!("../../core/tests/fixtures/corpus100.jsonl");

pub fn corpus() -> Vec<SrlSentence> {
    parse_corpus(CORPUS).expect("fixture parses").sentences
}
