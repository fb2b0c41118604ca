//! Compiles SRL-annotated sentences into control-coded prompts, perturbs
//! them with a small operation language, and builds training data and
//! intrinsic metrics around them.

pub mod clients;
pub mod dsl;
pub mod eval;
pub mod morph;
pub mod prompt;
pub mod recipes;
pub mod srl;
pub mod train;

#[cfg(test)]
mod testutil;
