//! Intrinsic metrics: closeness of an edit to what was asked for,
//! controllability by cycle consistency, fluency ratio, and the perplexity
//! filter used to prune generations.

mod closeness;
mod cycle;

pub use closeness::{align_tokens, closeness, expected_spans, span_changed, ClosenessReport, ExpectedSpans, SpanReport};
pub use cycle::{cycle_consistency, verb_check, ArgCheck, ControllabilityReport, Observed, VerbCheck};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("span is empty")]
    EmptySpan,
    #[error("loss must be positive, got {0}")]
    NonPositiveLoss(f64),
    #[error("keep fraction must be in (0, 1], got {0}")]
    KeepFraction(f64),
    #[error("no candidates")]
    NoCandidates,
    #[error("frame {0} does not exist")]
    FrameOutOfRange(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluencyReport {
    pub original_loss: f64,
    pub edited_loss: f64,
    pub ratio: f64,
}

pub fn fluency_ratio(original_loss: f64, edited_loss: f64) -> Result<FluencyReport, EvalError> {
    for loss in [original_loss, edited_loss] {
        if !(loss > 0.0 && loss.is_finite()) {
            return Err(EvalError::NonPositiveLoss(loss));
        }
    }
    Ok(FluencyReport { original_loss, edited_loss, ratio: edited_loss / original_loss })
}

/// Number of items [`perplexity_filter`] keeps out of `n`.
pub fn keep_count(n: usize, keep_fraction: f64) -> usize {
    // the epsilon keeps 0.75 * 8 from rounding up to 7
    ((keep_fraction * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Keeps the `ceil(keep_fraction * n)` lowest-scoring items in their
/// original order. Ties at the cut go to the earlier item.
pub fn perplexity_filter<T: Clone>(candidates: &[(T, f64)], keep_fraction: f64) -> Result<Vec<T>, EvalError> {
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(EvalError::KeepFraction(keep_fraction));
    }
    let keep = keep_count(candidates.len(), keep_fraction);
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[a].1.total_cmp(&candidates[b].1).then(a.cmp(&b)));
    let mut kept = order[..keep].to_vec();
    kept.sort_unstable();
    Ok(kept.into_iter().map(|i| candidates[i].0.clone()).collect())
}

/// The lowest-scoring candidate; the earliest one on ties.
pub fn select_best<T>(candidates: &[(T, f64)]) -> Result<&T, EvalError> {
    let mut best: Option<&(T, f64)> = None;
    for c in candidates {
        if best.is_none_or(|b| c.1.total_cmp(&b.1).is_lt()) {
            best = Some(c);
        }
    }
    best.map(|(t, _)| t).ok_or(EvalError::NoCandidates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fluency() {
        assert_eq!(fluency_ratio(2.0, 2.0).unwrap().ratio, 1.0);
        assert!((fluency_ratio(2.0, 1.964).unwrap().ratio - 0.982).abs() < 1e-12);
        assert_eq!(fluency_ratio(1.0, 3.0).unwrap().ratio, 3.0);
        assert_eq!(fluency_ratio(0.0, 1.0), Err(EvalError::NonPositiveLoss(0.0)));
    }

    #[test]
    fn filter_examples() {
        let eight: Vec<(usize, f64)> = (0..8).map(|i| (i, (8 - i) as f64)).collect();
        assert_eq!(perplexity_filter(&eight, 0.75).unwrap(), vec![2, 3, 4, 5, 6, 7]);
        assert_eq!(perplexity_filter(&eight, 1.0).unwrap(), (0..8).collect::<Vec<_>>());
        let four = [("a", 3.0), ("b", 1.0), ("c", 2.0), ("d", 9.0)];
        assert_eq!(perplexity_filter(&four, 0.5).unwrap(), vec!["b", "c"]);
        let ties = [("a", 1.0), ("b", 1.0), ("c", 1.0)];
        assert_eq!(perplexity_filter(&ties, 0.5).unwrap(), vec!["a", "b"]);
        assert!(perplexity_filter::<u8>(&[], 0.5).unwrap().is_empty());
        assert_eq!(perplexity_filter(&four, 0.0), Err(EvalError::KeepFraction(0.0)));
    }

    #[test]
    fn best() {
        assert_eq!(*select_best(&[("a", 2.0), ("b", 1.0)]).unwrap(), "b");
        assert_eq!(*select_best(&[("a", 2.0)]).unwrap(), "a");
        assert_eq!(*select_best(&[("a", 1.0), ("b", 1.0)]).unwrap(), "a");
        assert_eq!(select_best::<u8>(&[]), Err(EvalError::NoCandidates));
    }
}
