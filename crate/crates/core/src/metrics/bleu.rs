//! Smoothed sentence-level BLEU-4.

use std::collections::HashMap;

use crate::error::Error;

pub const MAX_ORDER: usize = 4;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for w in tokens.windows(n) {
        *counts.entry(w).or_insert(0) += 1;
    }
    counts
}

/// Clipped n-gram matches and the number of hypothesis n-grams.
pub fn ngram_stats(hyp: &[String], reference: &[String], n: usize) -> (usize, usize) {
    let total = (hyp.len() + 1).saturating_sub(n);
    let h = ngram_counts(hyp, n);
    let r = ngram_counts(reference, n);
    let matched = h.iter().map(|(g, c)| (*c).min(r.get(g).copied().unwrap_or(0))).sum();
    (matched, total)
}

/// BLEU-4 of one pair on lowercased whitespace tokens. Orders above one use
/// add-one smoothing, `(m + 1) / (g + 1)`; a zero unigram precision gives 0.
pub fn sentence_bleu(pred: &str, gold: &str) -> f64 {
    let hyp: Vec<String> = pred.split_whitespace().map(str::to_lowercase).collect();
    let reference: Vec<String> = gold.split_whitespace().map(str::to_lowercase).collect();
    let c = hyp.len();
    let r = reference.len();
    if c == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=MAX_ORDER {
        let (m, g) = ngram_stats(&hyp, &reference, n);
        let p = if n == 1 {
            if m == 0 {
                return 0.0;
            }
            m as f64 / g as f64
        } else {
            (m as f64 + 1.0) / (g as f64 + 1.0)
        };
        log_sum += p.ln();
    }
    let bp = if c >= r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * (log_sum / MAX_ORDER as f64).exp()
}

/// Mean sentence BLEU over aligned lists.
pub fn bleu<S: AsRef<str>>(preds: &[S], golds: &[S]) -> Result<f64, Error> {
    if preds.len() != golds.len() {
        return Err(Error::Invalid(format!(
            "{} predictions for {} references",
            preds.len(),
            golds.len()
        )));
    }
    if preds.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = preds.iter().zip(golds).map(|(p, g)| sentence_bleu(p.as_ref(), g.as_ref())).sum();
    Ok(sum / preds.len() as f64)
}
