//! METEOR with exact and stem matching (no synonym stage).

use rust_stemmers::{Algorithm, Stemmer};

const ALPHA: f64 = 0.9;
const BETA: f64 = 3.0;
const GAMMA: f64 = 0.5;

/// Greedy alignment: each hypothesis word, scanned from the end, takes the
/// last unused reference word with the same key.
fn match_words(hyp: &mut Vec<(usize, String)>, reference: &mut Vec<(usize, String)>) -> Vec<(usize, usize)> {
    let mut matches = Vec::new();
    let mut i = hyp.len();
    while i > 0 {
        i -= 1;
        if let Some(j) = reference.iter().rposition(|(_, w)| *w == hyp[i].1) {
            matches.push((hyp[i].0, reference[j].0));
            hyp.remove(i);
            reference.remove(j);
        }
    }
    matches
}

/// Number of runs of matches adjacent in both strings, with matches sorted
/// by hypothesis position.
pub fn count_chunks(matches: &[(usize, usize)]) -> usize {
    if matches.is_empty() {
        return 0;
    }
    1 + matches
        .windows(2)
        .filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1))
        .count()
}

/// Alignment of lowercased whitespace tokens as (hypothesis, reference) index pairs.
pub fn align(pred: &str, gold: &str) -> Vec<(usize, usize)> {
    let stemmer = Stemmer::create(Algorithm::English);
    let mut hyp: Vec<(usize, String)> = pred.split_whitespace().map(str::to_lowercase).enumerate().collect();
    let mut reference: Vec<(usize, String)> = gold.split_whitespace().map(str::to_lowercase).enumerate().collect();
    let mut matches = match_words(&mut hyp, &mut reference);
    let mut hyp_stems: Vec<(usize, String)> = hyp.iter().map(|(i, w)| (*i, stemmer.stem(w).into_owned())).collect();
    let mut ref_stems: Vec<(usize, String)> =
        reference.iter().map(|(i, w)| (*i, stemmer.stem(w).into_owned())).collect();
    matches.extend(match_words(&mut hyp_stems, &mut ref_stems));
    matches.sort_by_key(|m| m.0);
    matches
}

pub fn meteor(pred: &str, gold: &str) -> f64 {
    let hyp_len = pred.split_whitespace().count();
    let ref_len = gold.split_whitespace().count();
    let matches = align(pred, gold);
    let m = matches.len();
    if m == 0 || hyp_len == 0 || ref_len == 0 {
        return 0.0;
    }
    let precision = m as f64 / hyp_len as f64;
    let recall = m as f64 / ref_len as f64;
    let fmean = precision * recall / (ALPHA * precision + (1.0 - ALPHA) * recall);
    let frag = count_chunks(&matches) as f64 / m as f64;
    let penalty = GAMMA * frag.powf(BETA);
    (1.0 - penalty) * fmean
}
