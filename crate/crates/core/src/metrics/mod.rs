//! Answer evaluation: BLEU, ROUGE-L, METEOR, exact match and token F1.

pub mod bleu;
pub mod meteor;
pub mod rouge;
pub mod squad;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bleu::{bleu, sentence_bleu};
pub use meteor::meteor;
pub use rouge::{lcs, rouge_l};
pub use squad::{exact_match, normalize, token_f1};

use crate::error::Error;
use crate::jsonl::read_jsonl;
use crate::pair::DatasetRecord;

/// One line of a prediction file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub prediction: String,
}

/// Per-metric values, fractions for a pair and percentages for aggregates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub bleu: f64,
    pub rouge_l: f64,
    pub meteor: f64,
    pub em: f64,
    pub f1: f64,
}

pub fn score(pred: &str, gold: &str) -> Scores {
    Scores {
        bleu: sentence_bleu(pred, gold),
        rouge_l: rouge_l(pred, gold),
        meteor: meteor(pred, gold),
        em: exact_match(pred, gold),
        f1: token_f1(pred, gold),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub id: String,
    #[serde(flatten)]
    pub scores: Scores,
    /// No prediction was supplied; every score is 0.
    pub missing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub count: usize,
    pub missing: usize,
    pub excluded_yes_no: usize,
    /// Means over scored pairs, times 100.
    pub aggregate: Scores,
    pub pairs: Vec<PairScore>,
}

impl MetricReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let a = &self.aggregate;
        let mut out = String::new();
        let _ = writeln!(out, "{:<8} {:>8}", "metric", "score");
        for (name, v) in [("BLEU", a.bleu), ("ROUGE-L", a.rouge_l), ("METEOR", a.meteor), ("EM", a.em), ("F1", a.f1)] {
            let _ = writeln!(out, "{name:<8} {v:>8.2}");
        }
        let _ = writeln!(
            out,
            "pairs {} (missing predictions {}, yes/no excluded {})",
            self.count, self.missing, self.excluded_yes_no
        );
        out
    }
}

fn mean_percent(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        100.0 * values.sum::<f64>() / n as f64
    }
}

/// Score predictions against gold records matched by id.
///
/// Gold pairs without a prediction score 0 and are counted as missing; a
/// prediction whose id is not a gold id is an error.
pub fn evaluate(predictions: &[Prediction], golds: &[DatasetRecord], exclude_yes_no: bool) -> Result<MetricReport, Error> {
    let gold_ids: BTreeSet<&str> = golds.iter().map(|g| g.id.as_str()).collect();
    let mut by_id: BTreeMap<&str, &str> = BTreeMap::new();
    let mut unknown = Vec::new();
    let mut repeated = Vec::new();
    for p in predictions {
        if !gold_ids.contains(p.id.as_str()) {
            unknown.push(p.id.clone());
        } else if by_id.insert(&p.id, &p.prediction).is_some() {
            repeated.push(p.id.clone());
        }
    }
    if !unknown.is_empty() {
        return Err(Error::Invalid(format!("unknown prediction ids: {}", unknown.join(", "))));
    }
    if !repeated.is_empty() {
        return Err(Error::Invalid(format!("repeated prediction ids: {}", repeated.join(", "))));
    }

    let scored: Vec<&DatasetRecord> = golds.iter().filter(|g| !(exclude_yes_no && g.is_yes_no_answer())).collect();
    let excluded_yes_no = golds.len() - scored.len();
    let pairs: Vec<PairScore> = scored
        .par_iter()
        .map(|g| match by_id.get(g.id.as_str()) {
            Some(pred) => PairScore { id: g.id.clone(), scores: score(pred, &g.answer), missing: false },
            None => PairScore { id: g.id.clone(), scores: Scores::default(), missing: true },
        })
        .collect();
    let n = pairs.len();
    let aggregate = Scores {
        bleu: mean_percent(pairs.iter().map(|p| p.scores.bleu), n),
        rouge_l: mean_percent(pairs.iter().map(|p| p.scores.rouge_l), n),
        meteor: mean_percent(pairs.iter().map(|p| p.scores.meteor), n),
        em: mean_percent(pairs.iter().map(|p| p.scores.em), n),
        f1: mean_percent(pairs.iter().map(|p| p.scores.f1), n),
    };
    Ok(MetricReport {
        count: n,
        missing: pairs.iter().filter(|p| p.missing).count(),
        excluded_yes_no,
        aggregate,
        pairs,
    })
}

pub fn evaluate_files(pred_path: &Path, gold_path: &Path, exclude_yes_no: bool) -> Result<MetricReport, Error> {
    let preds: Vec<Prediction> = read_jsonl(pred_path)?;
    let golds: Vec<DatasetRecord> = read_jsonl(gold_path)?;
    evaluate(&preds, &golds, exclude_yes_no)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::QType;

    fn gold(id: &str, answer: &str) -> DatasetRecord {
        DatasetRecord {
            id: id.into(),
            code_id: "c".into(),
            code_tokens: vec![],
            question: "What?".into(),
            answer: answer.into(),
            qtype: QType::What,
            source: "dp:nsubj".into(),
        }
    }

    fn pred(id: &str, p: &str) -> Prediction {
        Prediction { id: id.into(), prediction: p.into() }
    }

    #[test]
    fn perfect_and_missing() {
        let golds = vec![gold("a", "the given child"), gold("b", "in asc order"), gold("c", "Yes")];
        let perfect: Vec<_> = golds.iter().map(|g| pred(&g.id, &g.answer)).collect();
        let r = evaluate(&perfect, &golds, false).unwrap();
        assert_eq!(r.aggregate.em, 100.0);
        assert_eq!(r.aggregate.f1, 100.0);
        assert_eq!(r.aggregate.rouge_l, 100.0);
        assert_eq!(r.aggregate.bleu, 100.0);

        let r = evaluate(&perfect[..1], &golds, true).unwrap();
        assert_eq!((r.count, r.missing, r.excluded_yes_no), (2, 1, 1));
        assert_eq!(r.aggregate.em, 50.0);

        let empty: Vec<_> = golds.iter().map(|g| pred(&g.id, "")).collect();
        let r = evaluate(&empty, &golds, false).unwrap();
        assert_eq!((r.aggregate.em, r.aggregate.f1), (0.0, 0.0));
    }

    #[test]
    fn unknown_ids_are_listed() {
        let golds = vec![gold("a", "x")];
        let err = evaluate(&[pred("zz", "x"), pred("yy", "x")], &golds, false).unwrap_err();
        assert!(err.to_string().contains("zz, yy"), "{err}");
    }
}
