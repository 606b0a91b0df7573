//! Dataset statistics, answer rates and question-type partitioning.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pair::{DatasetRecord, QType};
use crate::text::strip_terminal_punct;

const PREFIXES: &[(&str, QType)] = &[
    ("for what purpose", QType::ForWhatPurpose),
    ("where", QType::Where),
    ("what", QType::What),
    ("when", QType::When),
    ("how", QType::How),
    ("why", QType::Why),
];

const YES_NO_OPENERS: &[&str] = &[
    "do", "does", "did", "is", "are", "was", "were", "am", "be", "has", "have", "had", "can", "could",
    "will", "would", "shall", "should", "may", "might", "must",
];

/// Manual taxonomy labels; reported for reference, never assigned automatically.
pub const MANUAL_TAXONOMY: &[&str] = &["functionality", "purpose", "property", "workflow"];

/// Question type by longest case-insensitive prefix; auxiliary or do-form
/// openers give Yes/No.
pub fn categorize_question(question: &str) -> QType {
    let lower = question.trim().to_lowercase();
    let mut best: Option<(usize, QType)> = None;
    for &(prefix, qtype) in PREFIXES {
        if let Some(rest) = lower.strip_prefix(prefix) {
            let boundary = rest.chars().next().is_none_or(|c| !c.is_alphanumeric());
            if boundary && best.is_none_or(|(len, _)| prefix.len() > len) {
                best = Some((prefix.len(), qtype));
            }
        }
    }
    if let Some((_, qtype)) = best {
        return qtype;
    }
    let first: String = lower.chars().take_while(|c| c.is_alphanumeric() || *c == '\'').collect();
    if YES_NO_OPENERS.contains(&first.as_str()) {
        QType::YesNo
    } else {
        QType::Other
    }
}

/// Answer key for repetition checks: lowercase, no terminal punctuation,
/// single spaces.
pub fn normalize_answer(answer: &str) -> String {
    strip_terminal_punct(&answer.to_lowercase())
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Share of non-yes/no answers in `eval` that also occur as a training answer.
pub fn repetition_rate(eval: &[DatasetRecord], train: &[DatasetRecord]) -> f64 {
    let seen: HashSet<String> = train
        .iter()
        .filter(|r| !r.is_yes_no_answer())
        .map(|r| normalize_answer(&r.answer))
        .collect();
    let candidates: Vec<&DatasetRecord> = eval.iter().filter(|r| !r.is_yes_no_answer()).collect();
    let hits = candidates.iter().filter(|r| seen.contains(&normalize_answer(&r.answer))).count();
    percent(hits, candidates.len())
}

fn answer_tokens(answer: &str) -> Vec<String> {
    normalize_answer(answer).split_whitespace().map(str::to_string).collect()
}

fn lower_code(record: &DatasetRecord) -> Vec<String> {
    record.code_tokens.iter().map(|t| t.to_lowercase()).collect()
}

/// Whether the answer is a contiguous run of code tokens.
pub fn is_span_answer(record: &DatasetRecord) -> bool {
    let answer = answer_tokens(&record.answer);
    let code = lower_code(record);
    !answer.is_empty() && code.windows(answer.len()).any(|w| w == answer.as_slice())
}

/// Whether every answer token occurs somewhere in the code.
pub fn is_extractive_answer(record: &DatasetRecord) -> bool {
    let answer = answer_tokens(&record.answer);
    let code: HashSet<String> = lower_code(record).into_iter().collect();
    !answer.is_empty() && answer.iter().all(|t| code.contains(t))
}

pub fn span_rate(pairs: &[DatasetRecord]) -> f64 {
    percent(pairs.par_iter().filter(|r| is_span_answer(r)).count(), pairs.len())
}

pub fn extraction_rate(pairs: &[DatasetRecord]) -> f64 {
    percent(pairs.par_iter().filter(|r| is_extractive_answer(r)).count(), pairs.len())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub name: String,
    pub pairs: usize,
    pub unique_codes: usize,
    pub unique_code_tokens: usize,
    pub unique_question_tokens: usize,
    pub unique_answer_tokens: usize,
    /// Averaged over unique codes.
    pub avg_code_tokens: f64,
    pub avg_question_tokens: f64,
    pub avg_answer_tokens: f64,
    /// Set when the split holds no pairs and every figure is zero.
    pub empty: bool,
}

fn mean(total: usize, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    }
}

pub fn split_stats(name: &str, pairs: &[DatasetRecord]) -> SplitStats {
    let mut codes: BTreeMap<&str, &[String]> = BTreeMap::new();
    let mut q_vocab: HashSet<&str> = HashSet::new();
    let mut a_vocab: HashSet<&str> = HashSet::new();
    let (mut q_total, mut a_total) = (0, 0);
    for r in pairs {
        codes.entry(&r.code_id).or_insert(&r.code_tokens);
        for t in r.question.split_whitespace() {
            q_vocab.insert(t);
            q_total += 1;
        }
        for t in r.answer.split_whitespace() {
            a_vocab.insert(t);
            a_total += 1;
        }
    }
    let code_vocab: HashSet<&str> = codes.values().flat_map(|t| t.iter().map(String::as_str)).collect();
    let code_total: usize = codes.values().map(|t| t.len()).sum();
    SplitStats {
        name: name.to_string(),
        pairs: pairs.len(),
        unique_codes: codes.len(),
        unique_code_tokens: code_vocab.len(),
        unique_question_tokens: q_vocab.len(),
        unique_answer_tokens: a_vocab.len(),
        avg_code_tokens: mean(code_total, codes.len()),
        avg_question_tokens: mean(q_total, pairs.len()),
        avg_answer_tokens: mean(a_total, pairs.len()),
        empty: pairs.is_empty(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QTypeShare {
    pub qtype: QType,
    pub count: usize,
    pub percent: f64,
}

/// Question-type counts over all questions, in a fixed type order.
pub fn qtype_distribution<'a, I>(questions: I) -> Vec<QTypeShare>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: BTreeMap<QType, usize> = QType::ALL.iter().map(|&q| (q, 0)).collect();
    let mut total = 0;
    for q in questions {
        *counts.entry(categorize_question(q)).or_default() += 1;
        total += 1;
    }
    QType::ALL
        .iter()
        .map(|q| QTypeShare { qtype: *q, count: counts[q], percent: percent(counts[q], total) })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub name: String,
    /// Against the training split; absent for the training split itself.
    pub repetition: Option<f64>,
    pub span: f64,
    pub extraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub splits: Vec<SplitStats>,
    pub qtypes: Vec<QTypeShare>,
    pub rates: Vec<RateRow>,
    pub manual_taxonomy: Vec<String>,
}

/// Statistics over named splits. A split called `train` is the reference for
/// repetition rates; an `all` rate row covers every split together.
pub fn dataset_stats(splits: &[(String, Vec<DatasetRecord>)]) -> StatsReport {
    let stats = splits.iter().map(|(name, pairs)| split_stats(name, pairs)).collect();
    let all: Vec<DatasetRecord> = splits.iter().flat_map(|(_, p)| p.iter().cloned()).collect();
    let qtypes = qtype_distribution(all.iter().map(|r| r.question.as_str()));
    let train = splits.iter().find(|(n, _)| n == "train").map(|(_, p)| p.as_slice());
    let mut rates: Vec<RateRow> = splits
        .iter()
        .map(|(name, pairs)| RateRow {
            name: name.clone(),
            repetition: train.filter(|_| name != "train").map(|t| repetition_rate(pairs, t)),
            span: span_rate(pairs),
            extraction: extraction_rate(pairs),
        })
        .collect();
    rates.push(RateRow {
        name: "all".into(),
        repetition: None,
        span: span_rate(&all),
        extraction: extraction_rate(&all),
    });
    StatsReport {
        splits: stats,
        qtypes,
        rates,
        manual_taxonomy: MANUAL_TAXONOMY.iter().map(|s| s.to_string()).collect(),
    }
}

impl StatsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text tables.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:>7} {:>7} {:>9} {:>9} {:>9} {:>8} {:>8} {:>8}",
            "split", "pairs", "codes", "code_voc", "q_voc", "a_voc", "avg_code", "avg_q", "avg_a"
        );
        for s in &self.splits {
            let _ = writeln!(
                out,
                "{:<8} {:>7} {:>7} {:>9} {:>9} {:>9} {:>8.2} {:>8.2} {:>8.2}{}",
                s.name,
                s.pairs,
                s.unique_codes,
                s.unique_code_tokens,
                s.unique_question_tokens,
                s.unique_answer_tokens,
                s.avg_code_tokens,
                s.avg_question_tokens,
                s.avg_answer_tokens,
                if s.empty { "  (empty)" } else { "" }
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<8} {:>11} {:>8} {:>11}", "split", "repetition", "span", "extraction");
        for r in &self.rates {
            let rep = r.repetition.map_or("-".to_string(), |v| format!("{v:.2}%"));
            let _ = writeln!(out, "{:<8} {:>11} {:>7.2}% {:>10.2}%", r.name, rep, r.span, r.extraction);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<18} {:>7} {:>8}", "question type", "count", "share");
        for q in &self.qtypes {
            let _ = writeln!(out, "{:<18} {:>7} {:>7.2}%", q.qtype.as_str(), q.count, q.percent);
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "manual taxonomy (not auto-assigned): {}",
            self.manual_taxonomy.join(", ")
        );
        out
    }
}
