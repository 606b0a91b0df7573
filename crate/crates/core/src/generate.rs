//! Per-comment generation: wh and yes/no pairs, deduplicated and capped.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::analyzer::categorize_question;
use crate::annotation::AnnotatedComment;
use crate::pair::{QAPair, QType, Split, YESNO_SOURCE};
use crate::wh::{generate_wh, TemplateRegistry, WhPair};
use crate::yesno::build_yesno;

pub const DEFAULT_MAX_PAIRS_PER_COMMENT: usize = 8;

#[derive(Clone, Debug)]
pub struct GenerateConfig {
    pub registry: TemplateRegistry,
    /// Cap on wh pairs per comment; yes/no pairs are not capped.
    pub max_pairs_per_comment: usize,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            registry: TemplateRegistry::default(),
            max_pairs_per_comment: DEFAULT_MAX_PAIRS_PER_COMMENT,
        }
    }
}

/// Candidate accounting: `candidates = pairs + duplicates + capped + Σ rejections`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationTally {
    pub candidates: usize,
    pub pairs: usize,
    pub duplicates: usize,
    pub capped: usize,
    pub rejections: BTreeMap<String, usize>,
}

impl GenerationTally {
    pub fn merge(&mut self, other: &GenerationTally) {
        self.candidates += other.candidates;
        self.pairs += other.pairs;
        self.duplicates += other.duplicates;
        self.capped += other.capped;
        for (k, v) in &other.rejections {
            *self.rejections.entry(k.clone()).or_default() += v;
        }
    }

    pub fn is_conserved(&self) -> bool {
        self.candidates == self.pairs + self.duplicates + self.capped + self.rejections.values().sum::<usize>()
    }

    fn reject(&mut self, reason: impl Into<String>) {
        *self.rejections.entry(reason.into()).or_default() += 1;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommentPairs {
    pub pairs: Vec<QAPair>,
    pub tally: GenerationTally,
}

fn merge_source(a: &str, b: &str) -> String {
    let dp = |s: &str| s.starts_with("dp:") || s == "dp+srl";
    let srl = |s: &str| s.starts_with("srl:") || s == "dp+srl";
    if a == b {
        a.to_string()
    } else if (dp(a) && srl(b)) || (srl(a) && dp(b)) {
        "dp+srl".to_string()
    } else {
        a.to_string()
    }
}

/// Keep at most `cap` pairs, taking one per template in turn so that every
/// template is represented before any gets a second pair.
fn round_robin_cap(pairs: Vec<WhPair>, cap: usize, registry: &TemplateRegistry) -> (Vec<WhPair>, usize) {
    if pairs.len() <= cap {
        return (pairs, 0);
    }
    let order = |key: &str| registry.templates().iter().position(|t| t.key == key).unwrap_or(usize::MAX);
    let mut groups: BTreeMap<(usize, String), Vec<WhPair>> = BTreeMap::new();
    for p in pairs {
        groups.entry((order(&p.template), p.template.clone())).or_default().push(p);
    }
    let mut queues: Vec<std::collections::VecDeque<WhPair>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_by(|a, b| (a.answer_start, &a.question).cmp(&(b.answer_start, &b.question)));
            g.into()
        })
        .collect();
    let total: usize = queues.iter().map(|q| q.len()).sum();
    let mut kept = Vec::with_capacity(cap);
    while kept.len() < cap {
        let mut progressed = false;
        for q in queues.iter_mut() {
            if kept.len() == cap {
                break;
            }
            if let Some(p) = q.pop_front() {
                kept.push(p);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    let dropped = total - kept.len();
    (kept, dropped)
}

/// Generate the pairs of one annotated comment.
pub fn generate_for_comment(annotated: &AnnotatedComment, code_id: &str, config: &GenerateConfig) -> CommentPairs {
    let mut tally = GenerationTally::default();
    let wh = generate_wh(annotated, &config.registry);
    tally.candidates += wh.candidates;
    for (_, reason) in &wh.rejections {
        tally.reject(reason.as_str());
    }

    let mut index: HashMap<(String, String), usize> = HashMap::new();
    let mut unique: Vec<WhPair> = Vec::new();
    for p in wh.pairs {
        let key = (p.question.clone(), p.answer.clone());
        if let Some(&i) = index.get(&key) {
            let kept = &mut unique[i];
            kept.source = merge_source(&kept.source, &p.source);
            kept.answer_start = kept.answer_start.min(p.answer_start);
            tally.duplicates += 1;
        } else {
            index.insert(key, unique.len());
            unique.push(p);
        }
    }
    let (kept, capped) = round_robin_cap(unique, config.max_pairs_per_comment, &config.registry);
    tally.capped += capped;

    let mut pairs: Vec<QAPair> = kept
        .into_iter()
        .map(|p| QAPair {
            id: String::new(),
            code_id: code_id.to_string(),
            qtype: categorize_question(&p.question),
            question: p.question,
            answer: p.answer,
            source: p.source,
            split: Split::Unassigned,
            answer_start: p.answer_start,
        })
        .collect();

    for frame in &annotated.frames {
        tally.candidates += 1;
        match build_yesno(frame, annotated) {
            Ok(yn) => {
                let key = (yn.question.clone(), yn.answer.clone());
                if index.contains_key(&key) {
                    tally.duplicates += 1;
                    continue;
                }
                index.insert(key, usize::MAX);
                pairs.push(QAPair {
                    id: String::new(),
                    code_id: code_id.to_string(),
                    question: yn.question,
                    answer: yn.answer,
                    qtype: QType::YesNo,
                    source: YESNO_SOURCE.to_string(),
                    split: Split::Unassigned,
                    answer_start: yn.answer_start,
                });
            }
            Err(reason) => tally.reject(format!("yesno:{}", reason.as_str())),
        }
    }

    sort_pairs(&mut pairs);
    for (n, p) in pairs.iter_mut().enumerate() {
        p.id = format!("{code_id}-q{n}");
    }
    tally.pairs = pairs.len();
    CommentPairs { pairs, tally }
}

/// Deterministic emission order: code id, source, answer position, question.
pub fn sort_pairs(pairs: &mut [QAPair]) {
    pairs.sort_by(|a, b| {
        (&a.code_id, &a.source, a.answer_start, &a.question, &a.answer)
            .cmp(&(&b.code_id, &b.source, b.answer_start, &b.question, &b.answer))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::parse_compact;

    const PNC: &str = "id: pnc\n\
        tokens: The/the/DT/1/det function/function/NN/2/nsubj adds/add/VBZ/-1/root and/and/CC/4/cc \
        removes/remove/VBZ/2/conj entries/entry/NNS/2/dobj to/to/TO/7/mark save/save/VB/2/advcl space/space/NN/7/dobj\n\
        srl 2: ARG0 0-1; V 2; ARG1 5; ARGM-PNC 6-8\n\
        srl 4: ARG0 0-1; V 4; ARG1 5; ARGM-PNC 6-8";

    #[test]
    fn duplicates_collapse_and_counts_are_conserved() {
        let a = parse_compact(PNC).unwrap();
        let out = generate_for_comment(&a, "c1", &GenerateConfig::default());
        assert!(out.tally.is_conserved(), "{:?}", out.tally);
        assert!(out.tally.duplicates >= 1);
        let purpose: Vec<_> = out.pairs.iter().filter(|p| p.qtype == QType::ForWhatPurpose).collect();
        assert_eq!(purpose.len(), 1);
        assert_eq!(purpose[0].question, "For what purpose does the function add and remove entries?");
        let yes_no: Vec<_> = out.pairs.iter().filter(|p| p.is_yes_no()).map(|p| p.question.as_str()).collect();
        assert_eq!(
            yes_no,
            ["Does the function add and remove entries to save space?", "Does the function remove entries to save space?"]
        );
        let ids: Vec<_> = out.pairs.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids[0], "c1-q0");
    }

    #[test]
    fn dp_and_srl_agreement_is_marked() {
        assert_eq!(merge_source("dp:dobj", "srl:TMP"), "dp+srl");
        assert_eq!(merge_source("srl:PNC", "srl:PNC"), "srl:PNC");
        assert_eq!(merge_source("dp:nsubj", "dp:dobj"), "dp:nsubj");
    }

    #[test]
    fn cap_prefers_template_diversity() {
        let reg = TemplateRegistry::default();
        let mk = |t: &str, i: usize| WhPair {
            question: format!("{t} {i}?"),
            answer: "x.".into(),
            source: format!("dp:{t}"),
            template: t.into(),
            answer_start: i,
        };
        let pairs: Vec<WhPair> = (0..5).map(|i| mk("nsubj", i)).chain((0..2).map(|i| mk("TMP", i))).collect();
        let (kept, dropped) = round_robin_cap(pairs, 3, &reg);
        assert_eq!(dropped, 4);
        let templates: Vec<_> = kept.iter().map(|p| p.template.as_str()).collect();
        assert_eq!(templates, ["nsubj", "TMP", "nsubj"]);
    }
}
