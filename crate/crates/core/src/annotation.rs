//! Annotation interchange format: dependency trees, semantic role frames and
//! named-entity tags over the tokens of one comment.
//!
//! One annotation is one JSON object per line:
//!
//! ```text
//! {"id": "...", "tokens": [..], "lemmas": [..], "pos": [..], "heads": [..],
//!  "deprels": [..], "srl": [{"predicate": 2, "tags": [..]}], "ner": [..]}
//! ```
//!
//! Heads are 0-based with `-1` marking the root. `pos` may hold either
//! universal POS tags or Penn Treebank tags; Penn tags are kept verbatim as
//! `xpos` and mapped onto a universal tag.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

/// Inclusive token range `start..=end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn single(index: usize) -> Self {
        Span { start: index, end: index }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn covers(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

const UPOS_TAGS: &[&str] = &[
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

/// Map a Penn Treebank tag onto its universal POS counterpart.
fn ptb_to_upos(tag: &str) -> Option<&'static str> {
    let upos = match tag {
        "NN" | "NNS" => "NOUN",
        "NNP" | "NNPS" => "PROPN",
        "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" => "VERB",
        "MD" => "AUX",
        "JJ" | "JJR" | "JJS" | "AFX" => "ADJ",
        "RB" | "RBR" | "RBS" | "WRB" => "ADV",
        "IN" => "ADP",
        "DT" | "PDT" | "WDT" => "DET",
        "PRP" | "PRP$" | "WP" | "WP$" | "EX" => "PRON",
        "CC" => "CCONJ",
        "CD" => "NUM",
        "TO" | "RP" | "POS" => "PART",
        "UH" => "INTJ",
        "SYM" | "$" | "#" => "SYM",
        "." | "," | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "HYPH" | "NFP" => "PUNCT",
        "FW" | "LS" | "ADD" | "GW" | "XX" => "X",
        _ => return None,
    };
    Some(upos)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepNode {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    /// Fine-grained Penn tag, when the annotator supplied one.
    pub xpos: Option<String>,
    /// Parent index, `None` for the root.
    pub head: Option<usize>,
    pub deprel: String,
}

impl DepNode {
    pub fn is_verb(&self) -> bool {
        self.upos == "VERB" || self.upos == "AUX"
    }

    pub fn tag(&self) -> &str {
        self.xpos.as_deref().unwrap_or(&self.upos)
    }

    /// Relation label without a language-specific subtype (`nsubj:pass` -> `nsubj`).
    pub fn base_deprel(&self) -> &str {
        self.deprel.split(':').next().unwrap_or(&self.deprel)
    }
}

/// One BIO tag of a semantic role frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BioTag {
    Begin(String),
    Inside(String),
    Outside,
}

impl BioTag {
    pub fn label(&self) -> Option<&str> {
        match self {
            BioTag::Begin(l) | BioTag::Inside(l) => Some(l),
            BioTag::Outside => None,
        }
    }
}

impl fmt::Display for BioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BioTag::Begin(l) => write!(f, "B-{l}"),
            BioTag::Inside(l) => write!(f, "I-{l}"),
            BioTag::Outside => f.write_str("O"),
        }
    }
}

const CORE_ROLES: &[&str] = &["ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "ARG5", "ARGA"];
const MODIFIER_ROLES: &[&str] = &[
    "TMP", "LOC", "MNR", "CAU", "PNC", "PRP", "MOD", "NEG", "ADV", "DIS", "DIR", "EXT", "PRD",
    "REC", "GOL", "COM", "ADJ", "LVB", "PRR", "CXN", "DSP",
];

/// Whether `label` belongs to the PropBank role inventory (including `V`,
/// `R-` reference and `C-` continuation roles).
pub fn is_known_role(label: &str) -> bool {
    let bare = label
        .strip_prefix("R-")
        .or_else(|| label.strip_prefix("C-"))
        .unwrap_or(label);
    if bare == "V" {
        return label == "V" || label == "C-V";
    }
    if CORE_ROLES.contains(&bare) {
        return true;
    }
    bare.strip_prefix("ARGM-")
        .is_some_and(|m| MODIFIER_ROLES.contains(&m))
}

/// The `TMP` in `ARGM-TMP`; `None` for core roles.
pub fn modifier_suffix(label: &str) -> Option<&str> {
    label.strip_prefix("ARGM-")
}

pub const MODAL_ROLE: &str = "ARGM-MOD";
pub const NEGATION_ROLE: &str = "ARGM-NEG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrlFrame {
    pub predicate_index: usize,
    pub tags: Vec<BioTag>,
}

/// A labeled argument span of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSpan {
    pub label: String,
    pub span: Span,
}

/// Arguments of one frame grouped by label, in token order.
///
/// `V` is excluded; modal and negation elements are split out because they
/// belong to the verbal group rather than to the clause arguments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrameArguments {
    pub roles: BTreeMap<String, Vec<Span>>,
    pub modals: Vec<Span>,
    pub negation: Vec<Span>,
}

impl FrameArguments {
    pub fn is_empty(&self) -> bool {
        self.roles.is_empty() && self.modals.is_empty() && self.negation.is_empty()
    }

    pub fn first(&self, label: &str) -> Option<Span> {
        self.roles.get(label).and_then(|s| s.first().copied())
    }

    pub fn has(&self, label: &str) -> bool {
        self.roles.contains_key(label)
    }

    /// Every role span (modal and negation excluded) sorted by position.
    pub fn labeled_spans(&self) -> Vec<LabeledSpan> {
        let mut out: Vec<LabeledSpan> = self
            .roles
            .iter()
            .flat_map(|(label, spans)| {
                spans.iter().map(move |&span| LabeledSpan { label: label.clone(), span })
            })
            .collect();
        out.sort_by_key(|l| (l.span.start, l.span.end));
        out
    }
}

impl SrlFrame {
    /// Contiguous spans for every label except `V`, in token order.
    pub fn arguments(&self) -> FrameArguments {
        let mut args = FrameArguments::default();
        for labeled in self.spans() {
            if labeled.label == "V" {
                continue;
            }
            let bucket = match labeled.label.as_str() {
                MODAL_ROLE => &mut args.modals,
                NEGATION_ROLE => &mut args.negation,
                other => args.roles.entry(other.to_string()).or_default(),
            };
            bucket.push(labeled.span);
        }
        args
    }

    /// All labeled spans including `V`, in token order.
    pub fn spans(&self) -> Vec<LabeledSpan> {
        let mut out: Vec<LabeledSpan> = Vec::new();
        for (i, tag) in self.tags.iter().enumerate() {
            match tag {
                BioTag::Begin(label) => out.push(LabeledSpan {
                    label: label.clone(),
                    span: Span::single(i),
                }),
                BioTag::Inside(label) => match out.last_mut() {
                    Some(last) if &last.label == label && last.span.end + 1 == i => {
                        last.span.end = i
                    }
                    // Validated frames never reach this arm.
                    _ => out.push(LabeledSpan { label: label.clone(), span: Span::single(i) }),
                },
                BioTag::Outside => {}
            }
        }
        out
    }

    /// Token positions covered by any non-`O` tag.
    pub fn tagged_cover(&self) -> Option<Span> {
        let mut tagged = self
            .tags
            .iter()
            .enumerate()
            .filter(|(_, t)| **t != BioTag::Outside)
            .map(|(i, _)| i);
        let first = tagged.next()?;
        let last = tagged.last().unwrap_or(first);
        Some(Span::new(first, last))
    }
}

/// Free-function form of [`SrlFrame::arguments`].
pub fn frame_arguments(frame: &SrlFrame) -> FrameArguments {
    frame.arguments()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedComment {
    pub id: String,
    pub tokens: Vec<String>,
    pub nodes: Vec<DepNode>,
    pub frames: Vec<SrlFrame>,
    pub ner: Vec<String>,
}

/// Result of projecting a dependency subtree onto the token sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubtreeSpan {
    pub span: Span,
    /// False when the subtree yield has gaps and `span` is only its cover.
    pub contiguous: bool,
}

impl AnnotatedComment {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.nodes.iter().find(|n| n.head.is_none()).map(|n| n.index)
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &DepNode> + '_ {
        self.nodes.iter().filter(move |n| n.head == Some(index))
    }

    pub fn children_with<'a>(
        &'a self,
        index: usize,
        rels: &'a [&'a str],
    ) -> impl Iterator<Item = &'a DepNode> + 'a {
        self.children(index)
            .filter(move |n| rels.contains(&n.deprel.as_str()) || rels.contains(&n.base_deprel()))
    }

    pub fn frame_for(&self, predicate: usize) -> Option<&SrlFrame> {
        self.frames.iter().find(|f| f.predicate_index == predicate)
    }

    pub fn subtree_span(&self, index: usize) -> SubtreeSpan {
        subtree_span(&self.nodes[index], &self.nodes)
    }

    /// Entity type of a token with any `B-`/`I-` prefix removed; `None` for `O`.
    pub fn entity_type(&self, index: usize) -> Option<&str> {
        let label = self.ner.get(index)?.as_str();
        let bare = label
            .strip_prefix("B-")
            .or_else(|| label.strip_prefix("I-"))
            .or_else(|| label.strip_prefix("U-"))
            .or_else(|| label.strip_prefix("L-"))
            .or_else(|| label.strip_prefix("S-"))
            .or_else(|| label.strip_prefix("E-"))
            .unwrap_or(label);
        (bare != "O" && !bare.is_empty()).then_some(bare)
    }

    pub fn text_of(&self, span: Span) -> Vec<&str> {
        self.tokens[span.start..=span.end].iter().map(String::as_str).collect()
    }
}

/// Span covering the full dependency subtree of `node`.
pub fn subtree_span(node: &DepNode, nodes: &[DepNode]) -> SubtreeSpan {
    let mut in_subtree = vec![false; nodes.len()];
    in_subtree[node.index] = true;
    // Heads are validated acyclic, so walking each token up to the root terminates.
    for n in nodes {
        let mut cur = Some(n.index);
        while let Some(i) = cur {
            if i == node.index {
                in_subtree[n.index] = true;
                break;
            }
            cur = nodes[i].head;
        }
    }
    let members: Vec<usize> = (0..nodes.len()).filter(|&i| in_subtree[i]).collect();
    let start = members[0];
    let end = *members.last().expect("subtree holds at least its root");
    SubtreeSpan {
        span: Span::new(start, end),
        contiguous: members.len() == end - start + 1,
    }
}

/// Serialized shape of one annotation line. Field order is the wire order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationRecord {
    pub id: String,
    pub tokens: Vec<String>,
    pub lemmas: Vec<String>,
    pub pos: Vec<String>,
    pub heads: Vec<i64>,
    pub deprels: Vec<String>,
    pub srl: Vec<FrameRecord>,
    pub ner: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub predicate: i64,
    pub tags: Vec<String>,
}

/// Parse and fully validate one annotation line.
pub fn parse_annotation(line: &str) -> Result<AnnotatedComment, ValidationError> {
    let record: AnnotationRecord = serde_json::from_str(line)
        .map_err(|e| ValidationError::new("$", format!("invalid annotation json: {e}")))?;
    AnnotatedComment::try_from(record)
}

/// Serialize an annotation back into its wire form.
pub fn serialize_annotation(annotated: &AnnotatedComment) -> String {
    serde_json::to_string(&AnnotationRecord::from(annotated)).expect("annotation serializes")
}

fn parse_bio(tag: &str) -> Option<BioTag> {
    if tag == "O" {
        return Some(BioTag::Outside);
    }
    let (prefix, label) = tag.split_once('-')?;
    let label = label.to_string();
    match prefix {
        "B" => Some(BioTag::Begin(label)),
        "I" => Some(BioTag::Inside(label)),
        _ => None,
    }
}

impl TryFrom<AnnotationRecord> for AnnotatedComment {
    type Error = ValidationError;

    fn try_from(rec: AnnotationRecord) -> Result<Self, Self::Error> {
        let n = rec.tokens.len();
        for (field, len) in [
            ("lemmas", rec.lemmas.len()),
            ("pos", rec.pos.len()),
            ("heads", rec.heads.len()),
            ("deprels", rec.deprels.len()),
            ("ner", rec.ner.len()),
        ] {
            if len != n {
                return Err(ValidationError::new(
                    field,
                    format!("length mismatch: {len} entries for {n} tokens"),
                ));
            }
        }
        if n == 0 {
            return Err(ValidationError::new("tokens", "empty token list"));
        }

        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let raw_pos = rec.pos[i].as_str();
            let (upos, xpos) = if UPOS_TAGS.contains(&raw_pos) {
                (raw_pos.to_string(), None)
            } else if let Some(u) = ptb_to_upos(raw_pos) {
                (u.to_string(), Some(raw_pos.to_string()))
            } else {
                return Err(ValidationError::new(
                    format!("pos[{i}]"),
                    format!("unknown label {raw_pos:?}"),
                ));
            };
            let head = match rec.heads[i] {
                -1 => None,
                h if h >= 0 && (h as usize) < n && h as usize != i => Some(h as usize),
                h => {
                    return Err(ValidationError::new(
                        format!("heads[{i}]"),
                        format!("invalid head {h}"),
                    ))
                }
            };
            if rec.deprels[i].is_empty() {
                return Err(ValidationError::new(format!("deprels[{i}]"), "empty relation label"));
            }
            nodes.push(DepNode {
                index: i,
                form: rec.tokens[i].clone(),
                lemma: rec.lemmas[i].clone(),
                upos,
                xpos,
                head,
                deprel: rec.deprels[i].clone(),
            });
        }

        let roots: Vec<usize> = nodes.iter().filter(|n| n.head.is_none()).map(|n| n.index).collect();
        match roots.len() {
            1 => {}
            0 => return Err(ValidationError::new("heads", "cyclic dependency graph: no root")),
            k => {
                return Err(ValidationError::new(
                    format!("heads[{}]", roots[1]),
                    format!("{k} roots; exactly one expected"),
                ))
            }
        }
        // Every token must reach the root within n steps.
        for start in 0..n {
            let mut cur = nodes[start].head;
            let mut steps = 0;
            while let Some(h) = cur {
                steps += 1;
                if steps > n {
                    return Err(ValidationError::new(
                        format!("heads[{start}]"),
                        "cyclic dependency graph",
                    ));
                }
                cur = nodes[h].head;
            }
        }

        let mut frames = Vec::with_capacity(rec.srl.len());
        for (f, frame) in rec.srl.iter().enumerate() {
            if frame.tags.len() != n {
                return Err(ValidationError::new(
                    format!("srl[{f}].tags"),
                    format!("length mismatch: {} tags for {n} tokens", frame.tags.len()),
                ));
            }
            let mut tags = Vec::with_capacity(n);
            for (i, raw) in frame.tags.iter().enumerate() {
                let path = || format!("srl[{f}].tags[{i}]");
                let tag = parse_bio(raw)
                    .ok_or_else(|| ValidationError::new(path(), format!("malformed BIO tag {raw:?}")))?;
                if let Some(label) = tag.label() {
                    if !is_known_role(label) {
                        return Err(ValidationError::new(path(), format!("unknown label {label:?}")));
                    }
                }
                if let BioTag::Inside(label) = &tag {
                    let opened = matches!(
                        tags.last(),
                        Some(BioTag::Begin(prev)) | Some(BioTag::Inside(prev)) if prev == label
                    );
                    if !opened {
                        return Err(ValidationError::new(
                            path(),
                            format!("malformed BIO: I-{label} without an opening B-{label}"),
                        ));
                    }
                }
                tags.push(tag);
            }
            let predicate = usize::try_from(frame.predicate)
                .ok()
                .filter(|&p| p < n)
                .ok_or_else(|| {
                    ValidationError::new(
                        format!("srl[{f}].predicate"),
                        format!("predicate {} out of range", frame.predicate),
                    )
                })?;
            if tags[predicate].label() != Some("V") {
                return Err(ValidationError::new(
                    format!("srl[{f}].tags[{predicate}]"),
                    "predicate token is not tagged V",
                ));
            }
            frames.push(SrlFrame { predicate_index: predicate, tags });
        }

        Ok(AnnotatedComment {
            id: rec.id,
            tokens: rec.tokens,
            nodes,
            frames,
            ner: rec.ner,
        })
    }
}

impl From<&AnnotatedComment> for AnnotationRecord {
    fn from(a: &AnnotatedComment) -> Self {
        AnnotationRecord {
            id: a.id.clone(),
            tokens: a.tokens.clone(),
            lemmas: a.nodes.iter().map(|n| n.lemma.clone()).collect(),
            pos: a.nodes.iter().map(|n| n.tag().to_string()).collect(),
            heads: a.nodes.iter().map(|n| n.head.map_or(-1, |h| h as i64)).collect(),
            deprels: a.nodes.iter().map(|n| n.deprel.clone()).collect(),
            srl: a
                .frames
                .iter()
                .map(|f| FrameRecord {
                    predicate: f.predicate_index as i64,
                    tags: f.tags.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            ner: a.ner.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(tokens: &[&str], heads: &[i64], srl: Vec<FrameRecord>) -> AnnotationRecord {
        let n = tokens.len();
        AnnotationRecord {
            id: "t".into(),
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
            lemmas: tokens.iter().map(|s| s.to_lowercase()).collect(),
            pos: vec!["NOUN".into(); n],
            heads: heads.to_vec(),
            deprels: vec!["dep".into(); n],
            srl,
            ner: vec!["O".into(); n],
        }
    }

    fn frame(predicate: i64, tags: &[&str]) -> FrameRecord {
        FrameRecord { predicate, tags: tags.iter().map(|s| s.to_string()).collect() }
    }

    #[test]
    fn parses_three_token_annotation() {
        let line = r#"{"id":"a","tokens":["code","returns","size"],"lemmas":["code","return","size"],
            "pos":["NN","VBZ","NN"],"heads":[1,-1,1],"deprels":["nsubj","root","dobj"],
            "srl":[{"predicate":1,"tags":["B-ARG0","B-V","B-ARG1"]}],"ner":["O","O","O"]}"#;
        let a = parse_annotation(line).unwrap();
        assert_eq!(a.nodes.len(), 3);
        assert_eq!(a.nodes[1].upos, "VERB");
        assert_eq!(a.nodes[1].xpos.as_deref(), Some("VBZ"));
        assert_eq!(a.root(), Some(1));
    }

    #[test]
    fn rejects_two_cycle() {
        let rec = record(&["a", "b", "c"], &[1, 0, -1], vec![]);
        let err = AnnotatedComment::try_from(rec).unwrap_err();
        assert!(err.to_string().contains("cyclic dependency graph"), "{err}");
    }

    #[test]
    fn rejects_dangling_inside_tag() {
        let rec = record(&["a", "b", "c"], &[1, -1, 1], vec![frame(1, &["I-ARG0", "B-V", "O"])]);
        let err = AnnotatedComment::try_from(rec).unwrap_err();
        assert!(err.to_string().contains("malformed BIO"), "{err}");
        assert_eq!(err.path, "srl[0].tags[0]");
    }

    #[test]
    fn rejects_inside_tag_after_other_label() {
        let rec = record(
            &["a", "b", "c"],
            &[1, -1, 1],
            vec![frame(1, &["B-ARG0", "B-V", "I-ARG0"])],
        );
        assert!(AnnotatedComment::try_from(rec).is_err());
    }

    #[test]
    fn rejects_length_mismatch_and_unknown_label() {
        let mut rec = record(&["a", "b"], &[1, -1], vec![]);
        rec.lemmas.pop();
        let err = AnnotatedComment::try_from(rec).unwrap_err();
        assert_eq!(err.path, "lemmas");

        let rec = record(&["a", "b"], &[1, -1], vec![frame(1, &["B-ARGX", "B-V"])]);
        let err = AnnotatedComment::try_from(rec).unwrap_err();
        assert!(err.to_string().contains("unknown label"));
    }

    #[test]
    fn rejects_predicate_not_tagged_v() {
        let rec = record(&["a", "b"], &[1, -1], vec![frame(0, &["B-ARG0", "B-V"])]);
        assert!(AnnotatedComment::try_from(rec).is_err());
    }

    #[test]
    fn rejects_multiple_roots() {
        let rec = record(&["a", "b"], &[-1, -1], vec![]);
        assert!(AnnotatedComment::try_from(rec).is_err());
    }

    #[test]
    fn frame_arguments_groups_spans() {
        let tags = ["B-ARGM-TMP", "O", "B-ARG0", "I-ARG0", "B-V", "B-ARGM-TMP", "I-ARGM-TMP"];
        let f = SrlFrame {
            predicate_index: 4,
            tags: tags.iter().map(|t| parse_bio(t).unwrap()).collect(),
        };
        let args = f.arguments();
        assert_eq!(args.roles["ARG0"], vec![Span::new(2, 3)]);
        assert_eq!(args.roles["ARGM-TMP"], vec![Span::new(0, 0), Span::new(5, 6)]);
        assert!(!args.has("V"));
    }

    #[test]
    fn frame_with_only_verb_has_no_arguments() {
        let f = SrlFrame {
            predicate_index: 1,
            tags: vec![BioTag::Outside, BioTag::Begin("V".into())],
        };
        assert!(f.arguments().is_empty());
    }

    #[test]
    fn modal_and_negation_get_dedicated_buckets() {
        let tags = ["B-ARG0", "B-ARGM-MOD", "B-ARGM-NEG", "B-V"];
        let f = SrlFrame {
            predicate_index: 3,
            tags: tags.iter().map(|t| parse_bio(t).unwrap()).collect(),
        };
        let args = f.arguments();
        assert_eq!(args.modals, vec![Span::single(1)]);
        assert_eq!(args.negation, vec![Span::single(2)]);
        assert_eq!(args.roles.len(), 1);
    }

    #[test]
    fn role_inventory() {
        for ok in ["ARG0", "ARGM-TMP", "R-ARG1", "C-ARG1", "V", "ARGM-PRP", "ARGA"] {
            assert!(is_known_role(ok), "{ok}");
        }
        for bad in ["ARG9", "ARGM-FOO", "R-V", "TMP", ""] {
            assert!(!is_known_role(bad), "{bad}");
        }
    }

    #[test]
    fn subtree_of_root_and_leaf() {
        let rec = record(&["a", "b", "c", "d"], &[1, -1, 3, 1], vec![]);
        let a = AnnotatedComment::try_from(rec).unwrap();
        assert_eq!(a.subtree_span(1).span, Span::new(0, 3));
        assert_eq!(a.subtree_span(0).span, Span::single(0));
        assert_eq!(a.subtree_span(3).span, Span::new(2, 3));
    }

    #[test]
    fn discontiguous_subtree_is_flagged() {
        // token 0 attaches to 2, token 1 to the root 3: yield of 2 is {0, 2}.
        let rec = record(&["a", "b", "c", "d"], &[2, 3, 3, -1], vec![]);
        let a = AnnotatedComment::try_from(rec).unwrap();
        let s = a.subtree_span(2);
        assert_eq!(s.span, Span::new(0, 2));
        assert!(!s.contiguous);
    }
}
