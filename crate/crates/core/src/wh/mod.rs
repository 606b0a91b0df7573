//! Wh-question generation from dependency and semantic-role heuristics.

pub mod clause;
pub mod realize;
pub mod template;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annotation::{modifier_suffix, AnnotatedComment, LabeledSpan, Span};
use crate::text::trim_punct;

pub use clause::{aux_concord, extract_clause, select_object_role, subject_role, verbal_group, AuxPlan, ClauseParts, VerbalGroup};
pub use realize::{realize, render_answer, Realized};
pub use template::{Slot, Template, TemplateKind, TemplateRegistry};

/// Why a candidate produced no pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RejectReason {
    NoClauseCore,
    RelativeClause,
    AnswerSpansSubjectAndObject,
    AnswerOverlapsVerb,
    DiscontiguousAnswer,
    MissingSlot(Slot),
    EmptyAnswer,
    EmptyQuestion,
    AnswerInQuestion,
    NotFinite,
    NoSubject,
    UnmarkedNegation,
}

impl RejectReason {
    pub fn as_str(&self) -> String {
        match self {
            RejectReason::NoClauseCore => "no-clause-core".into(),
            RejectReason::RelativeClause => "relative-clause".into(),
            RejectReason::AnswerSpansSubjectAndObject => "answer-spans-subject-and-object".into(),
            RejectReason::AnswerOverlapsVerb => "answer-overlaps-verb".into(),
            RejectReason::DiscontiguousAnswer => "discontiguous-answer".into(),
            RejectReason::MissingSlot(slot) => format!("missing-slot:{slot}"),
            RejectReason::EmptyAnswer => "empty-answer".into(),
            RejectReason::EmptyQuestion => "empty-question".into(),
            RejectReason::AnswerInQuestion => "answer-in-question".into(),
            RejectReason::NotFinite => "not-finite".into(),
            RejectReason::NoSubject => "no-subject".into(),
            RejectReason::UnmarkedNegation => "unmarked-negation".into(),
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

/// A potential answer together with the frame and template it would use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub frame: usize,
    pub template: String,
    /// Dependency relation or `ARGM-*` label, plus the answer span.
    pub answer: LabeledSpan,
    /// Answer head for dependency candidates.
    pub node: Option<usize>,
    /// False when a dependency subtree has gaps.
    pub contiguous: bool,
    /// Provenance tag, `dp:<template>` or `srl:<modifier>`.
    pub source: String,
}

/// Nodes whose relation triggers a dependency template and whose head
/// carries a semantic frame.
pub fn dp_candidates(annotated: &AnnotatedComment, registry: &TemplateRegistry) -> Vec<Candidate> {
    let mut out = Vec::new();
    for node in &annotated.nodes {
        let Some(template) = registry
            .for_deprel(&node.deprel)
            .or_else(|| registry.for_deprel(node.base_deprel()))
        else {
            continue;
        };
        let Some(head) = node.head else { continue };
        let Some(frame) = annotated.frames.iter().position(|f| f.predicate_index == head) else {
            continue;
        };
        let sub = annotated.subtree_span(node.index);
        out.push(Candidate {
            frame,
            template: template.key.clone(),
            answer: LabeledSpan { label: node.deprel.clone(), span: sub.span },
            node: Some(node.index),
            contiguous: sub.contiguous,
            source: format!("dp:{}", template.key),
        });
    }
    out
}

/// One candidate per modifier of a frame that has `ARG0` or `ARG1`.
pub fn srl_candidates(annotated: &AnnotatedComment, registry: &TemplateRegistry) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (fi, frame) in annotated.frames.iter().enumerate() {
        let args = frame.arguments();
        if !args.has("ARG0") && !args.has("ARG1") {
            continue;
        }
        for labeled in args.labeled_spans() {
            let Some(suffix) = modifier_suffix(&labeled.label) else { continue };
            let Some(template) = registry.for_modifier(suffix) else { continue };
            out.push(Candidate {
                frame: fi,
                template: template.key.clone(),
                source: format!("srl:{suffix}"),
                answer: labeled,
                node: None,
                contiguous: true,
            });
        }
    }
    out
}

fn bare_entity(label: &str) -> Option<&str> {
    let bare = match label.split_once('-') {
        Some((p, rest)) if p.len() == 1 => rest,
        _ => label,
    };
    (bare != "O" && !bare.is_empty()).then_some(bare)
}

/// Question word for a dependency answer, refined by the entity type that
/// covers most of the answer tokens. Modifier templates keep their own word.
pub fn select_wh_word(answer: Span, ner: &[String], template: &Template) -> String {
    if template.kind == TemplateKind::Modifier {
        return template.wh_word.clone();
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for i in answer.indices() {
        if let Some(t) = ner.get(i).and_then(|l| bare_entity(l)) {
            *counts.entry(t).or_default() += 1;
        }
    }
    let majority = counts
        .into_iter()
        .max_by_key(|&(_, c)| c)
        .filter(|&(_, c)| c * 2 > answer.len())
        .map(|(t, _)| t.to_uppercase());
    match majority.as_deref() {
        Some("PERSON" | "PER") => {
            if template.inverts() {
                "Whom".into()
            } else {
                "Who".into()
            }
        }
        Some("TIME" | "DATE") => "When".into(),
        Some("LOC" | "LOCATION" | "GPE") => "Where".into(),
        _ => template.wh_word.clone(),
    }
}

/// A realized wh pair before ids and splits are assigned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhPair {
    pub question: String,
    pub answer: String,
    pub source: String,
    pub template: String,
    pub answer_start: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WhOutcome {
    pub candidates: usize,
    pub pairs: Vec<WhPair>,
    pub rejections: Vec<(Candidate, RejectReason)>,
}

/// Realize one candidate.
pub fn realize_candidate(
    annotated: &AnnotatedComment,
    registry: &TemplateRegistry,
    cand: &Candidate,
) -> Result<WhPair, RejectReason> {
    if !cand.contiguous {
        return Err(RejectReason::DiscontiguousAnswer);
    }
    let template = registry.get(&cand.template).expect("candidate template comes from the registry");
    let span = trim_punct(&annotated.tokens, cand.answer.span).ok_or(RejectReason::EmptyAnswer)?;
    let answer = LabeledSpan { label: cand.answer.label.clone(), span };
    let frame = &annotated.frames[cand.frame];
    let clause = extract_clause(frame, annotated, &answer)?;
    let wh = select_wh_word(span, &annotated.ner, template);
    let r = realize(template, &clause, span, annotated, &wh)?;
    Ok(WhPair {
        question: r.question,
        answer: r.answer,
        source: cand.source.clone(),
        template: template.key.clone(),
        answer_start: span.start,
    })
}

/// Run both heuristics over one comment. No deduplication or capping.
pub fn generate_wh(annotated: &AnnotatedComment, registry: &TemplateRegistry) -> WhOutcome {
    let mut out = WhOutcome::default();
    let candidates = dp_candidates(annotated, registry)
        .into_iter()
        .chain(srl_candidates(annotated, registry));
    for cand in candidates {
        out.candidates += 1;
        match realize_candidate(annotated, registry, &cand) {
            Ok(pair) => out.pairs.push(pair),
            Err(reason) => out.rejections.push((cand, reason)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::parse_compact;

    fn ner(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn wh_word_refinement() {
        let reg = TemplateRegistry::default();
        let nsubj = reg.get("nsubj").unwrap();
        let dobj = reg.get("dobj").unwrap();
        let tmp = reg.get("TMP").unwrap();
        assert_eq!(select_wh_word(Span::new(0, 1), &ner(&["O", "O"]), nsubj), "What");
        assert_eq!(select_wh_word(Span::new(0, 1), &ner(&["B-PERSON", "I-PERSON"]), nsubj), "Who");
        assert_eq!(select_wh_word(Span::new(0, 0), &ner(&["PERSON"]), dobj), "Whom");
        assert_eq!(select_wh_word(Span::new(0, 1), &ner(&["B-DATE", "I-DATE"]), dobj), "When");
        assert_eq!(select_wh_word(Span::new(0, 2), &ner(&["O", "B-GPE", "O"]), dobj), "What");
        assert_eq!(select_wh_word(Span::new(0, 1), &ner(&["B-LOC", "I-LOC"]), nsubj), "Where");
        assert_eq!(select_wh_word(Span::new(0, 0), &ner(&["B-PERSON"]), tmp), "When");
    }

    #[test]
    fn candidates_for_a_simple_clause() {
        let a = parse_compact(
            "id: x\n\
             tokens: The/the/DT/1/det code/code/NN/2/nsubj takes/take/VBZ/-1/root a/a/DT/4/det \
             screenshot/screenshot/NN/2/dobj after/after/IN/7/case every/every/DT/7/det test/test/NN/2/obl ./././2/punct\n\
             srl 2: ARG0 0-1; V 2; ARG1 3-4; ARGM-TMP 5-7",
        )
        .unwrap();
        let reg = TemplateRegistry::default();
        let dp = dp_candidates(&a, &reg);
        assert_eq!(dp.iter().map(|c| c.template.as_str()).collect::<Vec<_>>(), ["nsubj", "dobj"]);
        let srl = srl_candidates(&a, &reg);
        assert_eq!(srl.len(), 1);
        assert_eq!(srl[0].source, "srl:TMP");
        let out = generate_wh(&a, &reg);
        let qa: Vec<(&str, &str)> = out.pairs.iter().map(|p| (p.question.as_str(), p.answer.as_str())).collect();
        assert!(qa.contains(&("When does the code take a screenshot?", "After every test.")), "{qa:?}");
        assert!(qa.contains(&("What takes a screenshot after every test?", "The code.")), "{qa:?}");
        assert!(qa.contains(&("What does the code take after every test?", "A screenshot.")), "{qa:?}");
    }

    #[test]
    fn verb_free_comment_has_no_candidates() {
        let a = parse_compact("id: x\ntokens: Deprecated/deprecated/JJ/-1/root").unwrap();
        let reg = TemplateRegistry::default();
        assert!(dp_candidates(&a, &reg).is_empty());
        assert!(srl_candidates(&a, &reg).is_empty());
    }
}
