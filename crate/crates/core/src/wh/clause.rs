//! Clause decomposition around one semantic frame.

use std::collections::BTreeSet;

use crate::annotation::{modifier_suffix, AnnotatedComment, FrameArguments, LabeledSpan, Span, SrlFrame};
use crate::text::{do_support_form, fronted_aux_form, is_invertible_aux, span_head};

use super::RejectReason;

const AUX_RELS: &[&str] = &["aux", "auxpass", "aux:pass"];
const CONJ_GLUE_RELS: &[&str] = &["cc", "punct"];

/// The verb, its auxiliaries and negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbalGroup {
    pub head: usize,
    /// The verb plus coordinated verbs joined only by `cc`/`punct`
    /// ("adds and removes"), and a trailing particle.
    pub span: Span,
    pub conjuncts: Vec<usize>,
    /// Modals and auxiliaries in token order.
    pub auxiliaries: Vec<usize>,
    pub modals: Vec<usize>,
    pub negation: Vec<usize>,
}

fn is_infinitive_marker(annotated: &AnnotatedComment, i: usize) -> bool {
    let n = &annotated.nodes[i];
    n.xpos.as_deref() == Some("TO") || n.form.eq_ignore_ascii_case("to")
}

fn is_negator(form: &str) -> bool {
    matches!(form.to_lowercase().as_str(), "not" | "n't" | "never")
}

fn aux_children(annotated: &AnnotatedComment, head: usize) -> Vec<usize> {
    annotated
        .children_with(head, AUX_RELS)
        .map(|n| n.index)
        .filter(|&i| !is_infinitive_marker(annotated, i) && !is_negator(&annotated.nodes[i].form))
        .collect()
}

fn coordination_chain(annotated: &AnnotatedComment, head: usize) -> Vec<usize> {
    let nodes = &annotated.nodes;
    let first = match nodes[head].head {
        Some(h) if nodes[head].base_deprel() == "conj" && h < head && nodes[h].is_verb() => h,
        _ => head,
    };
    let mut conj: Vec<usize> = annotated
        .children(first)
        .filter(|n| n.base_deprel() == "conj" && n.is_verb() && n.index > first)
        .map(|n| n.index)
        .collect();
    conj.sort_unstable();
    let mut chain = vec![first];
    for c in conj {
        let last = *chain.last().expect("chain is non-empty");
        let glued = (last + 1..c).all(|i| {
            let n = &nodes[i];
            CONJ_GLUE_RELS.contains(&n.base_deprel()) || n.upos == "CCONJ" || n.upos == "PUNCT"
        });
        if !glued || c == last + 1 {
            break;
        }
        chain.push(c);
    }
    if chain.contains(&head) {
        chain
    } else {
        vec![head]
    }
}

/// Collect the verbal group of a frame's predicate.
pub fn verbal_group(annotated: &AnnotatedComment, frame: &SrlFrame) -> VerbalGroup {
    let head = frame.predicate_index;
    let args = frame.arguments();
    let conjuncts = coordination_chain(annotated, head);
    let mut span = Span::new(conjuncts[0], *conjuncts.last().expect("non-empty"));
    let last = span.end;
    if let Some(prt) = annotated
        .children_with(last, &["compound:prt", "prt"])
        .map(|n| n.index)
        .find(|&i| i == last + 1)
    {
        span.end = prt;
    }

    let mut aux: BTreeSet<usize> = aux_children(annotated, head).into_iter().collect();
    if aux.is_empty() && conjuncts[0] != head {
        aux.extend(aux_children(annotated, conjuncts[0]));
    }
    let mut modals: BTreeSet<usize> = args.modals.iter().flat_map(|s| s.indices()).collect();
    modals.extend(aux.iter().copied().filter(|&i| annotated.nodes[i].tag() == "MD"));
    aux.extend(modals.iter().copied());

    let mut negation: BTreeSet<usize> = args.negation.iter().flat_map(|s| s.indices()).collect();
    negation.extend(
        annotated
            .children(head)
            .filter(|n| n.base_deprel() == "neg" || (n.base_deprel() == "advmod" && is_negator(&n.form)))
            .map(|n| n.index),
    );
    aux.retain(|i| !negation.contains(i) && !span.contains(*i));

    VerbalGroup {
        head,
        span,
        conjuncts,
        auxiliaries: aux.into_iter().collect(),
        modals: modals.into_iter().collect(),
        negation: negation.into_iter().collect(),
    }
}

/// The `(subj, obj, A_x, verb)` decomposition of one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseParts {
    pub subj: Option<Span>,
    pub subj_role: Option<String>,
    pub obj: Option<Span>,
    /// Role the object was selected from, even when the answer consumed it.
    pub obj_role: Option<String>,
    /// Remaining arguments and modifiers in token order.
    pub other_args: Vec<LabeledSpan>,
    pub verb_head: usize,
    pub verb_span: Span,
    pub conjuncts: Vec<usize>,
    pub auxiliaries: Vec<usize>,
    pub modals: Vec<usize>,
    pub negation: Vec<usize>,
    pub negated: bool,
    pub main_aux: Option<usize>,
}

/// Whether an answer label comes from the SRL heuristic (`ARGM-*`) rather
/// than from a dependency relation.
pub fn is_modifier_answer(label: &str) -> bool {
    modifier_suffix(label).is_some()
}

/// Role acting as the clause subject: `ARG0` before the verb, else a
/// pre-verbal `ARG1` (passive and unaccusative clauses).
pub fn subject_role(args: &FrameArguments, verb: Span) -> Option<&'static str> {
    let before = |label: &str| args.first(label).is_some_and(|s| s.end < verb.start);
    if before("ARG0") {
        Some("ARG0")
    } else if before("ARG1") {
        Some("ARG1")
    } else {
        None
    }
}

/// Object role selection.
///
/// For dependency answers the answer node decides: inside `ARG1` gives `ARG1`,
/// inside `ARG2` gives `ARG2`, otherwise `ARG1` when present, else `ARG2`.
/// Modifier answers take `ARG1`, else `ARG2`. A role serving as subject is
/// skipped unless the answer node sits in it.
pub fn select_object_role(
    args: &FrameArguments,
    answer_node: Option<usize>,
    subject: Option<&str>,
) -> Option<&'static str> {
    let contains = |label: &str| {
        answer_node.is_some_and(|i| args.roles.get(label).is_some_and(|v| v.iter().any(|s| s.contains(i))))
    };
    if contains("ARG1") {
        return Some("ARG1");
    }
    if contains("ARG2") {
        return Some("ARG2");
    }
    ["ARG1", "ARG2"]
        .into_iter()
        .find(|&label| args.has(label) && subject != Some(label))
}

/// Decompose `frame` into clause parts with `answer` removed.
///
/// `answer.label` is either a dependency relation (`nsubj`, `dobj`, ...) or an
/// `ARGM-*` modifier label.
pub fn extract_clause(
    frame: &SrlFrame,
    annotated: &AnnotatedComment,
    answer: &LabeledSpan,
) -> Result<ClauseParts, RejectReason> {
    let args = frame.arguments();
    if !["ARG0", "ARG1", "ARG2"].iter().any(|l| args.has(l)) {
        return Err(RejectReason::NoClauseCore);
    }
    if args.roles.keys().any(|l| l.starts_with("R-")) {
        return Err(RejectReason::RelativeClause);
    }
    let group = verbal_group(annotated, frame);

    let subj_role = subject_role(&args, group.span);
    let answer_node = if is_modifier_answer(&answer.label) {
        None
    } else {
        Some(span_head(annotated, answer.span))
    };
    let obj_role = select_object_role(&args, answer_node, subj_role);

    let mut subj = subj_role.and_then(|r| args.first(r));
    let mut obj = obj_role.and_then(|r| args.first(r));
    if subj_role.is_some() && subj_role == obj_role {
        obj = None;
    }
    let hits_subj = subj.is_some_and(|s| s.overlaps(&answer.span));
    let hits_obj = obj.is_some_and(|s| s.overlaps(&answer.span));
    if hits_subj && hits_obj {
        return Err(RejectReason::AnswerSpansSubjectAndObject);
    }
    if answer.span.overlaps(&group.span) {
        return Err(RejectReason::AnswerOverlapsVerb);
    }
    if hits_subj {
        subj = None;
    }
    if hits_obj {
        obj = None;
    }

    let taken: Vec<Span> = [subj, obj, Some(answer.span), Some(group.span)]
        .into_iter()
        .flatten()
        .collect();
    let other_args: Vec<LabeledSpan> = args
        .labeled_spans()
        .into_iter()
        .filter(|l| Some(l.label.as_str()) != subj_role && Some(l.label.as_str()) != obj_role)
        .filter(|l| !taken.iter().any(|t| t.overlaps(&l.span)))
        .filter(|l| !group.auxiliaries.iter().any(|&a| l.span.contains(a)))
        .collect();

    let main_aux = group
        .auxiliaries
        .first()
        .copied()
        .filter(|&i| is_invertible_aux(&annotated.nodes[i]));
    Ok(ClauseParts {
        subj,
        subj_role: subj_role.map(str::to_string),
        obj,
        obj_role: obj_role.map(str::to_string),
        other_args,
        verb_head: group.head,
        verb_span: group.span,
        conjuncts: group.conjuncts,
        auxiliaries: group.auxiliaries,
        modals: group.modals,
        negated: !group.negation.is_empty(),
        negation: group.negation,
        main_aux,
    })
}

/// How the auxiliary slot of a question is filled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxPlan {
    /// Text of the fronted auxiliary, synthesized for do-support.
    pub main_aux: Option<String>,
    /// Token moved to the front, if any.
    pub fronted: Option<usize>,
    pub do_support: bool,
    /// Tokens to print as their lemma.
    pub lemmatized: Vec<usize>,
}

/// Choose the fronted auxiliary for a subject-aux inverted question.
///
/// An invertible auxiliary or modal is fronted; a finite main-verb `be` is
/// fronted; otherwise do/does/did is synthesized from the tense of the finite
/// token and the number of the subject, and that token is lemmatized.
pub fn aux_concord(clause: &ClauseParts, annotated: &AnnotatedComment) -> AuxPlan {
    let nodes = &annotated.nodes;
    let subject_head = clause.subj.map(|s| &nodes[span_head(annotated, s)]);
    if let Some(&first) = clause.auxiliaries.first() {
        if is_invertible_aux(&nodes[first]) {
            return AuxPlan {
                main_aux: Some(fronted_aux_form(&nodes[first]).to_lowercase()),
                fronted: Some(first),
                do_support: false,
                lemmatized: vec![],
            };
        }
        return AuxPlan {
            main_aux: Some(do_support_form(&nodes[first], subject_head).to_string()),
            fronted: None,
            do_support: true,
            lemmatized: vec![first],
        };
    }
    let head = &nodes[clause.verb_head];
    if head.lemma.eq_ignore_ascii_case("be") && clause.conjuncts.len() == 1 {
        return AuxPlan {
            main_aux: Some(fronted_aux_form(head).to_lowercase()),
            fronted: Some(clause.verb_head),
            do_support: false,
            lemmatized: vec![],
        };
    }
    AuxPlan {
        main_aux: Some(do_support_form(head, subject_head).to_string()),
        fronted: None,
        do_support: true,
        lemmatized: clause.conjuncts.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::parse_compact;

    fn trims() -> AnnotatedComment {
        parse_compact(
            "id: row2\n\
             tokens: The/the/DT/1/det code/code/NN/2/nsubj trims/trim/VBZ/-1/root all/all/DT/4/det \
             occurrences/occurrence/NNS/2/dobj of/of/IN/9/case the/the/DT/9/det supplied/supply/VBN/9/amod \
             leading/leading/JJ/9/amod character/character/NN/4/nmod from/from/IN/13/case the/the/DT/13/det \
             given/give/VBN/13/amod string/string/NN/2/obl ./././2/punct\n\
             srl 2: ARG0 0-1; V 2; ARG1 3-9; ARG2 10-13",
        )
        .unwrap()
    }

    #[test]
    fn dobj_clause_removes_the_object() {
        let a = trims();
        let answer = LabeledSpan { label: "dobj".into(), span: Span::new(3, 9) };
        let c = extract_clause(&a.frames[0], &a, &answer).unwrap();
        assert_eq!(c.subj, Some(Span::new(0, 1)));
        assert_eq!(c.obj, None);
        assert_eq!(c.obj_role.as_deref(), Some("ARG1"));
        assert_eq!(c.other_args, vec![LabeledSpan { label: "ARG2".into(), span: Span::new(10, 13) }]);
        assert_eq!(c.verb_head, 2);
        let plan = aux_concord(&c, &a);
        assert_eq!(plan.main_aux.as_deref(), Some("does"));
        assert_eq!(plan.lemmatized, vec![2]);
    }

    #[test]
    fn answer_straddling_subject_and_object_is_rejected() {
        let a = trims();
        let answer = LabeledSpan { label: "ARGM-TMP".into(), span: Span::new(1, 3) };
        assert_eq!(
            extract_clause(&a.frames[0], &a, &answer),
            Err(RejectReason::AnswerSpansSubjectAndObject)
        );
    }

    #[test]
    fn frame_without_core_is_rejected() {
        let a = parse_compact(
            "id: x\ntokens: Run/run/VB/-1/root quickly/quickly/RB/0/advmod\nsrl 0: V 0; ARGM-MNR 1",
        )
        .unwrap();
        let answer = LabeledSpan { label: "ARGM-MNR".into(), span: Span::new(1, 1) };
        assert_eq!(extract_clause(&a.frames[0], &a, &answer), Err(RejectReason::NoClauseCore));
    }

    #[test]
    fn coordinated_verbs_share_the_verb_span() {
        let a = parse_compact(
            "id: x\n\
             tokens: The/the/DT/1/det function/function/NN/2/nsubj adds/add/VBZ/-1/root and/and/CC/4/cc \
             removes/remove/VBZ/2/conj entries/entry/NNS/2/dobj\n\
             srl 2: ARG0 0-1; V 2; ARG1 5\n\
             srl 4: ARG0 0-1; V 4; ARG1 5",
        )
        .unwrap();
        for f in &a.frames {
            let g = verbal_group(&a, f);
            assert_eq!(g.span, Span::new(2, 4));
            assert_eq!(g.conjuncts, vec![2, 4]);
        }
    }

    #[test]
    fn modal_and_passive_aux_form_the_group() {
        let a = parse_compact(
            "id: x\n\
             tokens: The/the/DT/1/det aliases/alias/NNS/4/nsubjpass will/will/MD/4/aux be/be/VB/4/auxpass \
             associated/associate/VBN/-1/root\n\
             srl 4: ARG1 0-1; ARGM-MOD 2; V 4",
        )
        .unwrap();
        let g = verbal_group(&a, &a.frames[0]);
        assert_eq!(g.auxiliaries, vec![2, 3]);
        assert_eq!(g.modals, vec![2]);
        let answer = LabeledSpan { label: "nsubjpass".into(), span: Span::new(0, 1) };
        let c = extract_clause(&a.frames[0], &a, &answer).unwrap();
        assert_eq!(c.main_aux, Some(2));
        assert_eq!(c.subj, None);
        assert_eq!(c.obj_role.as_deref(), Some("ARG1"));
    }

    #[test]
    fn object_role_rules() {
        let a = trims();
        let args = a.frames[0].arguments();
        assert_eq!(select_object_role(&args, Some(4), Some("ARG0")), Some("ARG1"));
        assert_eq!(select_object_role(&args, Some(13), Some("ARG0")), Some("ARG2"));
        assert_eq!(select_object_role(&args, Some(1), Some("ARG0")), Some("ARG1"));
        assert_eq!(select_object_role(&args, None, Some("ARG1")), Some("ARG2"));
    }
}
