//! Yes/No questions for finite predicates, with subject-aux inversion,
//! do-support and polarity from negation.

use crate::annotation::{AnnotatedComment, Span, SrlFrame};
use crate::pair::{NO, YES};
use crate::text::{
    detokenize, do_support_form, fronted_aux_form, is_finite_form, is_invertible_aux, is_punct_token,
    keeps_capital, lowercase_first, sentence_case, span_head, strip_terminal_punct,
};
use crate::wh::{verbal_group, RejectReason, VerbalGroup};

const SUBJECT_RELS: &[&str] = &["nsubj", "nsubjpass", "nsubj:pass", "csubj", "csubjpass", "csubj:pass", "expl"];
const CLAUSE_OPENERS_REL: &[&str] = &["mark", "cc"];
const CLAUSE_OPENERS_POS: &[&str] = &["SCONJ", "CCONJ"];
const WH_TAGS: &[&str] = &["WRB", "WDT", "WP"];

fn has_infinitive_marker(annotated: &AnnotatedComment, head: usize) -> bool {
    annotated.children(head).any(|n| {
        n.index < head && (n.xpos.as_deref() == Some("TO") || n.form.eq_ignore_ascii_case("to")) && n.upos == "PART"
    })
}

/// Whether a frame's predicate carries tense, directly or through an auxiliary.
pub fn is_finite_frame(annotated: &AnnotatedComment, frame: &SrlFrame) -> bool {
    let head = &annotated.nodes[frame.predicate_index];
    if !head.is_verb() {
        return false;
    }
    if has_infinitive_marker(annotated, head.index) {
        return false;
    }
    if is_finite_form(head) {
        return true;
    }
    let group = verbal_group(annotated, frame);
    group.auxiliaries.iter().any(|&a| is_finite_form(&annotated.nodes[a]))
}

/// Frames (by index) whose predicate is finite.
pub fn finite_predicates(annotated: &AnnotatedComment) -> Vec<usize> {
    annotated
        .frames
        .iter()
        .enumerate()
        .filter(|(_, f)| is_finite_frame(annotated, f))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YesNo {
    pub question: String,
    pub answer: String,
    pub answer_start: usize,
    pub negations: usize,
}

/// Grammatical subject of the predicate: a subject dependent of the verb,
/// of the first conjunct, or of the copula's head; else a pre-verbal ARG0 or
/// ARG1.
fn find_subject(annotated: &AnnotatedComment, frame: &SrlFrame, group: &VerbalGroup) -> Option<Span> {
    let head = group.head;
    let node = &annotated.nodes[head];
    let mut hosts = vec![head];
    if let Some(h) = node.head {
        if node.base_deprel() == "cop" || (node.base_deprel() == "conj" && group.conjuncts[0] == h) {
            hosts.push(h);
        }
    }
    if group.conjuncts[0] != head {
        hosts.push(group.conjuncts[0]);
    }
    for host in hosts {
        if let Some(s) = annotated.children_with(host, SUBJECT_RELS).next() {
            let sub = annotated.subtree_span(s.index);
            if sub.contiguous {
                return Some(sub.span);
            }
        }
    }
    let args = frame.arguments();
    let verb_start = group.auxiliaries.first().copied().unwrap_or(group.span.start).min(group.span.start);
    ["ARG0", "ARG1"]
        .into_iter()
        .filter_map(|r| args.first(r))
        .find(|s| s.end < verb_start)
}

/// Connectives that introduce the predicate's own clause ("when", "and",
/// "that"), as opposed to those opening an adjunct inside it.
fn is_clause_opener(annotated: &AnnotatedComment, i: usize, group: &VerbalGroup) -> bool {
    let n = &annotated.nodes[i];
    let attached_here = n.head.is_some_and(|h| h == group.head || group.conjuncts.contains(&h));
    is_punct_token(&n.form)
        || n.xpos.as_deref().is_some_and(|t| WH_TAGS.contains(&t))
        || (attached_here
            && (CLAUSE_OPENERS_REL.contains(&n.base_deprel()) || CLAUSE_OPENERS_POS.contains(&n.upos.as_str())))
}

/// Where a later conjunct's own material begins, so that a question about
/// "returns" in "builds the index and returns it" skips the first conjunct.
fn own_conjunct_start(annotated: &AnnotatedComment, head: usize, subj: Span) -> Option<usize> {
    let node = &annotated.nodes[head];
    node.head.filter(|&h| node.base_deprel() == "conj" && h < head && subj.end < h)?;
    let mut start = annotated.subtree_span(head).span.start;
    while start < head {
        let n = &annotated.nodes[start];
        let joiner = n.head == Some(head) && (matches!(n.base_deprel(), "cc" | "punct") || is_punct_token(&n.form));
        if !joiner {
            break;
        }
        start += 1;
    }
    Some(start)
}

/// Build the Yes/No question of one frame.
pub fn build_yesno(frame: &SrlFrame, annotated: &AnnotatedComment) -> Result<YesNo, RejectReason> {
    if !is_finite_frame(annotated, frame) {
        return Err(RejectReason::NotFinite);
    }
    let nodes = &annotated.nodes;
    let group = verbal_group(annotated, frame);
    let subj = find_subject(annotated, frame, &group).ok_or(RejectReason::NoSubject)?;
    let verb_start = group.auxiliaries.iter().copied().chain([group.span.start]).min().expect("non-empty");
    if subj.end >= verb_start {
        return Err(RejectReason::NoSubject);
    }

    let mut cover = frame.tagged_cover().expect("frame has a V tag");
    for &i in group.auxiliaries.iter().chain(&group.negation) {
        cover.start = cover.start.min(i);
        cover.end = cover.end.max(i);
    }
    cover.end = cover.end.max(group.span.end);
    // Trim leading connectives and edge punctuation.
    while cover.start < verb_start && cover.start < subj.start && is_clause_opener(annotated, cover.start, &group) {
        cover.start += 1;
    }
    while cover.end > group.span.end && is_punct_token(&annotated.tokens[cover.end]) {
        cover.end -= 1;
    }

    let subject_outside = subj.end < cover.start;
    let initial: Vec<usize> = if subject_outside {
        vec![]
    } else {
        (cover.start..subj.start).collect()
    };
    let mut rest_start = if subject_outside { cover.start } else { subj.end + 1 };
    if let Some(own) = own_conjunct_start(annotated, group.head, subj) {
        rest_start = rest_start.max(own);
    }

    let finite = group.auxiliaries.first().copied().unwrap_or(group.head);
    let (main_aux, fronted, lemmatized): (String, Option<usize>, Vec<usize>) =
        if let Some(&first) = group.auxiliaries.first() {
            if is_invertible_aux(&nodes[first]) {
                (fronted_aux_form(&nodes[first]).to_lowercase(), Some(first), vec![])
            } else {
                let subject_head = &nodes[span_head(annotated, subj)];
                (do_support_form(&nodes[finite], Some(subject_head)).into(), None, vec![first])
            }
        } else if nodes[group.head].lemma.eq_ignore_ascii_case("be") && group.conjuncts.len() == 1 {
            (fronted_aux_form(&nodes[group.head]).to_lowercase(), Some(group.head), vec![])
        } else {
            let subject_head = &nodes[span_head(annotated, subj)];
            (do_support_form(&nodes[finite], Some(subject_head)).into(), None, group.conjuncts.clone())
        };

    let first_content = annotated.tokens.iter().position(|t| !is_punct_token(t));
    let word = |i: usize| -> String {
        let n = &nodes[i];
        if lemmatized.contains(&i) {
            n.lemma.to_lowercase()
        } else if Some(i) == first_content && !keeps_capital(n) {
            lowercase_first(&n.form)
        } else {
            n.form.clone()
        }
    };
    let keep = |i: &usize| Some(*i) != fronted && !group.negation.contains(i);

    let mut words: Vec<String> = vec![main_aux];
    words.extend(subj.indices().map(word));
    words.extend((rest_start..=cover.end).filter(keep).map(word));
    let mut trailing: Vec<usize> = initial.into_iter().filter(keep).collect();
    while trailing.first().is_some_and(|&i| is_punct_token(&annotated.tokens[i])) {
        trailing.remove(0);
    }
    while trailing.last().is_some_and(|&i| is_punct_token(&annotated.tokens[i])) {
        trailing.pop();
    }
    words.extend(trailing.into_iter().map(word));
    // A negation the parse did not attach to the verb would leave the polarity wrong.
    if words[1..].iter().any(|w| w.eq_ignore_ascii_case("not") || w.eq_ignore_ascii_case("n't")) {
        return Err(RejectReason::UnmarkedNegation);
    }

    let text = strip_terminal_punct(&detokenize(&words)).to_string();
    let negations = group.negation.len();
    Ok(YesNo {
        question: format!("{}?", sentence_case(&text)),
        answer: if negations % 2 == 1 { NO.into() } else { YES.into() },
        answer_start: frame.predicate_index,
        negations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::parse_compact;

    fn yn(block: &str) -> Vec<Result<YesNo, RejectReason>> {
        let a = parse_compact(block).unwrap_or_else(|e| panic!("{e}"));
        a.frames.iter().map(|f| build_yesno(f, &a)).collect()
    }

    #[test]
    fn negated_have_with_do() {
        let out = yn("id: x\n\
             tokens: windows/window/NNS/3/nsubj do/do/VBP/3/aux n't/not/RB/3/neg have/have/VB/-1/root \
             a/a/DT/5/det mode/mode/NN/3/dobj like/like/IN/9/case linux/linux/NN/9/compound cli/cli/NN/9/compound \
             example/example/NN/5/nmod\n\
             srl 3: ARG0 0; V 3; ARGM-NEG 2; ARG1 4-9");
        let q = out[0].as_ref().unwrap();
        assert_eq!(q.question, "Do windows have a mode like linux cli example?");
        assert_eq!(q.answer, "No");
    }

    #[test]
    fn do_support_and_inversion() {
        let out = yn("id: x\n\
             tokens: The/the/DT/1/det code/code/NN/2/nsubj takes/take/VBZ/-1/root a/a/DT/4/det \
             screenshot/screenshot/NN/2/dobj after/after/IN/7/case every/every/DT/7/det test/test/NN/2/obl ./././2/punct\n\
             srl 2: ARG0 0-1; V 2; ARG1 3-4; ARGM-TMP 5-7");
        let q = out[0].as_ref().unwrap();
        assert_eq!(q.question, "Does the code take a screenshot after every test?");
        assert_eq!(q.answer, "Yes");
    }

    #[test]
    fn infinitive_is_not_finite() {
        let out = yn("id: x\n\
             tokens: to/to/TO/1/mark request/request/VB/-1/root new/new/JJ/3/amod data/data/NN/1/dobj\n\
             srl 1: V 1; ARG1 2-3");
        assert_eq!(out[0], Err(RejectReason::NotFinite));
    }

    #[test]
    fn missing_subject_is_rejected() {
        let out = yn("id: x\n\
             tokens: returns/return/VBZ/-1/root the/the/DT/2/det size/size/NN/0/dobj\n\
             srl 0: V 0; ARG1 1-2");
        assert_eq!(out[0], Err(RejectReason::NoSubject));
    }

    #[test]
    fn clause_initial_adjunct_moves_to_the_end() {
        let out = yn("id: x\n\
             tokens: If/if/IN/1/mark empty/empty/JJ/4/advcl ,/,/,/4/punct it/it/PRP/4/nsubj returns/return/VBZ/-1/root \
             null/null/NN/4/dobj\n\
             srl 4: ARGM-ADV 0-1; ARG0 3; V 4; ARG1 5");
        assert_eq!(out[0].as_ref().unwrap().question, "Does it return null if empty?");
    }

    #[test]
    fn double_negation_is_positive() {
        let out = yn("id: x\n\
             tokens: it/it/PRP/4/nsubj does/do/VBZ/4/aux not/not/RB/4/neg never/never/RB/4/neg fail/fail/VB/-1/root\n\
             srl 4: ARG0 0; ARGM-NEG 2; ARGM-NEG 3; V 4");
        let q = out[0].as_ref().unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(q.question, "Does it fail?");
        assert_eq!(q.answer, "Yes");
    }
}
