//! Slot filling: turn clause parts into question and answer text.

use std::collections::BTreeSet;

use crate::annotation::{AnnotatedComment, DepNode, Span};
use crate::text::{
    detokenize, is_punct_token, keeps_capital, sentence_case, strip_terminal_punct, third_person_singular, trim_punct,
};

use super::clause::{aux_concord, AuxPlan, ClauseParts};
use super::template::{Slot, Template};
use super::RejectReason;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realized {
    pub question: String,
    pub answer: String,
}

fn first_content_token(annotated: &AnnotatedComment) -> Option<usize> {
    annotated.tokens.iter().position(|t| !is_punct_token(t))
}

/// Token text as it should appear mid-question.
fn surface(annotated: &AnnotatedComment, i: usize, lemmatize: bool, inverted: bool) -> String {
    let node = &annotated.nodes[i];
    if lemmatize {
        return node.lemma.to_lowercase();
    }
    if inverted && node.form.eq_ignore_ascii_case("n't") {
        return "not".into();
    }
    if Some(i) == first_content_token(annotated) && !keeps_capital(node) {
        return crate::text::lowercase_first(&node.form);
    }
    node.form.clone()
}

/// Third-person singular of a non-third-person present form, if it is one.
fn singular_form(node: &DepNode) -> Option<String> {
    if node.xpos.as_deref() != Some("VBP") || ["wanna", "gonna", "gotta"].contains(&node.lemma.as_str()) {
        return None;
    }
    if node.lemma.eq_ignore_ascii_case("be") {
        return Some("is".into());
    }
    node.form
        .eq_ignore_ascii_case(&node.lemma)
        .then(|| third_person_singular(&node.form.to_lowercase()))
}

fn span_tokens(annotated: &AnnotatedComment, span: Span, out: &mut Vec<String>) {
    if let Some(span) = trim_punct(&annotated.tokens, span) {
        out.extend(span.indices().map(|i| surface(annotated, i, false, false)));
    }
}

/// Render an answer span: punctuation trimmed, sentence-cased, ending in ".".
pub fn render_answer(annotated: &AnnotatedComment, span: Span) -> Option<String> {
    let span = trim_punct(&annotated.tokens, span)?;
    let text = detokenize(&annotated.tokens[span.start..=span.end]);
    let text = strip_terminal_punct(&text);
    if text.is_empty() {
        return None;
    }
    Some(format!("{}.", sentence_case(text)))
}

fn contains_phrase(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let is_word = |c: char| c.is_alphanumeric() || c == '_';
    haystack.match_indices(needle).any(|(pos, _)| {
        let before = haystack[..pos].chars().next_back();
        let after = haystack[pos + needle.len()..].chars().next();
        !before.is_some_and(is_word) && !after.is_some_and(is_word)
    })
}

/// Assemble a question by the template's slot order.
///
/// Subject questions (no `nsubj` slot) keep the auxiliaries as written;
/// other templates front an auxiliary or synthesize do-support.
pub fn realize(
    template: &Template,
    clause: &ClauseParts,
    answer_span: Span,
    annotated: &AnnotatedComment,
    wh_word: &str,
) -> Result<Realized, RejectReason> {
    let inverted = template.inverts();
    if inverted && clause.subj.is_none() {
        return Err(RejectReason::MissingSlot(Slot::Nsubj));
    }
    // A wh-word subject takes singular agreement: "dictionaries preserve"
    // becomes "What preserves".
    let mut agreed: Option<(usize, String)> = None;
    let plan = if inverted {
        aux_concord(clause, annotated)
    } else {
        let finite = clause.auxiliaries.first().copied().unwrap_or(clause.verb_head);
        agreed = singular_form(&annotated.nodes[finite]).map(|f| (finite, f));
        let main_aux = clause.auxiliaries.first().map(|&i| match &agreed {
            Some((j, f)) if *j == i => f.clone(),
            _ => annotated.nodes[i].form.clone(),
        });
        AuxPlan { main_aux, fronted: clause.auxiliaries.first().copied(), do_support: false, lemmatized: vec![] }
    };

    // Arguments between the subject (or a pre-verbal answer) and the verb
    // stay in front of the verb; everything else goes to the modifiers slot.
    let anchor = [clause.subj, Some(answer_span)]
        .into_iter()
        .flatten()
        .filter(|s| s.end < clause.verb_span.start)
        .map(|s| s.end)
        .max();
    let pre_verbal = |s: &Span| anchor.is_some_and(|a| s.start > a) && s.end < clause.verb_span.start;

    let mut before_verb: BTreeSet<usize> = clause.negation.iter().copied().collect();
    let mut modifiers: Vec<Span> = Vec::new();
    for arg in &clause.other_args {
        if pre_verbal(&arg.span) {
            before_verb.extend(arg.span.indices());
        } else {
            modifiers.push(arg.span);
        }
    }
    if !template.has_slot(Slot::Obj) {
        modifiers.extend(clause.obj);
    }
    if !template.has_slot(Slot::Nsubj) {
        modifiers.extend(clause.subj);
    }
    modifiers.sort_by_key(|s| s.start);

    let mut other_aux = before_verb.clone();
    if template.has_slot(Slot::OtherAux) {
        other_aux.extend(clause.auxiliaries.iter().copied().filter(|&i| Some(i) != plan.fronted));
    }

    let render_indices = |indices: &mut dyn Iterator<Item = usize>, out: &mut Vec<String>| {
        for i in indices {
            match &agreed {
                Some((j, form)) if *j == i => out.push(form.clone()),
                _ => out.push(surface(annotated, i, plan.lemmatized.contains(&i), inverted)),
            }
        }
    };

    let mut words: Vec<String> = Vec::new();
    for slot in &template.slot_order {
        match slot {
            Slot::Wh => words.push(wh_word.to_string()),
            Slot::MainAux => words.extend(plan.main_aux.clone()),
            Slot::Nsubj => {
                if let Some(s) = clause.subj {
                    span_tokens(annotated, s, &mut words);
                }
            }
            Slot::OtherAux => render_indices(&mut other_aux.iter().copied(), &mut words),
            Slot::Verb => {
                if !template.has_slot(Slot::OtherAux) {
                    render_indices(&mut before_verb.iter().copied(), &mut words);
                }
                let verb = clause
                    .verb_span
                    .indices()
                    .filter(|&i| Some(i) != plan.fronted && !other_aux.contains(&i));
                render_indices(&mut verb.collect::<Vec<_>>().into_iter(), &mut words);
            }
            Slot::Obj => {
                if let Some(s) = clause.obj {
                    span_tokens(annotated, s, &mut words);
                }
            }
            Slot::Modifiers => {
                for s in &modifiers {
                    span_tokens(annotated, *s, &mut words);
                }
            }
        }
    }

    let question = strip_terminal_punct(&detokenize(&words)).to_string();
    if question.split_whitespace().count() <= wh_word.split_whitespace().count() {
        return Err(RejectReason::EmptyQuestion);
    }
    let question = format!("{}?", sentence_case(&question));
    let answer = render_answer(annotated, answer_span).ok_or(RejectReason::EmptyAnswer)?;
    let needle = strip_terminal_punct(&answer).to_lowercase();
    if contains_phrase(&question.to_lowercase(), &needle) {
        return Err(RejectReason::AnswerInQuestion);
    }
    Ok(Realized { question, answer })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phrase_containment_respects_word_boundaries() {
        assert!(contains_phrase("what does the code trim?", "the code"));
        assert!(!contains_phrase("what does the codec trim?", "the code"));
        assert!(!contains_phrase("anything", ""));
    }
}
