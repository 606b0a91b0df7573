//! Surface realization helpers: detokenization, casing and the small amount
//! of English verb morphology the generators need.

use crate::annotation::{AnnotatedComment, DepNode, Span};

const NO_SPACE_BEFORE: &[&str] = &[
    ",", ".", ";", ":", "!", "?", ")", "]", "}", "%", "'s", "'S", "n't", "N'T", "'re", "'ve",
    "'ll", "'d", "'m",
];
const NO_SPACE_AFTER: &[&str] = &["(", "[", "{", "$", "#"];

/// Join tokens into text, attaching punctuation and clitics to their host.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut glue_next = true;
    for tok in tokens {
        let tok = tok.as_ref();
        if tok.is_empty() {
            continue;
        }
        if !glue_next && !NO_SPACE_BEFORE.contains(&tok) {
            out.push(' ');
        }
        out.push_str(tok);
        glue_next = NO_SPACE_AFTER.contains(&tok);
    }
    out
}

/// Uppercase the first character, leave the rest untouched.
pub fn sentence_case(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub fn lowercase_first(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub fn is_punct_token(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_punctuation() && c != '_' && c != '$')
}

/// Shrink `span` so it neither starts nor ends on punctuation.
pub fn trim_punct(tokens: &[String], span: Span) -> Option<Span> {
    let mut start = span.start;
    let mut end = span.end;
    while start <= end && is_punct_token(&tokens[start]) {
        start += 1;
    }
    while end >= start && is_punct_token(&tokens[end]) {
        if end == 0 {
            return None;
        }
        end -= 1;
    }
    (start <= end).then(|| Span::new(start, end))
}

/// Remove trailing sentence punctuation and surrounding whitespace.
pub fn strip_terminal_punct(text: &str) -> &str {
    text.trim().trim_end_matches(|c: char| matches!(c, '.' | '?' | '!' | ';' | ':' | ',')).trim_end()
}

/// Whether a token at the start of a sentence keeps its capital when moved
/// inside a question: proper nouns, acronyms and identifiers with inner caps.
pub fn keeps_capital(node: &DepNode) -> bool {
    if node.upos == "PROPN" || node.form == "I" {
        return true;
    }
    node.form.chars().skip(1).any(|c| c.is_uppercase())
}

/// Third-person singular present of a base-form verb.
pub fn third_person_singular(base: &str) -> String {
    let lower = base.to_lowercase();
    let irregular = match lower.as_str() {
        "be" => Some("is"),
        "have" => Some("has"),
        "do" => Some("does"),
        "go" => Some("goes"),
        _ => None,
    };
    if let Some(form) = irregular {
        return match_case(base, form);
    }
    let bytes = lower.as_bytes();
    let n = bytes.len();
    let suffixed = if n >= 2 && lower.ends_with('y') && !is_vowel(bytes[n - 2]) {
        format!("{}ies", &base[..base.len() - 1])
    } else if ["s", "x", "z", "ch", "sh", "o"].iter().any(|s| lower.ends_with(s)) {
        format!("{base}es")
    } else {
        format!("{base}s")
    };
    suffixed
}

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn match_case(template: &str, word: &str) -> String {
    if template.chars().next().is_some_and(char::is_uppercase) {
        sentence_case(word)
    } else {
        word.to_string()
    }
}

pub const MODALS: &[&str] = &[
    "will", "would", "can", "could", "shall", "should", "may", "might", "must", "ought",
];

/// Auxiliaries that can be fronted in a question: modals and forms of be/have/do.
pub fn is_invertible_aux(node: &DepNode) -> bool {
    let lemma = node.lemma.to_lowercase();
    node.tag() == "MD"
        || MODALS.contains(&lemma.as_str())
        || matches!(lemma.as_str(), "be" | "have" | "do")
}

/// Surface form of an auxiliary suitable for fronting (`ca` in `can't` becomes `can`).
pub fn fronted_aux_form(node: &DepNode) -> String {
    let form = node.form.to_lowercase();
    match form.as_str() {
        "ca" => "can".into(),
        "wo" => "will".into(),
        "sha" => "shall".into(),
        "'ll" => "will".into(),
        "'d" => "would".into(),
        "'s" if node.lemma == "be" => "is".into(),
        "'s" if node.lemma == "have" => "has".into(),
        "'re" => "are".into(),
        "'ve" => "have".into(),
        "'m" => "am".into(),
        "do" | "does" | "did" => form,
        _ => node.form.clone(),
    }
}

/// Whether the verb form is marked for tense on its own.
pub fn is_finite_form(node: &DepNode) -> bool {
    match node.xpos.as_deref() {
        Some(tag) => matches!(tag, "VBZ" | "VBP" | "VBD" | "MD"),
        None => {
            if !node.is_verb() {
                return false;
            }
            let form = node.form.to_lowercase();
            let lemma = node.lemma.to_lowercase();
            if MODALS.contains(&form.as_str()) {
                return true;
            }
            matches!(form.as_str(), "is" | "are" | "was" | "were" | "am" | "has" | "does" | "did")
                || (form != lemma && !form.ends_with("ing") && !form.ends_with("en"))
        }
    }
}

pub fn is_past(node: &DepNode) -> bool {
    match node.xpos.as_deref() {
        Some(tag) => tag == "VBD",
        None => {
            let form = node.form.to_lowercase();
            matches!(form.as_str(), "was" | "were" | "did" | "had")
                || (form.ends_with("ed") && form != node.lemma.to_lowercase())
        }
    }
}

const SINGULAR_PRONOUNS: &[&str] = &["he", "she", "it", "this", "that", "one", "everything", "something", "nothing"];

/// Whether a subject headed by `head` takes third-person singular agreement.
pub fn is_third_singular_subject(head: &DepNode) -> bool {
    let lower = head.form.to_lowercase();
    if head.upos == "PRON" {
        return SINGULAR_PRONOUNS.contains(&lower.as_str());
    }
    match head.xpos.as_deref() {
        Some("NNS") | Some("NNPS") => false,
        Some(_) => true,
        None => !(head.upos == "NOUN" && lower.ends_with('s') && lower != head.lemma.to_lowercase()),
    }
}

/// Syntactic head of a span: the member whose parent lies outside the span.
pub fn span_head(annotated: &AnnotatedComment, span: Span) -> usize {
    span.indices()
        .find(|&i| annotated.nodes[i].head.is_none_or(|h| !span.contains(h)))
        .unwrap_or(span.start)
}

/// do / does / did by the tense of `finite` and the number of the subject.
pub fn do_support_form(finite: &DepNode, subject_head: Option<&DepNode>) -> &'static str {
    if is_past(finite) {
        "did"
    } else if subject_head.is_none_or(is_third_singular_subject) {
        "does"
    } else {
        "do"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(form: &str, lemma: &str, upos: &str, xpos: Option<&str>) -> DepNode {
        DepNode {
            index: 0,
            form: form.into(),
            lemma: lemma.into(),
            upos: upos.into(),
            xpos: xpos.map(Into::into),
            head: None,
            deprel: "root".into(),
        }
    }

    #[test]
    fn detokenizes_clitics_and_punct() {
        assert_eq!(detokenize(&["windows", "do", "n't", "have", "it", "."]), "windows don't have it.");
        assert_eq!(detokenize(&["f", "(", "x", ")", ",", "y"]), "f (x), y");
        assert_eq!(detokenize::<&str>(&[]), "");
    }

    #[test]
    fn third_singular_inflection() {
        for (base, want) in [
            ("attach", "attaches"),
            ("return", "returns"),
            ("try", "tries"),
            ("play", "plays"),
            ("fix", "fixes"),
            ("be", "is"),
            ("have", "has"),
            ("do", "does"),
            ("go", "goes"),
            ("pass", "passes"),
            ("Get", "Gets"),
        ] {
            assert_eq!(third_person_singular(base), want, "{base}");
        }
    }

    #[test]
    fn casing() {
        assert_eq!(sentence_case("all occurrences"), "All occurrences");
        assert_eq!(sentence_case(""), "");
        assert_eq!(lowercase_first("This method"), "this method");
        assert_eq!(strip_terminal_punct("The given child. "), "The given child");
    }

    #[test]
    fn finiteness_and_concord() {
        assert!(is_finite_form(&node("trims", "trim", "VERB", Some("VBZ"))));
        assert!(!is_finite_form(&node("request", "request", "VERB", Some("VB"))));
        assert!(!is_finite_form(&node("created", "create", "VERB", Some("VBN"))));
        assert!(is_finite_form(&node("returns", "return", "VERB", None)));
        assert!(!is_finite_form(&node("using", "use", "VERB", None)));

        let trims = node("trims", "trim", "VERB", Some("VBZ"));
        let returned = node("returned", "return", "VERB", Some("VBD"));
        let code = node("code", "code", "NOUN", Some("NN"));
        let windows = node("windows", "window", "NOUN", Some("NNS"));
        let we = node("we", "we", "PRON", Some("PRP"));
        assert_eq!(do_support_form(&trims, Some(&code)), "does");
        assert_eq!(do_support_form(&trims, Some(&windows)), "do");
        assert_eq!(do_support_form(&trims, Some(&we)), "do");
        assert_eq!(do_support_form(&returned, Some(&windows)), "did");
    }

    #[test]
    fn aux_fronting_forms() {
        assert_eq!(fronted_aux_form(&node("ca", "can", "AUX", Some("MD"))), "can");
        assert_eq!(fronted_aux_form(&node("Will", "will", "AUX", Some("MD"))), "Will");
        assert_eq!(fronted_aux_form(&node("do", "do", "VERB", Some("VBP"))), "do");
        assert!(is_invertible_aux(&node("has", "have", "VERB", Some("VBZ"))));
        assert!(!is_invertible_aux(&node("gets", "get", "VERB", Some("VBZ"))));
    }
}
