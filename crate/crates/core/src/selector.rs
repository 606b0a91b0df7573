//! Comment selection: drop noisy comments, give subjectless comments the
//! subject "the code".

use serde::{Deserialize, Serialize};

use crate::annotation::AnnotatedComment;
use crate::text::{keeps_capital, lowercase_first, third_person_singular};

pub const DEFAULT_NOISE_KEYWORDS: &[&str] = &[
    "todo",
    "fixme",
    "license",
    "licensed",
    "licence",
    "copyright",
    "ownership",
    "@deprecated",
];

pub const SUBJECT_PREFIX: &str = "the code ";

const SUBJECT_RELS: &[&str] = &["nsubj", "nsubjpass", "nsubj:pass", "csubj", "csubjpass", "csubj:pass", "expl"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoiseFilter {
    keywords: Vec<String>,
}

impl Default for NoiseFilter {
    fn default() -> Self {
        NoiseFilter::new(DEFAULT_NOISE_KEYWORDS.iter().copied())
    }
}

impl NoiseFilter {
    pub fn new<I, S>(keywords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let keywords = keywords
            .into_iter()
            .map(|k| k.as_ref().trim().to_lowercase())
            .filter(|k| !k.is_empty())
            .collect();
        NoiseFilter { keywords }
    }

    /// Parse a keyword file: one keyword per line, `#` starts a comment.
    pub fn from_lines(text: &str) -> Self {
        NoiseFilter::new(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty()),
        )
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    /// First keyword found in `comment`, matched case-insensitively on word boundaries.
    pub fn matched_keyword(&self, comment: &str) -> Option<&str> {
        let lower = comment.to_lowercase();
        self.keywords
            .iter()
            .find(|k| contains_word(&lower, k))
            .map(String::as_str)
    }

    pub fn is_noisy(&self, comment: &str) -> bool {
        self.matched_keyword(comment).is_some()
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn contains_word(haystack: &str, needle: &str) -> bool {
    haystack.match_indices(needle).any(|(at, m)| {
        let before = haystack[..at].chars().next_back();
        let after = haystack[at + m.len()..].chars().next();
        let starts_word = needle.chars().next().is_some_and(is_word_char);
        let ends_word = needle.chars().next_back().is_some_and(is_word_char);
        (!starts_word || !before.is_some_and(is_word_char))
            && (!ends_word || !after.is_some_and(is_word_char))
    })
}

/// `is_noisy` with the default keyword list.
pub fn is_noisy(comment: &str) -> bool {
    NoiseFilter::default().is_noisy(comment)
}

/// True when the root predicate has no subject dependent.
pub fn needs_subject(annotated: &AnnotatedComment) -> bool {
    match annotated.root() {
        Some(root) => annotated.children_with(root, SUBJECT_RELS).next().is_none(),
        None => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectInsertion {
    pub text: String,
    /// Index of the token whose surface form was inflected, if any.
    pub inflected: Option<usize>,
    /// Set when no verb heads the comment, so the prefixed text is unlikely
    /// to parse as a clause.
    pub low_confidence: bool,
}

fn is_base_form(node: &crate::annotation::DepNode) -> bool {
    match node.xpos.as_deref() {
        Some(tag) => matches!(tag, "VB" | "VBP"),
        None => node.is_verb() && node.form.eq_ignore_ascii_case(&node.lemma),
    }
}

/// Prefix a subjectless comment with "the code ", inflecting the finite verb
/// to third-person singular when `inflect` is set and it is in base form.
pub fn insert_subject(comment: &str, annotated: &AnnotatedComment, inflect: bool) -> SubjectInsertion {
    let root = annotated.root();
    let root_is_verb = root.is_some_and(|r| annotated.nodes[r].is_verb());

    // The finite slot is the first auxiliary before the root verb, else the verb itself.
    let target = root.filter(|_| root_is_verb).map(|r| {
        annotated
            .children_with(r, &["aux", "aux:pass", "auxpass"])
            .filter(|a| a.index < r)
            .map(|a| a.index)
            .min()
            .unwrap_or(r)
    });

    let offsets = token_offsets(comment, &annotated.tokens);
    let mut body = comment.trim_start().to_string();
    let lead = comment.len() - body.len();
    let mut inflected = None;

    if let (true, Some(t), Some(offsets)) = (inflect, target, offsets.as_ref()) {
        let node = &annotated.nodes[t];
        if is_base_form(node) && node.tag() != "MD" {
            let (start, end) = offsets[t];
            let replacement = third_person_singular(&node.form);
            body = format!("{}{}{}", &comment[lead..start], replacement, &comment[end..]);
            inflected = Some(t);
        }
    }

    let first_is_capital_safe = annotated.nodes.first().is_some_and(|n| !keeps_capital(n));
    if first_is_capital_safe {
        body = lowercase_first(&body);
    }

    SubjectInsertion {
        text: format!("{SUBJECT_PREFIX}{body}"),
        inflected,
        low_confidence: !root_is_verb,
    }
}

/// Byte offsets of each token inside `text`, found by sequential search.
pub fn token_offsets(text: &str, tokens: &[String]) -> Option<Vec<(usize, usize)>> {
    let mut pos = 0;
    let mut out = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let rest = &text[pos..];
        let skipped = rest.len() - rest.trim_start().len();
        let start = pos + skipped;
        if !text[start..].starts_with(tok.as_str()) {
            return None;
        }
        out.push((start, start + tok.len()));
        pos = start + tok.len();
    }
    Some(out)
}

/// Whether annotation tokens reproduce `text` up to whitespace.
pub fn tokens_match_text(text: &str, tokens: &[String]) -> bool {
    let squash = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    squash(text) == tokens.iter().map(|t| squash(t)).collect::<String>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disposition {
    Kept,
    DroppedNoisy,
    SubjectInserted,
}

impl Disposition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Disposition::Kept => "kept",
            Disposition::DroppedNoisy => "dropped-noisy",
            Disposition::SubjectInserted => "subject-inserted",
        }
    }
}

/// One line of the selection audit file. Kept lines are also the input of
/// the external annotator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionEntry {
    pub id: String,
    pub disposition: Disposition,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub keyword: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub low_confidence: bool,
}

impl SelectionEntry {
    pub fn is_selected(&self) -> bool {
        self.disposition != Disposition::DroppedNoisy
    }
}

#[derive(Clone, Debug)]
pub struct SelectorConfig {
    pub noise: NoiseFilter,
    pub inflect_on_insert: bool,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        SelectorConfig { noise: NoiseFilter::default(), inflect_on_insert: true }
    }
}

/// Decide the fate of one comment. `annotated` is the annotation of the raw
/// comment; without it only the noise filter runs.
pub fn select_comment(
    id: &str,
    comment: &str,
    annotated: Option<&AnnotatedComment>,
    config: &SelectorConfig,
) -> SelectionEntry {
    if let Some(keyword) = config.noise.matched_keyword(comment) {
        return SelectionEntry {
            id: id.to_string(),
            disposition: Disposition::DroppedNoisy,
            text: comment.to_string(),
            keyword: Some(keyword.to_string()),
            low_confidence: false,
        };
    }
    match annotated {
        Some(a) if needs_subject(a) => {
            let inserted = insert_subject(comment, a, config.inflect_on_insert);
            SelectionEntry {
                id: id.to_string(),
                disposition: Disposition::SubjectInserted,
                text: inserted.text,
                keyword: None,
                low_confidence: inserted.low_confidence,
            }
        }
        _ => SelectionEntry {
            id: id.to_string(),
            disposition: Disposition::Kept,
            text: comment.to_string(),
            keyword: None,
            low_confidence: false,
        },
    }
}
