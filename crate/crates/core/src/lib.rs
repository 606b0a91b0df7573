//! Build code question-answering datasets from code-comment corpora.
//!
//! The pipeline ingests code-comment pairs, selects usable comments, turns
//! annotated comments into wh- and yes/no question-answer pairs, filters and
//! splits them, and reports dataset statistics and evaluation metrics.

pub mod analyzer;
pub mod annotation;
pub mod compact;
pub mod corpus;
pub mod error;
pub mod generate;
pub mod jsonl;
pub mod metrics;
pub mod pair;
pub mod pipeline;
pub mod postprocess;
pub mod selector;
pub mod text;
pub mod wh;
pub mod yesno;

pub use annotation::{parse_annotation, serialize_annotation, AnnotatedComment, DepNode, LabeledSpan, Span, SrlFrame};
pub use corpus::{load_corpus, tokenize_code, CodeCommentRecord, Language};
pub use error::{Error, Result, ValidationError};
pub use pair::{DatasetRecord, QAPair, QType, Split};
pub use wh::{ClauseParts, Template, TemplateRegistry};
