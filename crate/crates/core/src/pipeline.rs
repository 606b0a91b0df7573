//! File-to-file pipeline stages over a work directory.
//!
//! Every stage reads its predecessor's output from the work directory, writes
//! its own, and returns a [`StageSummary`] whose counts satisfy
//! `input = output + Σ drops`.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analyzer::{categorize_question, dataset_stats, StatsReport};
use crate::annotation::{parse_annotation, AnnotatedComment};
use crate::corpus::{load_corpus, CodeCommentRecord, Language};
use crate::error::Error;
use crate::generate::{generate_for_comment, GenerateConfig, GenerationTally};
use crate::jsonl::{read_jsonl, write_jsonl};
use crate::metrics::{evaluate_files, MetricReport};
use crate::pair::{DatasetRecord, QAPair, QType, Split};
use crate::postprocess::{
    balance_yes_no, split, AmbiguityFilter, DEFAULT_RATIOS, DEFAULT_SEED, DEFAULT_YES_RATIO,
};
use crate::selector::{select_comment, tokens_match_text, Disposition, SelectionEntry, SelectorConfig};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const SELECTION_FILE: &str = "selection.jsonl";
pub const PAIRS_FILE: &str = "pairs.jsonl";
pub const POSTPROCESSED_FILE: &str = "postprocessed.jsonl";
pub const ASSIGNED_FILE: &str = "assigned.jsonl";
pub const STATS_FILE: &str = "stats.json";

/// Paths of the stage files inside one work directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkDir {
    root: PathBuf,
}

impl WorkDir {
    pub fn new(root: impl Into<PathBuf>) -> Result<Self, Error> {
        let root = root.into();
        std::fs::create_dir_all(&root).map_err(|e| Error::write(&root, e))?;
        Ok(WorkDir { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn split_file(&self, split: Split) -> PathBuf {
        self.root.join(format!("{}.jsonl", split.as_str()))
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub language: Option<Language>,
    pub selector: SelectorConfig,
    pub generate: GenerateConfig,
    pub ambiguity: AmbiguityFilter,
    pub yes_ratio: f64,
    pub seed: u64,
    pub ratios: [usize; 3],
    pub group_by_code: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            language: None,
            selector: SelectorConfig::default(),
            generate: GenerateConfig::default(),
            ambiguity: AmbiguityFilter::default(),
            yes_ratio: DEFAULT_YES_RATIO,
            seed: DEFAULT_SEED,
            ratios: DEFAULT_RATIOS,
            group_by_code: false,
        }
    }
}

/// Counts for one stage run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSummary {
    pub stage: String,
    pub input: usize,
    pub output: usize,
    pub drops: BTreeMap<String, usize>,
    /// Informational counts that are not part of the conservation sum.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl StageSummary {
    fn new(stage: &str) -> Self {
        StageSummary { stage: stage.to_string(), ..Default::default() }
    }

    fn drop(&mut self, reason: impl Into<String>, n: usize) {
        if n > 0 {
            *self.drops.entry(reason.into()).or_default() += n;
        }
    }

    pub fn dropped(&self) -> usize {
        self.drops.values().sum()
    }

    pub fn is_conserved(&self) -> bool {
        self.input == self.output + self.dropped()
    }

    pub fn render(&self) -> String {
        let mut line = format!("{:<12} in {:>6}  out {:>6}", self.stage, self.input, self.output);
        for (k, v) in &self.drops {
            line.push_str(&format!("  {k}={v}"));
        }
        for (k, v) in &self.details {
            line.push_str(&format!("  [{k}={v}]"));
        }
        line
    }
}

/// Read an annotation file into a map keyed by id. Blank lines are skipped;
/// an invalid line or a repeated id is an error.
pub fn load_annotations(path: &Path) -> Result<HashMap<String, AnnotatedComment>, Error> {
    let file = File::open(path).map_err(|e| Error::read(path, e))?;
    let mut out = HashMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::read(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let located = |source| Error::Line { path: path.to_path_buf(), line: i + 1, source };
        let annotated = parse_annotation(&line).map_err(located)?;
        if out.contains_key(&annotated.id) {
            return Err(located(crate::ValidationError::new("id", format!("duplicate id {:?}", annotated.id))));
        }
        out.insert(annotated.id.clone(), annotated);
    }
    Ok(out)
}

fn missing_ids<'a>(ids: impl Iterator<Item = &'a str>, have: &HashMap<String, AnnotatedComment>) -> Result<(), Error> {
    let missing: Vec<&str> = ids.filter(|id| !have.contains_key(*id)).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("no annotation for ids: {}", missing.join(", "))))
    }
}

/// Load and validate the corpus; malformed lines are counted, not fatal.
pub fn ingest(corpus: &Path, work: &WorkDir, config: &PipelineConfig) -> Result<StageSummary, Error> {
    let (records, load) = load_corpus(corpus, config.language)?;
    write_jsonl(&work.file(RECORDS_FILE), &records)?;
    let mut s = StageSummary::new("ingest");
    s.input = load.lines;
    s.output = load.records;
    s.drop("malformed", load.errors.len());
    s.warnings = load.errors.iter().map(|e| e.to_string()).collect();
    Ok(s)
}

/// Drop noisy comments and prefix subjectless ones. Without raw annotations
/// only the noise filter runs.
pub fn select(work: &WorkDir, raw_annotations: Option<&Path>, config: &PipelineConfig) -> Result<StageSummary, Error> {
    let records: Vec<CodeCommentRecord> = read_jsonl(&work.file(RECORDS_FILE))?;
    let raw = raw_annotations.map(load_annotations).transpose()?;
    if let Some(raw) = &raw {
        let clean = records.iter().filter(|r| !config.selector.noise.is_noisy(&r.comment));
        missing_ids(clean.map(|r| r.id.as_str()), raw)?;
        for r in &records {
            if let Some(a) = raw.get(&r.id) {
                if !tokens_match_text(&r.comment, &a.tokens) {
                    return Err(Error::Invalid(format!("annotation tokens of {} do not match its comment", r.id)));
                }
            }
        }
    }
    let entries: Vec<SelectionEntry> = records
        .par_iter()
        .map(|r| {
            let a = raw.as_ref().and_then(|m| m.get(&r.id));
            select_comment(&r.id, &r.comment, a, &config.selector)
        })
        .collect();
    write_jsonl(&work.file(SELECTION_FILE), &entries)?;

    let mut s = StageSummary::new("select");
    s.input = entries.len();
    s.output = entries.iter().filter(|e| e.is_selected()).count();
    s.drop("noisy", entries.iter().filter(|e| e.disposition == Disposition::DroppedNoisy).count());
    let inserted = entries.iter().filter(|e| e.disposition == Disposition::SubjectInserted).count();
    s.details.insert("subject-inserted".into(), inserted);
    let low = entries.iter().filter(|e| e.low_confidence).count();
    if low > 0 {
        s.details.insert("low-confidence".into(), low);
    }
    Ok(s)
}

/// Result of the generation stage: stage counts plus the candidate tally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateSummary {
    #[serde(flatten)]
    pub stage: StageSummary,
    pub tally: GenerationTally,
}

/// Generate pairs for every selected comment. Each selected id needs an
/// annotation whose tokens reproduce the selected text.
pub fn generate(work: &WorkDir, annotations: &Path, config: &PipelineConfig) -> Result<GenerateSummary, Error> {
    let selection: Vec<SelectionEntry> = read_jsonl(&work.file(SELECTION_FILE))?;
    let selected: Vec<&SelectionEntry> = selection.iter().filter(|e| e.is_selected()).collect();
    let annotated = load_annotations(annotations)?;
    missing_ids(selected.iter().map(|e| e.id.as_str()), &annotated)?;
    let mismatched: Vec<&str> = selected
        .iter()
        .filter(|e| !tokens_match_text(&e.text, &annotated[&e.id].tokens))
        .map(|e| e.id.as_str())
        .collect();
    if !mismatched.is_empty() {
        return Err(Error::Invalid(format!(
            "annotation tokens do not match the selected text for ids: {}",
            mismatched.join(", ")
        )));
    }

    let per_comment: Vec<_> = selected
        .par_iter()
        .map(|e| generate_for_comment(&annotated[&e.id], &e.id, &config.generate))
        .collect();
    let mut tally = GenerationTally::default();
    let mut pairs: Vec<QAPair> = Vec::new();
    let mut without_pairs = 0;
    for out in per_comment {
        tally.merge(&out.tally);
        if out.pairs.is_empty() {
            without_pairs += 1;
        }
        pairs.extend(out.pairs);
    }
    write_jsonl(&work.file(PAIRS_FILE), &pairs)?;

    let mut s = StageSummary::new("generate");
    s.input = tally.candidates;
    s.output = pairs.len();
    s.drop("duplicate", tally.duplicates);
    s.drop("capped", tally.capped);
    for (reason, n) in &tally.rejections {
        s.drop(reason.clone(), *n);
    }
    s.details.insert("comments".into(), selected.len());
    s.details.insert("comments-without-pairs".into(), without_pairs);
    Ok(GenerateSummary { stage: s, tally })
}

/// Drop ambiguous answers, then delete surplus Yes pairs.
pub fn postprocess(work: &WorkDir, config: &PipelineConfig) -> Result<StageSummary, Error> {
    let pairs: Vec<QAPair> = read_jsonl(&work.file(PAIRS_FILE))?;
    let mut s = StageSummary::new("postprocess");
    s.input = pairs.len();
    let (kept, ambiguous): (Vec<QAPair>, Vec<QAPair>) =
        pairs.into_iter().partition(|p| !config.ambiguity.is_ambiguous(&p.answer));
    s.drop("ambiguous", ambiguous.len());
    let (kept, removed) = balance_yes_no(kept, config.yes_ratio, config.seed)?;
    s.drop("balanced-yes", removed);
    s.output = kept.len();
    write_jsonl(&work.file(POSTPROCESSED_FILE), &kept)?;
    Ok(s)
}

/// Assign splits and write the three dataset files plus the assigned pairs.
pub fn split_stage(work: &WorkDir, config: &PipelineConfig) -> Result<StageSummary, Error> {
    let pairs: Vec<QAPair> = read_jsonl(&work.file(POSTPROCESSED_FILE))?;
    let records: Vec<CodeCommentRecord> = read_jsonl(&work.file(RECORDS_FILE))?;
    let tokens: HashMap<&str, &[String]> = records.iter().map(|r| (r.id.as_str(), r.code_tokens.as_slice())).collect();
    let unknown: Vec<&str> = pairs.iter().map(|p| p.code_id.as_str()).filter(|id| !tokens.contains_key(id)).collect();
    if !unknown.is_empty() {
        return Err(Error::Invalid(format!("pairs reference unknown code ids: {}", unknown.join(", "))));
    }
    let mut s = StageSummary::new("split");
    s.input = pairs.len();
    let splits = split(pairs, config.ratios, config.seed, config.group_by_code)?;
    for tag in [Split::Train, Split::Dev, Split::Test] {
        let rows: Vec<DatasetRecord> =
            splits.get(tag).iter().map(|p| DatasetRecord::from_pair(p, tokens[p.code_id.as_str()])).collect();
        write_jsonl(&work.split_file(tag), &rows)?;
        s.details.insert(tag.as_str().into(), rows.len());
    }
    let assigned = splits.assigned();
    s.output = assigned.len();
    write_jsonl(&work.file(ASSIGNED_FILE), &assigned)?;
    Ok(s)
}

/// Compute dataset statistics over the three split files.
pub fn stats(work: &WorkDir) -> Result<StatsReport, Error> {
    let mut splits = Vec::new();
    for tag in [Split::Train, Split::Dev, Split::Test] {
        let rows: Vec<DatasetRecord> = read_jsonl(&work.split_file(tag))?;
        splits.push((tag.as_str().to_string(), rows));
    }
    let report = dataset_stats(&splits);
    let path = work.file(STATS_FILE);
    std::fs::write(&path, report.to_json() + "\n").map_err(|e| Error::write(&path, e))?;
    Ok(report)
}

pub fn evaluate(predictions: &Path, gold: &Path, exclude_yes_no: bool) -> Result<MetricReport, Error> {
    evaluate_files(predictions, gold, exclude_yes_no)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Categorized {
    pub question: String,
    pub qtype: QType,
}

/// Categorize questions from a file holding either plain lines or JSON
/// objects with a `question` field.
pub fn categorize_file(path: &Path) -> Result<Vec<Categorized>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let question = if line.starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Line {
                path: path.to_path_buf(),
                line: i + 1,
                source: crate::ValidationError::new("$", e.to_string()),
            })?;
            match v.get("question").and_then(|q| q.as_str()) {
                Some(q) => q.to_string(),
                None => {
                    return Err(Error::Line {
                        path: path.to_path_buf(),
                        line: i + 1,
                        source: crate::ValidationError::new("question", "missing field"),
                    })
                }
            }
        } else {
            line.to_string()
        };
        out.push(Categorized { qtype: categorize_question(&question), question });
    }
    Ok(out)
}

/// Inputs of a full run.
#[derive(Clone, Debug)]
pub struct RunInputs<'a> {
    pub corpus: &'a Path,
    pub raw_annotations: Option<&'a Path>,
    pub annotations: &'a Path,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub stages: Vec<StageSummary>,
    pub tally: GenerationTally,
    pub stats: StatsReport,
}

impl RunSummary {
    pub fn is_conserved(&self) -> bool {
        self.stages.iter().all(StageSummary::is_conserved) && self.tally.is_conserved()
    }
}

/// Run every stage in order.
pub fn run_all(inputs: &RunInputs<'_>, work: &WorkDir, config: &PipelineConfig) -> Result<RunSummary, Error> {
    let mut stages = vec![
        ingest(inputs.corpus, work, config)?,
        select(work, inputs.raw_annotations, config)?,
    ];
    let generated = generate(work, inputs.annotations, config)?;
    stages.push(generated.stage);
    stages.push(postprocess(work, config)?);
    stages.push(split_stage(work, config)?);
    let stats = stats(work)?;
    Ok(RunSummary { stages, tally: generated.tally, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::serialize_annotation;
    use crate::compact::parse_compact;

    const ROOT: &str = "id: c1\n\
        tokens: The/the/DT/1/det cache/cache/NN/2/nsubj adds/add/VBZ/-1/root and/and/CC/4/cc \
        removes/remove/VBZ/2/conj entries/entry/NNS/2/dobj to/to/TO/7/mark save/save/VB/2/advcl space/space/NN/7/dobj\n\
        srl 2: ARG0 0-1; V 2; ARG1 5; ARGM-PNC 6-8\n\
        srl 4: ARG0 0-1; V 4; ARG1 5; ARGM-PNC 6-8";

    fn setup(dir: &Path) -> (PathBuf, PathBuf) {
        let corpus = dir.join("corpus.jsonl");
        let lines = [
            r#"{"id":"c1","language":"java","code":"void f() { add(); remove(); }","comment":"The cache adds and removes entries to save space"}"#,
            r#"{"id":"c2","language":"java","code":"int g() { return 0; }","comment":"TODO: remove"}"#,
            r#"{"id":"c3","language":"java","code":"int g() { return 1; }"}"#,
        ];
        std::fs::write(&corpus, lines.join("\n")).unwrap();
        let ann = dir.join("ann.jsonl");
        std::fs::write(&ann, serialize_annotation(&parse_compact(ROOT).unwrap()) + "\n").unwrap();
        (corpus, ann)
    }

    #[test]
    fn stages_conserve_counts() {
        let dir = tempfile::tempdir().unwrap();
        let (corpus, ann) = setup(dir.path());
        let work = WorkDir::new(dir.path().join("work")).unwrap();
        let config = PipelineConfig::default();
        let ingest = ingest(&corpus, &work, &config).unwrap();
        assert_eq!((ingest.input, ingest.output, ingest.drops["malformed"]), (3, 2, 1));
        let sel = select(&work, None, &config).unwrap();
        assert_eq!((sel.output, sel.drops["noisy"]), (1, 1));
        let generated = generate(&work, &ann, &config).unwrap();
        assert!(generated.stage.is_conserved() && generated.tally.is_conserved());
        assert!(generated.stage.output >= 3);
        for s in [ingest, sel, postprocess(&work, &config).unwrap(), split_stage(&work, &config).unwrap()] {
            assert!(s.is_conserved(), "{s:?}");
        }
        let report = stats(&work).unwrap();
        assert!(work.file(STATS_FILE).exists());
        assert!(!report.splits.is_empty());
    }

    #[test]
    fn missing_annotations_are_listed() {
        let dir = tempfile::tempdir().unwrap();
        let (corpus, _) = setup(dir.path());
        let empty = dir.path().join("none.jsonl");
        std::fs::write(&empty, "").unwrap();
        let work = WorkDir::new(dir.path().join("work")).unwrap();
        let config = PipelineConfig::default();
        ingest(&corpus, &work, &config).unwrap();
        select(&work, None, &config).unwrap();
        let err = generate(&work, &empty, &config).unwrap_err();
        assert!(matches!(&err, Error::Invalid(m) if m.contains("c1")), "{err}");
    }

    #[test]
    fn categorize_reads_plain_and_json_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("q.txt");
        std::fs::write(&p, "What is it?\n{\"question\": \"Does it work?\"}\n\n").unwrap();
        let out = categorize_file(&p).unwrap();
        assert_eq!(out.iter().map(|c| c.qtype).collect::<Vec<_>>(), [QType::What, QType::YesNo]);
    }
}
