//! `cqa`: build, audit and score code question-answering datasets.

mod config;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cqa_core::analyzer::qtype_distribution;
use cqa_core::generate::GenerateConfig;
use cqa_core::pipeline::{self, PipelineConfig, RunInputs, StageSummary, WorkDir};
use cqa_core::postprocess::{parse_ratios, DEFAULT_RATIOS, DEFAULT_SEED, DEFAULT_YES_RATIO};
use cqa_core::selector::{NoiseFilter, SelectorConfig};
use cqa_core::{Error, Language, TemplateRegistry};

#[derive(Parser, Debug)]
#[command(name = "cqa", version, about = "Build code QA datasets from code-comment corpora")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Options {
    /// key = value file; flags given on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory holding the stage files [default: work]
    #[arg(long, global = true, value_name = "DIR")]
    work: Option<PathBuf>,
    /// Corpus file, one JSON record per line
    #[arg(long, global = true, value_name = "FILE")]
    corpus: Option<PathBuf>,
    /// Expected language of every corpus record (java or python)
    #[arg(long, global = true)]
    language: Option<String>,
    /// Annotations of the raw comments, used to detect missing subjects
    #[arg(long, global = true, value_name = "FILE")]
    raw_annotations: Option<PathBuf>,
    /// Annotations of the selected comment texts
    #[arg(long, global = true, value_name = "FILE")]
    annotations: Option<PathBuf>,
    /// Seed for balancing and splitting [default: 13]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Train:dev:test ratios [default: 8:1:1]
    #[arg(long, global = true, value_name = "RATIOS")]
    split: Option<String>,
    /// Largest Yes share among yes/no pairs [default: 0.5]
    #[arg(long, global = true, value_name = "RATIO")]
    yes_ratio: Option<f64>,
    /// Keep all pairs of one code in the same split
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, default_missing_value = "true", value_name = "BOOL")]
    group_by_code: Option<bool>,
    /// Cap on wh pairs per comment [default: 8]
    #[arg(long, global = true, value_name = "N")]
    max_pairs_per_comment: Option<usize>,
    /// Noise keyword file, one keyword per line
    #[arg(long, global = true, value_name = "FILE")]
    noise_keywords: Option<PathBuf>,
    /// Template registry JSON replacing the built-in templates
    #[arg(long, global = true, value_name = "FILE")]
    template_registry: Option<PathBuf>,
    /// Inflect a base-form verb after inserting "the code" [default: true]
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, default_missing_value = "true", value_name = "BOOL")]
    inflect_on_insert: Option<bool>,
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    json: bool,
    /// Report format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate the corpus
    Ingest,
    /// Drop noisy comments and add missing subjects
    Select,
    /// Generate wh and yes/no pairs from annotated comments
    Generate,
    /// Filter ambiguous answers and balance yes/no pairs
    Postprocess,
    /// Assign train/dev/test splits and write the dataset files
    Split,
    /// Report dataset statistics
    Stats,
    /// Score predictions against a gold split
    Evaluate {
        /// Predictions, one {"id", "prediction"} object per line
        #[arg(long, value_name = "FILE")]
        pred: PathBuf,
        /// Gold dataset split
        #[arg(long, value_name = "FILE")]
        gold: PathBuf,
        /// Leave Yes/No answers out of the scores
        #[arg(long)]
        exclude_yes_no: bool,
    },
    /// Assign question types to questions
    Categorize {
        /// Plain questions or JSON objects with a "question" field, one per line
        input: PathBuf,
    },
    /// Run ingest through stats
    All,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) if e.is_io() => 3,
            Failure::Core(_) => 2,
        }
    }
}

/// Flags merged over the config file.
struct Settings {
    values: BTreeMap<String, String>,
    json: bool,
}

impl Settings {
    fn resolve(opts: &Options) -> Result<Self, Failure> {
        let mut values = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::Core(Error::read(path, e)))?;
                config::parse(&text).map_err(Failure::Usage)?
            }
            None => BTreeMap::new(),
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let flags = [
            ("work", path(&opts.work)),
            ("corpus", path(&opts.corpus)),
            ("language", opts.language.clone()),
            ("raw-annotations", path(&opts.raw_annotations)),
            ("annotations", path(&opts.annotations)),
            ("seed", opts.seed.map(|v| v.to_string())),
            ("split", opts.split.clone()),
            ("yes-ratio", opts.yes_ratio.map(|v| v.to_string())),
            ("group-by-code", opts.group_by_code.map(|v| v.to_string())),
            ("max-pairs-per-comment", opts.max_pairs_per_comment.map(|v| v.to_string())),
            ("noise-keywords", path(&opts.noise_keywords)),
            ("template-registry", path(&opts.template_registry)),
            ("inflect-on-insert", opts.inflect_on_insert.map(|v| v.to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                values.insert(key.to_string(), v);
            }
        }
        Ok(Settings { values, json: opts.json || opts.format == Some(Format::Json) })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    fn required_path(&self, key: &str) -> Result<PathBuf, Failure> {
        self.path(key).ok_or_else(|| Failure::Usage(format!("--{key} is required")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, Failure> {
        match self.get(key) {
            Some(v) => v.parse().map_err(|_| Failure::Usage(format!("--{key}: invalid value {v:?}"))),
            None => Ok(default),
        }
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, Failure> {
        match self.get(key) {
            Some(v) => config::parse_bool(key, v).map_err(Failure::Usage),
            None => Ok(default),
        }
    }

    fn work(&self) -> Result<WorkDir, Failure> {
        Ok(WorkDir::new(self.path("work").unwrap_or_else(|| PathBuf::from("work")))?)
    }

    fn pipeline(&self) -> Result<PipelineConfig, Failure> {
        let language = match self.get("language") {
            Some(v) => Some(v.parse::<Language>().map_err(|e| Failure::Usage(format!("--language: {e}")))?),
            None => None,
        };
        let noise = match self.path("noise-keywords") {
            Some(p) => NoiseFilter::from_lines(&read(&p)?),
            None => NoiseFilter::default(),
        };
        let registry = match self.path("template-registry") {
            Some(p) => TemplateRegistry::from_json(&read(&p)?)?,
            None => TemplateRegistry::default(),
        };
        let ratios = match self.get("split") {
            Some(v) => parse_ratios(v).map_err(|e| Failure::Usage(e.to_string()))?,
            None => DEFAULT_RATIOS,
        };
        let yes_ratio = self.parsed("yes-ratio", DEFAULT_YES_RATIO)?;
        if !(yes_ratio > 0.0 && yes_ratio < 1.0) {
            return Err(Failure::Usage(format!("--yes-ratio must lie strictly between 0 and 1, got {yes_ratio}")));
        }
        Ok(PipelineConfig {
            language,
            selector: SelectorConfig { noise, inflect_on_insert: self.flag("inflect-on-insert", true)? },
            generate: GenerateConfig {
                registry,
                max_pairs_per_comment: self.parsed("max-pairs-per-comment", cqa_core::generate::DEFAULT_MAX_PAIRS_PER_COMMENT)?,
            },
            yes_ratio,
            seed: self.parsed("seed", DEFAULT_SEED)?,
            ratios,
            group_by_code: self.flag("group-by-code", false)?,
            ..PipelineConfig::default()
        })
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Core(Error::read(path, e)))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("summary serializes")
}

fn print_stages(stages: &[StageSummary], as_json: bool) {
    for s in stages {
        for w in &s.warnings {
            eprintln!("warning: {}: {w}", s.stage);
        }
    }
    if as_json {
        println!("{}", json(&stages));
    } else {
        for s in stages {
            println!("{}", s.render());
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let settings = Settings::resolve(&cli.opts)?;
    let as_json = settings.json;
    match cli.command {
        Command::Evaluate { pred, gold, exclude_yes_no } => {
            let report = pipeline::evaluate(&pred, &gold, exclude_yes_no)?;
            if as_json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_table());
            }
        }
        Command::Categorize { input } => {
            let items = pipeline::categorize_file(&input)?;
            let distribution = qtype_distribution(items.iter().map(|c| c.question.as_str()));
            if as_json {
                #[derive(Serialize)]
                struct Out<'a, T, D> {
                    questions: &'a [T],
                    distribution: &'a [D],
                }
                println!("{}", json(&Out { questions: &items, distribution: &distribution }));
            } else {
                for c in &items {
                    println!("{}\t{}", c.qtype, c.question);
                }
                for d in distribution.iter().filter(|d| d.count > 0) {
                    println!("# {:<16} {:>6} {:>7.2}%", d.qtype.to_string(), d.count, d.percent);
                }
            }
        }
        Command::Stats => {
            let report = pipeline::stats(&settings.work()?)?;
            if as_json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_table());
            }
        }
        Command::All => {
            let config = settings.pipeline()?;
            let corpus = settings.required_path("corpus")?;
            let annotations = settings.required_path("annotations")?;
            let raw = settings.path("raw-annotations");
            let inputs = RunInputs { corpus: &corpus, raw_annotations: raw.as_deref(), annotations: &annotations };
            let summary = pipeline::run_all(&inputs, &settings.work()?, &config)?;
            if as_json {
                println!("{}", json(&summary));
            } else {
                print_stages(&summary.stages, false);
                print!("{}", summary.stats.render_table());
            }
        }
        stage => {
            let config = settings.pipeline()?;
            let work = settings.work()?;
            let summary = match stage {
                Command::Ingest => pipeline::ingest(&settings.required_path("corpus")?, &work, &config)?,
                Command::Select => pipeline::select(&work, settings.path("raw-annotations").as_deref(), &config)?,
                Command::Generate => pipeline::generate(&work, &settings.required_path("annotations")?, &config)?.stage,
                Command::Postprocess => pipeline::postprocess(&work, &config)?,
                Command::Split => pipeline::split_stage(&work, &config)?,
                _ => unreachable!("handled above"),
            };
            print_stages(std::slice::from_ref(&summary), as_json);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Core(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
