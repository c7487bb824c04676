//! `synrank` command-line front end.
//!
//! Exit codes: 0 on success, 1 on data errors, 2 on usage errors. Numeric
//! flags are validated before any file is opened.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::harness::{evaluate_corpus, sensitivity_analysis, EvalConfig, NamedProvider, SuccessRule};
use crate::io::{self, ReportFormat};
use crate::mapping::build_mapping;
use crate::measures::{FootrulePenalty, JaccardDenominator, MeasureConfig, MeasureId};
use crate::simulate::{attack_succeeded, default_vocabulary, generate_corpus, SimulationConfig};
use crate::synonymity::{EmbeddingTable, SynonymLexicon, SynonymityProvider};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding a default embedding file.
pub const EMBEDDING_ENV: &str = "SYNRANK_EMBEDDING";

#[derive(Debug, Parser)]
#[command(name = "synrank", version, about = "Standard and synonymity-weighted similarity of ranked explanations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare two explanations and print standard and weighted similarities.
    Compare(CompareArgs),
    /// Attack-success rates and average similarities over a record corpus.
    BatchEval(BatchArgs),
    /// Batch evaluation repeated for several synonymity providers.
    Sensitivity(SensitivityArgs),
    /// Generate a synthetic attack corpus.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProviderKind {
    Exact,
    Embedding,
    Thesaurus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DenominatorArg {
    Unadjusted,
    Adjusted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// Comma-separated measures: jaccard, kendall, spearman, rbo@P.
    #[arg(long, value_parser = parse_measure, value_delimiter = ',', default_value = "jaccard,kendall,spearman,rbo@0.5,rbo@0.7,rbo@0.9")]
    measures: Vec<MeasureId>,
    #[arg(long, value_enum, default_value = "unadjusted")]
    jaccard_denominator: DenominatorArg,
    /// Add the extrapolation term to RBO.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    rbo_extrapolated: bool,
    /// Fixed footrule penalty (defaults to half the original length).
    #[arg(long, value_parser = parse_positive)]
    footrule_penalty: Option<f64>,
}

impl MeasureArgs {
    fn measures(&self) -> Vec<MeasureId> {
        self.measures.clone()
    }

    fn config(&self) -> MeasureConfig {
        MeasureConfig {
            jaccard_denominator: match self.jaccard_denominator {
                DenominatorArg::Unadjusted => JaccardDenominator::Unadjusted,
                DenominatorArg::Adjusted => JaccardDenominator::Adjusted,
            },
            footrule_penalty: self.footrule_penalty.map_or(FootrulePenalty::HalfLength, FootrulePenalty::Fixed),
            rbo_extrapolated: self.rbo_extrapolated,
        }
    }
}

#[derive(Debug, Args)]
struct ProviderArgs {
    #[arg(long, value_enum, default_value = "exact")]
    provider: ProviderKind,
    /// Word vectors in GloVe text format.
    #[arg(long, env = EMBEDDING_ENV)]
    embedding: Option<PathBuf>,
    /// Synonym lexicon, `headword<TAB>syn1,syn2,...` per line.
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Original explanation, one token per line in rank order.
    #[arg(long)]
    original: PathBuf,
    /// Perturbed explanation, one token per line in rank order.
    #[arg(long)]
    perturbed: PathBuf,
    /// Substitution log, `iteration<TAB>original<TAB>replacement` per line.
    #[arg(long)]
    substitutions: Option<PathBuf>,
    #[command(flatten)]
    measures: MeasureArgs,
    #[command(flatten)]
    provider: ProviderArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Adversarial records, one JSON object per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_fraction, value_delimiter = ',', default_value = "0.3,0.4,0.5,0.6")]
    thresholds: Vec<f64>,
    /// Report CSV path; the CSV goes to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Optional JSON mirror of the report.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Score each (measure, threshold) cell only on the records generated for it.
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    filter_own_batch: bool,
    /// Count `similarity <= tau` as success instead of `<`.
    #[arg(long)]
    inclusive: bool,
    /// Dataset label for the report (defaults to the input file stem).
    #[arg(long)]
    dataset: Option<String>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    measures: MeasureArgs,
}

#[derive(Debug, Args)]
struct BatchArgs {
    #[command(flatten)]
    eval: EvalArgs,
    #[command(flatten)]
    provider: ProviderArgs,
}

#[derive(Debug, Args)]
struct SensitivityArgs {
    #[command(flatten)]
    eval: EvalArgs,
    /// Comma-separated providers as `[NAME=]KIND[:PATH]`, e.g.
    /// `exact,glove=embedding:glove.txt,wordnet=thesaurus:wn.tsv`.
    #[arg(long, value_delimiter = ',', required = true)]
    providers: Vec<String>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate substitutions; document words are drawn from its headwords.
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, value_parser = parse_measure, default_value = "jaccard")]
    guiding_measure: MeasureId,
    #[arg(long, value_parser = parse_fraction, default_value = "0.5")]
    tau: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value = "5")]
    k: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), default_value = "10")]
    max_iterations: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value = "12")]
    doc_len: u64,
    /// Output JSONL; records go to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn parse_measure(s: &str) -> Result<MeasureId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [0, 1]"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{x} must be positive"))
    }
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compare(a) => cmd_compare(a, out),
        Command::BatchEval(a) => cmd_batch_eval(a, out),
        Command::Sensitivity(a) => cmd_sensitivity(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Data(Error::io("<stdout>", e))
}

fn require(path: &Option<PathBuf>, flag: &str, kind: &str) -> Result<PathBuf, Failure> {
    path.clone()
        .ok_or_else(|| Failure::Usage(format!("--provider {kind} requires {flag}")))
}

fn load_provider(kind: ProviderKind, path: &Path) -> Result<SynonymityProvider, Failure> {
    Ok(match kind {
        ProviderKind::Exact => SynonymityProvider::Exact,
        ProviderKind::Embedding => SynonymityProvider::Embedding(EmbeddingTable::load(path)?),
        ProviderKind::Thesaurus => SynonymityProvider::Thesaurus(SynonymLexicon::load(path)?),
    })
}

/// Resolves the provider flags into a path to load, without touching files.
fn provider_source(args: &ProviderArgs) -> Result<(ProviderKind, Option<PathBuf>), Failure> {
    Ok(match args.provider {
        ProviderKind::Exact => (ProviderKind::Exact, None),
        ProviderKind::Embedding => (ProviderKind::Embedding, Some(require(&args.embedding, "--embedding", "embedding")?)),
        ProviderKind::Thesaurus => (ProviderKind::Thesaurus, Some(require(&args.lexicon, "--lexicon", "thesaurus")?)),
    })
}

fn open_provider(source: (ProviderKind, Option<PathBuf>)) -> Result<SynonymityProvider, Failure> {
    match source {
        (kind, Some(path)) => load_provider(kind, &path),
        _ => Ok(SynonymityProvider::Exact),
    }
}

struct ProviderSpec {
    name: String,
    kind: ProviderKind,
    path: Option<PathBuf>,
}

fn parse_provider_spec(spec: &str) -> Result<ProviderSpec, Failure> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once('=') {
        Some((n, r)) => (Some(n.trim()), r.trim()),
        None => (None, spec),
    };
    let (kind, path) = match rest.split_once(':') {
        Some((k, p)) => (k.trim(), Some(PathBuf::from(p.trim()))),
        None => (rest, None),
    };
    let kind = ProviderKind::from_str(kind, true)
        .map_err(|_| Failure::Usage(format!("unknown provider kind in `{spec}`")))?;
    let path = match (kind, path) {
        (ProviderKind::Exact, _) => None,
        (_, Some(p)) => Some(p),
        (ProviderKind::Embedding, None) => std::env::var_os(EMBEDDING_ENV).map(PathBuf::from),
        (ProviderKind::Thesaurus, None) => None,
    };
    if kind != ProviderKind::Exact && path.is_none() {
        return Err(Failure::Usage(format!("provider `{spec}` needs a path (KIND:PATH)")));
    }
    let name = name.filter(|n| !n.is_empty()).map_or_else(
        || format!("{kind:?}").to_lowercase(),
        str::to_owned,
    );
    Ok(ProviderSpec { name, kind, path })
}

fn cmd_compare(args: CompareArgs, out: &mut dyn Write) -> CliResult {
    let source = provider_source(&args.provider)?;
    let measures = args.measures.measures();
    let config = args.measures.config();

    let original = io::read_explanation(&args.original)?;
    let perturbed = io::read_explanation(&args.perturbed)?;
    let substitutions = match &args.substitutions {
        Some(p) => io::read_substitutions(p)?,
        None => Vec::new(),
    };
    let provider = open_provider(source)?;
    let mapping = build_mapping(&original, &perturbed, &substitutions)?;

    let mut header = format!("{:<10}", "");
    let mut standard = format!("{:<10}", "Standard");
    let mut weighted = format!("{:<10}", "Weighted");
    for m in &measures {
        let name = m.to_string();
        let width = name.len().max(7);
        header.push_str(&format!(" {name:>width$}"));
        let s = m.standard(&original, &perturbed, &config).similarity;
        let w = m.weighted(&original, &perturbed, &mapping, &provider, &config).similarity;
        standard.push_str(&format!(" {s:>width$.4}"));
        weighted.push_str(&format!(" {w:>width$.4}"));
    }
    writeln!(out, "{header}\n{standard}\n{weighted}").map_err(io_failure)
}

fn eval_config(args: &EvalArgs) -> EvalConfig {
    EvalConfig {
        measure: args.measures.config(),
        success_rule: if args.inclusive { SuccessRule::AtOrBelow } else { SuccessRule::Below },
        own_batch: args.filter_own_batch,
        jobs: args.jobs,
    }
}

fn dataset_name(args: &EvalArgs) -> String {
    args.dataset.clone().unwrap_or_else(|| {
        args.input
            .file_stem()
            .map_or_else(|| "corpus".to_owned(), |s| s.to_string_lossy().into_owned())
    })
}

fn emit_report(args: &EvalArgs, report: &crate::harness::EvaluationReport, out: &mut dyn Write) -> CliResult {
    let format = match args.format {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
    };
    match &args.output {
        Some(path) => {
            io::write_report(report, path, format)?;
            out.write_all(io::render_table(report).as_bytes()).map_err(io_failure)?;
        }
        None => {
            let text = match format {
                ReportFormat::Csv => io::render_csv(report)?,
                ReportFormat::Json => io::render_json(report)?,
            };
            out.write_all(text.as_bytes()).map_err(io_failure)?;
        }
    }
    if let Some(path) = &args.json {
        io::write_report(report, path, ReportFormat::Json)?;
    }
    Ok(())
}

fn cmd_batch_eval(args: BatchArgs, out: &mut dyn Write) -> CliResult {
    let source = provider_source(&args.provider)?;
    let name = match source.0 {
        ProviderKind::Exact => "exact",
        ProviderKind::Embedding => "embedding",
        ProviderKind::Thesaurus => "thesaurus",
    };
    let records = io::read_records(&args.eval.input)?;
    let provider = NamedProvider::new(name, open_provider(source)?);
    let report = evaluate_corpus(
        &dataset_name(&args.eval),
        &records,
        &args.eval.measures.measures(),
        &[provider],
        &args.eval.thresholds,
        &eval_config(&args.eval),
    )?;
    emit_report(&args.eval, &report, out)
}

fn cmd_sensitivity(args: SensitivityArgs, out: &mut dyn Write) -> CliResult {
    let specs = args
        .providers
        .iter()
        .map(|s| parse_provider_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    let records = io::read_records(&args.eval.input)?;
    let providers = specs
        .into_iter()
        .map(|s| Ok(NamedProvider::new(s.name, open_provider((s.kind, s.path))?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let dataset = dataset_name(&args.eval);
    let measures = args.eval.measures.measures();
    let config = eval_config(&args.eval);
    let report = if providers.len() == 1 {
        evaluate_corpus(&dataset, &records, &measures, &providers, &args.eval.thresholds, &config)?
    } else {
        sensitivity_analysis(&dataset, &records, &measures, &providers, &args.eval.thresholds, &config)?
    };
    emit_report(&args.eval, &report, out)
}

fn cmd_simulate(args: SimulateArgs, out: &mut dyn Write) -> CliResult {
    let config = SimulationConfig {
        seed: args.seed,
        max_iterations: args.max_iterations,
        guiding_measure: args.guiding_measure,
        tau: args.tau,
        k: args.k as usize,
        doc_len: args.doc_len as usize,
        measure: MeasureConfig::default(),
        jobs: args.jobs,
    };
    config.validate()?;
    let lexicon = SynonymLexicon::load(&args.lexicon)?;
    let vocabulary = default_vocabulary(&lexicon);
    if vocabulary.is_empty() {
        return Err(Error::NoCandidates.into());
    }
    let records = generate_corpus(args.n as usize, &vocabulary, &lexicon, &config)?;
    let successes = records.iter().filter(|r| attack_succeeded(r)).count();
    match &args.output {
        Some(path) => {
            io::write_records(path, &records)?;
            writeln!(
                out,
                "{} records, {successes} successes (guiding {}, tau {})",
                records.len(),
                config.guiding_measure,
                config.tau
            )
            .map_err(io_failure)?;
        }
        None => out
            .write_all(io::render_records(&records).as_bytes())
            .map_err(io_failure)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::DEFAULT_THRESHOLDS;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("synrank").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        assert_eq!(run_args(&["compare"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["simulate", "--n", "0", "--lexicon", "/nonexistent"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["simulate", "--n", "3", "--tau", "1.5", "--lexicon", "/nonexistent"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["batch-eval", "--input", "/nonexistent", "--measures", "rbo@2"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("batch-eval"));
    }

    #[test]
    fn missing_input_is_a_data_error() {
        let (code, _, err) = run_args(&["batch-eval", "--input", "/nonexistent/records.jsonl"]);
        assert_eq!(code, EXIT_DATA);
        assert!(err.contains("/nonexistent/records.jsonl"));
    }

    #[test]
    fn provider_specs() {
        let s = parse_provider_spec("glove=embedding:/tmp/g.txt").ok().unwrap();
        assert_eq!(s.name, "glove");
        assert_eq!(s.kind, ProviderKind::Embedding);
        assert_eq!(s.path, Some(PathBuf::from("/tmp/g.txt")));
        let s = parse_provider_spec("exact").ok().unwrap();
        assert_eq!(s.name, "exact");
        let s = parse_provider_spec("thesaurus:wn.tsv").ok().unwrap();
        assert_eq!(s.name, "thesaurus");
        assert!(matches!(parse_provider_spec("thesaurus"), Err(Failure::Usage(_))));
        assert!(matches!(parse_provider_spec("bogus:x"), Err(Failure::Usage(_))));
    }

    #[test]
    fn default_thresholds_match_harness() {
        let cli = Cli::try_parse_from(["synrank", "batch-eval", "--input", "x.jsonl"]).unwrap();
        let Command::BatchEval(args) = cli.command else { unreachable!() };
        assert_eq!(args.eval.thresholds, DEFAULT_THRESHOLDS);
        assert_eq!(args.eval.measures.measures(), MeasureId::defaults());
    }
}
