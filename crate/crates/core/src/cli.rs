//! Command-line interface. Every subcommand is a thin wrapper over the library.

use std::collections::HashMap;
use std::error::Error;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::client::{write_replay, HttpClient, HttpConfig, ModelClient, RecordingClient, ReplayClient};
use crate::bench::prompt::{load_examples, InputFormat, PromptConfig, Shots};
use crate::bench::run::{make_replay, read_observations, run_benchmark, write_records, BenchSummary, RunOptions};
use crate::dataset::{attach_frequencies, load_entries, summarize, ColumnMap, Entry, FrequencyTable, LoadOptions};
use crate::eval::analysis::{bin_analysis, BinKey, BinScheme};
use crate::eval::freeman::FreemanTable;
use crate::eval::metrics::ErrorTaxonomy;
use crate::eval::record::Scorer;
use crate::hsb::{from_hsb, to_hsb};
use crate::lemma::check_integrity;
use crate::normalizer::Normalizer;
use crate::script::{parse_arabic, DiacritizedWord};
use crate::validator::{validate, validate_with_input, ValidationProfile};

type CliResult = Result<i32, Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(
    name = "ardiac",
    version,
    about = "Diacritized Arabic proper-noun lemmas: validation, repair and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Input file (default: stdin).
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long = "out", value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Dataset TSV.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Column overrides, e.g. `arabic_input=word,gloss=english`.
    #[arg(long)]
    pub columns: Option<String>,
    /// Accept gold lemmas that fail the spelling integrity check.
    #[arg(long)]
    pub lenient: bool,
    /// Word frequency TSV (word, count).
    #[arg(long, value_name = "FILE")]
    pub freq: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Lemma,
    Surface,
}

impl From<ProfileArg> for ValidationProfile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Lemma => ValidationProfile::Lemma,
            ProfileArg::Surface => ValidationProfile::Surface,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HsbDirection {
    /// Arabic script to HSB.
    To,
    /// HSB to Arabic script.
    From,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeyArg {
    Freeman,
    Frequency,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check lemmas against the orthographic rules. Input lines: lemma [TAB input].
    Validate {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value = "lemma")]
        profile: ProfileArg,
        /// Read and write HSB instead of Arabic script.
        #[arg(long)]
        hsb: bool,
        /// Exit with status 1 when any violation is found.
        #[arg(long)]
        gate: bool,
    },
    /// Repair words. Output lines: input, normalized, repair trace.
    Normalize {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        hsb: bool,
    },
    /// Convert between Arabic script and HSB, line by line or from arguments.
    Hsb {
        #[arg(value_enum)]
        direction: HsbDirection,
        /// Words to convert; when absent, lines are read from --in or stdin.
        text: Vec<String>,
        #[command(flatten)]
        io: Io,
    },
    /// Check lemma spelling against the input. Input lines: input TAB lemma.
    CheckLemma {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        hsb: bool,
    },
    /// Corpus statistics for a dataset.
    Stats {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Score predictions (TSV: id, prediction) against the dataset's gold lemmas.
    Evaluate {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long, value_name = "FILE")]
        predictions: PathBuf,
        /// Results TSV (default: stdout).
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
        /// Summary JSON.
        #[arg(long, value_name = "FILE")]
        summary: Option<PathBuf>,
    },
    /// Binned accuracy analysis over a results file.
    Analyze {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value = "freeman")]
        key: KeyArg,
        /// `deciles`, `quartiles`, or comma-separated upper edges.
        #[arg(long, default_value = "deciles")]
        bins: String,
    },
    /// Prompt a model (or a replay file) and score the answers.
    Bench {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        prompt: PromptArgs,
        /// Recorded responses; when absent the live endpoint is used.
        #[arg(long, value_name = "FILE")]
        replay: Option<PathBuf>,
        #[arg(long, default_value = crate::bench::client::DEFAULT_ENDPOINT)]
        endpoint: String,
        #[arg(long, default_value = crate::bench::client::DEFAULT_MODEL)]
        model: String,
        #[arg(long, default_value_t = 4)]
        max_in_flight: usize,
        /// Save live responses as a replay file.
        #[arg(long, value_name = "FILE")]
        record: Option<PathBuf>,
        /// Results TSV (default: stdout).
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
        /// Summary JSON (default: stderr).
        #[arg(long, value_name = "FILE")]
        summary: Option<PathBuf>,
    },
    /// Build a replay file that answers each prompt with given predictions (TSV: id, prediction).
    MakeReplay {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        prompt: PromptArgs,
        #[arg(long, value_name = "FILE")]
        predictions: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PromptArgs {
    /// Named configuration: {zero,one,few}_{gloss,arabic}. Overrides --shots and --format.
    #[arg(long)]
    pub config: Option<String>,
    /// zero, one, few or few:N.
    #[arg(long, default_value = "few")]
    pub shots: String,
    /// arabic+gloss or arabic-only.
    #[arg(long, default_value = "arabic+gloss")]
    pub format: String,
    /// Few-shot examples TSV (input, gloss, output).
    #[arg(long, value_name = "FILE")]
    pub examples: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub batch_size: usize,
}

impl PromptArgs {
    fn to_config(&self) -> Result<PromptConfig, Box<dyn Error>> {
        let mut config = match &self.config {
            Some(name) => PromptConfig::preset(name).ok_or_else(|| format!("unknown configuration {name:?}"))?,
            None => PromptConfig::new(self.shots.parse::<Shots>()?, self.format.parse::<InputFormat>()?),
        };
        if let Some(path) = &self.examples {
            config.examples = load_examples(path)?.into();
        }
        config.batch_size = self.batch_size;
        config.check()?;
        Ok(config)
    }
}

fn open_input(path: Option<&Path>) -> io::Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Non-blank, non-comment lines with 1-based line numbers.
fn data_lines(reader: impl BufRead) -> io::Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        out.push((i + 1, line.to_string()));
    }
    Ok(out)
}

fn parse_word(text: &str, hsb: bool) -> Result<DiacritizedWord, String> {
    let text = text.trim();
    if hsb {
        from_hsb(text).map_err(|e| e.to_string())
    } else {
        parse_arabic(text).map_err(|e| e.to_string())
    }
}

fn show(word: &DiacritizedWord, hsb: bool) -> String {
    if hsb {
        to_hsb(word).into_string()
    } else {
        word.render()
    }
}

fn load_dataset(args: &DatasetArgs) -> Result<Vec<Entry>, Box<dyn Error>> {
    let columns = match &args.columns {
        Some(spec) => ColumnMap::default().with_overrides(spec)?,
        None => ColumnMap::default(),
    };
    let options = LoadOptions {
        columns,
        check_integrity: !args.lenient,
    };
    let mut entries = load_entries(&args.input, &options)?;
    if let Some(path) = &args.freq {
        let table = FrequencyTable::load(path)?;
        attach_frequencies(&mut entries, &table);
    }
    Ok(entries)
}

fn read_predictions(path: &Path) -> Result<HashMap<String, String>, Box<dyn Error>> {
    let mut map = HashMap::new();
    for (n, line) in data_lines(BufReader::new(File::open(path)?))? {
        let (id, pred) = line
            .split_once('\t')
            .ok_or_else(|| format!("{}:{n}: expected id<TAB>prediction", path.display()))?;
        if n == 1 && id == "id" {
            continue;
        }
        map.insert(id.trim().to_string(), pred.trim().to_string());
    }
    Ok(map)
}

fn cmd_validate(io_args: &Io, profile: ValidationProfile, hsb: bool, gate: bool) -> CliResult {
    let lines = data_lines(open_input(io_args.input.as_deref())?)?;
    let mut out = open_output(io_args.output.as_deref())?;
    let (mut flagged, mut unreadable) = (0usize, 0usize);
    for (n, line) in &lines {
        let mut cols = line.split('\t');
        let text = cols.next().unwrap_or("").trim();
        let input = cols.next().map(str::trim).filter(|s| !s.is_empty());
        let word = match parse_word(text, hsb) {
            Ok(w) => w,
            Err(e) => {
                writeln!(out, "{n}\t{text}\tparse-error\t\t{e}")?;
                unreadable += 1;
                continue;
            }
        };
        let violations = match input {
            Some(inp) => {
                let skeleton = if hsb {
                    from_hsb(inp).map(|w| w.skeleton()).unwrap_or_default()
                } else {
                    inp.to_string()
                };
                validate_with_input(&word, profile, &skeleton)
            }
            None => validate(&word, profile),
        };
        if !violations.is_empty() {
            flagged += 1;
        }
        for v in violations {
            writeln!(out, "{n}\t{text}\t{}", v.report_line())?;
        }
    }
    out.flush()?;
    eprintln!(
        "{} words, {flagged} with violations, {unreadable} unreadable",
        lines.len()
    );
    Ok(if gate && flagged + unreadable > 0 { 1 } else { 0 })
}

fn cmd_normalize(io_args: &Io, hsb: bool) -> CliResult {
    let lines = data_lines(open_input(io_args.input.as_deref())?)?;
    let mut out = open_output(io_args.output.as_deref())?;
    let normalizer = Normalizer::bundled();
    for (n, line) in &lines {
        let text = line.split('\t').next().unwrap_or("").trim();
        match parse_word(text, hsb) {
            Ok(w) => {
                let r = normalizer.normalize(&w);
                writeln!(out, "{text}\t{}\t{}", show(&r.word, hsb), r.trace)?;
            }
            Err(e) => {
                log::warn!("line {n}: {e}");
                writeln!(out, "{text}\t\tparse-error: {e}")?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_hsb(direction: HsbDirection, text: &[String], io_args: &Io) -> CliResult {
    let lines: Vec<String> = if text.is_empty() {
        data_lines(open_input(io_args.input.as_deref())?)?
            .into_iter()
            .map(|(_, l)| l)
            .collect()
    } else {
        text.to_vec()
    };
    let mut out = open_output(io_args.output.as_deref())?;
    let mut status = 0;
    for line in &lines {
        let result = match direction {
            HsbDirection::To => parse_arabic(line.trim())
                .map(|w| to_hsb(&w).into_string())
                .map_err(|e| e.to_string()),
            HsbDirection::From => from_hsb(line.trim()).map(|w| w.render()).map_err(|e| e.to_string()),
        };
        match result {
            Ok(s) => writeln!(out, "{s}")?,
            Err(e) => {
                eprintln!("{}: {e}", line.trim());
                writeln!(out)?;
                status = 2;
            }
        }
    }
    out.flush()?;
    Ok(status)
}

fn cmd_check_lemma(io_args: &Io, hsb: bool) -> CliResult {
    let lines = data_lines(open_input(io_args.input.as_deref())?)?;
    let mut out = open_output(io_args.output.as_deref())?;
    for (n, line) in &lines {
        let Some((input, lemma)) = line.split_once('\t') else {
            return Err(format!("line {n}: expected input<TAB>lemma").into());
        };
        let (input, lemma_text) = (input.trim(), lemma.trim());
        let skeleton = if hsb {
            from_hsb(input).map_err(|e| format!("line {n}: {e}"))?.skeleton()
        } else {
            input.to_string()
        };
        match parse_word(lemma_text, hsb) {
            Ok(lemma) => {
                let r = check_integrity(&skeleton, &lemma);
                let diff = r.diff.map_or_else(String::new, |d| d.to_string());
                writeln!(
                    out,
                    "{input}\t{lemma_text}\t{}\t{}\t{diff}",
                    if r.ok { "ok" } else { "fail" },
                    r.label()
                )?;
            }
            Err(e) => writeln!(out, "{input}\t{lemma_text}\tparse-error\t{e}\t")?,
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_stats(args: &DatasetArgs, output: Option<&Path>) -> CliResult {
    let entries = load_dataset(args)?;
    let stats = summarize(&entries, FreemanTable::bundled())?;
    let mut out = open_output(output)?;
    out.write_all(stats.to_tsv().as_bytes())?;
    out.flush()?;
    Ok(0)
}

fn write_summary(summary: &BenchSummary, path: Option<&Path>) -> io::Result<()> {
    let json = summary.to_json() + "\n";
    match path {
        Some(p) => std::fs::write(p, json),
        None => io::stderr().write_all(json.as_bytes()),
    }
}

fn cmd_evaluate(args: &DatasetArgs, predictions: &Path, output: Option<&Path>, summary: Option<&Path>) -> CliResult {
    let entries = load_dataset(args)?;
    let preds = read_predictions(predictions)?;
    let taxonomy = ErrorTaxonomy::default();
    let scorer = Scorer::new(Normalizer::bundled(), &taxonomy);
    let mut records = Vec::with_capacity(entries.len());
    for e in &entries {
        let gold = e
            .gold_lemma
            .as_ref()
            .ok_or_else(|| format!("entry {} has no gold lemma", e.id))?;
        let freeman = FreemanTable::bundled().similarity(&e.arabic_input, &e.gloss).ok();
        records.push(match preds.get(&e.id) {
            Some(p) => scorer.score(&e.id, p, gold, freeman, e.frequency),
            None => scorer.failed(&e.id, "", gold, "no prediction", freeman, e.frequency),
        });
    }
    let mut out = open_output(output)?;
    write_records(&mut out, &records)?;
    out.flush()?;
    let config = PromptConfig::new(Shots::Zero, InputFormat::ArabicGloss);
    let mut s = BenchSummary::from_records(&config, &records);
    s.config = "external".into();
    s.shots = String::new();
    s.input_format = String::new();
    write_summary(&s, summary)?;
    Ok(0)
}

fn parse_scheme(bins: &str) -> Result<BinScheme, Box<dyn Error>> {
    Ok(match bins {
        "deciles" => BinScheme::deciles(),
        "quartiles" => BinScheme::Quartiles,
        edges => BinScheme::Edges(
            edges
                .split(',')
                .map(|e| e.trim().parse::<f64>().map_err(|_| format!("bad bin edge {e:?}")))
                .collect::<Result<_, _>>()?,
        ),
    })
}

fn cmd_analyze(io_args: &Io, key: KeyArg, bins: &str) -> CliResult {
    let obs = read_observations(open_input(io_args.input.as_deref())?)?;
    let key = match key {
        KeyArg::Freeman => BinKey::Freeman,
        KeyArg::Frequency => BinKey::Frequency,
    };
    let analysis = bin_analysis(&obs, key, &parse_scheme(bins)?)?;
    let mut out = open_output(io_args.output.as_deref())?;
    out.write_all(analysis.to_tsv().as_bytes())?;
    out.flush()?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    dataset: &DatasetArgs,
    prompt: &PromptArgs,
    replay: Option<&Path>,
    endpoint: &str,
    model: &str,
    max_in_flight: usize,
    record: Option<&Path>,
    output: Option<&Path>,
    summary: Option<&Path>,
) -> CliResult {
    let config = prompt.to_config()?;
    let entries = load_dataset(dataset)?;
    let options = RunOptions {
        max_in_flight,
        ..RunOptions::default()
    };
    let run = match replay {
        Some(path) => run_benchmark(&entries, &ReplayClient::load(path)?, &config, &options)?,
        None => {
            let http = HttpClient::from_env(HttpConfig {
                endpoint: endpoint.to_string(),
                model: model.to_string(),
                ..HttpConfig::default()
            })?;
            match record {
                Some(path) => {
                    let recorder = RecordingClient::new(http);
                    let run = run_benchmark(&entries, &recorder as &dyn ModelClient, &config, &options)?;
                    write_replay(BufWriter::new(File::create(path)?), &recorder.into_records())?;
                    run
                }
                None => run_benchmark(&entries, &http, &config, &options)?,
            }
        }
    };
    let mut out = open_output(output)?;
    write_records(&mut out, &run.records)?;
    out.flush()?;
    write_summary(&run.summary, summary)?;
    Ok(0)
}

fn cmd_make_replay(dataset: &DatasetArgs, prompt: &PromptArgs, predictions: &Path, output: Option<&Path>) -> CliResult {
    let config = prompt.to_config()?;
    let entries = load_dataset(dataset)?;
    let preds = read_predictions(predictions)?;
    let missing: Vec<&str> = entries
        .iter()
        .filter(|e| !preds.contains_key(&e.id))
        .map(|e| e.id.as_str())
        .collect();
    if !missing.is_empty() {
        eprintln!(
            "no prediction for {} entries (first: {}); their batches are left out",
            missing.len(),
            missing[0]
        );
    }
    let records = make_replay(&entries, &preds, &config)?;
    let mut out = open_output(output)?;
    write_replay(&mut out, &records)?;
    out.flush()?;
    Ok(0)
}

pub fn run(cli: Cli) -> CliResult {
    match &cli.command {
        Command::Validate { io, profile, hsb, gate } => cmd_validate(io, (*profile).into(), *hsb, *gate),
        Command::Normalize { io, hsb } => cmd_normalize(io, *hsb),
        Command::Hsb { direction, text, io } => cmd_hsb(*direction, text, io),
        Command::CheckLemma { io, hsb } => cmd_check_lemma(io, *hsb),
        Command::Stats { dataset, output } => cmd_stats(dataset, output.as_deref()),
        Command::Evaluate {
            dataset,
            predictions,
            output,
            summary,
        } => cmd_evaluate(dataset, predictions, output.as_deref(), summary.as_deref()),
        Command::Analyze { io, key, bins } => cmd_analyze(io, *key, bins),
        Command::Bench {
            dataset,
            prompt,
            replay,
            endpoint,
            model,
            max_in_flight,
            record,
            output,
            summary,
        } => cmd_bench(
            dataset,
            prompt,
            replay.as_deref(),
            endpoint,
            model,
            *max_in_flight,
            record.as_deref(),
            output.as_deref(),
            summary.as_deref(),
        ),
        Command::MakeReplay {
            dataset,
            prompt,
            predictions,
            output,
        } => cmd_make_replay(dataset, prompt, predictions, output.as_deref()),
    }
}

/// Parse arguments and run. Exit codes: 0 success, 1 validation findings in
/// gate mode, 2 usage or runtime error.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
