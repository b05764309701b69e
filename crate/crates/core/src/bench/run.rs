//! Running a configuration over a dataset and summarizing the results.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::Serialize;
use thiserror::Error;

use crate::bench::client::{request_digest, ModelClient, ReplayRecord};
use crate::bench::prompt::{build_prompt, PromptConfig, PromptError};
use crate::bench::response::parse_response;
use crate::dataset::Entry;
use crate::eval::analysis::{diacritic_confusion, MarkConfusion};
use crate::eval::freeman::FreemanTable;
use crate::eval::metrics::ErrorTaxonomy;
use crate::eval::record::{EvalRecord, Observation, Scorer};
use crate::normalizer::{Normalizer, RepairStep};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("entry {0} has no gold lemma")]
    MissingGold(String),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("results line {line}: {message}")]
    BadResults { line: u64, message: String },
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Upper bound on concurrent requests.
    pub max_in_flight: usize,
    pub taxonomy: ErrorTaxonomy,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_in_flight: 4,
            taxonomy: ErrorTaxonomy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub config: String,
    pub shots: String,
    pub input_format: String,
    pub batch_size: usize,
    /// Set when more than one entry goes into each request.
    pub batched: bool,
    pub total: usize,
    pub scored: usize,
    pub failed: usize,
    pub matches: usize,
    pub accuracy: f64,
    /// Mean over all records; a failed record counts as an empty prediction.
    pub mean_distance: f64,
    pub error_classes: BTreeMap<String, usize>,
    pub diacritic_confusion: Vec<MarkConfusion>,
    pub repair_steps: BTreeMap<String, usize>,
    pub repaired_records: usize,
    /// Exact matches that needed no repair.
    pub exact_as_generated: usize,
    /// Exact matches reached only after repair.
    pub exact_after_repair: usize,
}

impl BenchSummary {
    pub fn from_records(config: &PromptConfig, records: &[EvalRecord]) -> BenchSummary {
        let total = records.len();
        let failed = records.iter().filter(|r| r.is_failed()).count();
        let matches = records.iter().filter(|r| r.exact).count();
        let mut error_classes = BTreeMap::new();
        let mut repair_steps: BTreeMap<String, usize> = RepairStep::ALL.iter().map(|s| (s.to_string(), 0)).collect();
        let (mut repaired, mut exact_as_generated, mut exact_after_repair) = (0, 0, 0);
        for r in records {
            let key = match r.error_class() {
                Some(c) => c.kind().to_string(),
                None => "failed".to_string(),
            };
            *error_classes.entry(key).or_insert(0) += 1;
            if let Some(trace) = r.trace() {
                for s in &trace.steps {
                    *repair_steps.entry(s.step.to_string()).or_insert(0) += 1;
                }
                if !trace.is_empty() {
                    repaired += 1;
                }
                if r.exact {
                    if trace.is_empty() {
                        exact_as_generated += 1;
                    } else {
                        exact_after_repair += 1;
                    }
                }
            }
        }
        let mean = |v: f64| if total == 0 { 0.0 } else { v / total as f64 };
        BenchSummary {
            config: config.label(),
            shots: config.shots.to_string(),
            input_format: config.input_format.to_string(),
            batch_size: config.batch_size,
            batched: config.batch_size > 1,
            total,
            scored: total - failed,
            failed,
            matches,
            accuracy: mean(matches as f64),
            mean_distance: mean(records.iter().map(|r| r.distance as f64).sum()),
            error_classes,
            diacritic_confusion: diacritic_confusion(records),
            repair_steps,
            repaired_records: repaired,
            exact_as_generated,
            exact_after_repair,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub records: Vec<EvalRecord>,
    pub summary: BenchSummary,
}

fn freeman_for(entry: &Entry) -> Option<f64> {
    FreemanTable::bundled()
        .similarity(&entry.arabic_input, &entry.gloss)
        .ok()
}

fn score_batch(
    client: &dyn ModelClient,
    config: &PromptConfig,
    scorer: &Scorer<'_>,
    batch: &[Entry],
) -> Vec<EvalRecord> {
    let gold = |e: &Entry| e.gold_lemma.clone().expect("checked before the run");
    let fail_all = |raw: &str, reason: String| -> Vec<EvalRecord> {
        batch
            .iter()
            .map(|e| scorer.failed(&e.id, raw, &gold(e), reason.clone(), freeman_for(e), e.frequency))
            .collect()
    };
    let prompt = match build_prompt(config, batch) {
        Ok(p) => p,
        Err(e) => return fail_all("", e.to_string()),
    };
    let text = match client.complete(&prompt.system, &prompt.user) {
        Ok(t) => t,
        Err(e) => return fail_all("", e.to_string()),
    };
    match parse_response(&text, batch.len()) {
        Ok(lines) => batch
            .iter()
            .zip(lines)
            .map(|(e, line)| scorer.score(&e.id, &line, &gold(e), freeman_for(e), e.frequency))
            .collect(),
        Err(err) => fail_all(&text, err.to_string()),
    }
}

/// Score every entry. Transport and parse failures become failed records;
/// only an unusable configuration aborts the run. Records keep input order.
pub fn run_benchmark(
    entries: &[Entry],
    client: &dyn ModelClient,
    config: &PromptConfig,
    options: &RunOptions,
) -> Result<BenchRun, BenchError> {
    config.check()?;
    if let Some(e) = entries.iter().find(|e| e.gold_lemma.is_none()) {
        return Err(BenchError::MissingGold(e.id.clone()));
    }
    let normalizer = Normalizer::bundled();
    let scorer = Scorer::new(normalizer, &options.taxonomy);
    let batches: Vec<&[Entry]> = entries.chunks(config.batch_size).collect();
    let results: Mutex<Vec<Option<Vec<EvalRecord>>>> = Mutex::new(vec![None; batches.len()]);
    let next = AtomicUsize::new(0);
    let workers = options.max_in_flight.max(1).min(batches.len().max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(batch) = batches.get(i) else { break };
                let recs = score_batch(client, config, &scorer, batch);
                results.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(recs);
            });
        }
    });
    let records: Vec<EvalRecord> = results
        .into_inner()
        .unwrap_or_else(|e| e.into_inner())
        .into_iter()
        .flat_map(|r| r.expect("every batch is processed"))
        .collect();
    let summary = BenchSummary::from_records(config, &records);
    Ok(BenchRun { records, summary })
}

/// Replay records answering each batch with the given predictions, keyed by entry id.
pub fn make_replay(
    entries: &[Entry],
    predictions: &HashMap<String, String>,
    config: &PromptConfig,
) -> Result<Vec<ReplayRecord>, BenchError> {
    let mut out = Vec::new();
    for batch in entries.chunks(config.batch_size.max(1)) {
        let prompt = build_prompt(config, batch)?;
        let lines: Option<Vec<&str>> = batch
            .iter()
            .map(|e| predictions.get(&e.id).map(String::as_str))
            .collect();
        let Some(lines) = lines else { continue };
        out.push(ReplayRecord {
            digest: request_digest(&prompt.system, &prompt.user),
            response: lines.join("\n") + "\n",
        });
    }
    Ok(out)
}

pub const RESULTS_HEADER: [&str; 11] = [
    "id",
    "raw",
    "prediction",
    "reference",
    "exact",
    "distance",
    "error_class",
    "trace",
    "freeman",
    "frequency",
    "status",
];

/// Backslash escapes for tab, newline, carriage return and backslash.
pub fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

/// One TSV line per record, with a header.
pub fn write_records<W: Write>(mut out: W, records: &[EvalRecord]) -> std::io::Result<()> {
    writeln!(out, "{}", RESULTS_HEADER.join("\t"))?;
    for r in records {
        let (prediction, class, trace, status) = match &r.outcome {
            crate::eval::record::Outcome::Scored {
                prediction,
                error_class,
                trace,
                ..
            } => (
                prediction.render(),
                error_class.to_string(),
                trace.to_string(),
                "ok".to_string(),
            ),
            crate::eval::record::Outcome::Failed { reason } => (
                String::new(),
                "failed".to_string(),
                String::new(),
                format!("failed: {}", escape_field(reason)),
            ),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            escape_field(&r.id),
            escape_field(&r.raw),
            prediction,
            r.reference.render(),
            u8::from(r.exact),
            r.distance,
            class,
            trace,
            r.freeman.map_or_else(String::new, |f| format!("{f:.6}")),
            r.frequency,
            status,
        )?;
    }
    Ok(())
}

/// Read the columns bin analysis needs from a results file.
pub fn read_observations<R: Read>(reader: R) -> Result<Vec<Observation>, BenchError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| BenchError::BadResults {
                line: 1,
                message: format!("missing column {name}"),
            })
    };
    let (exact, distance, frequency) = (col("exact")?, col("distance")?, col("frequency")?);
    let freeman = headers.iter().position(|h| h == "freeman");
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |what: &str| BenchError::BadResults {
            line,
            message: format!("bad {what}"),
        };
        let get = |i: usize| record.get(i).unwrap_or("").trim();
        out.push(Observation {
            exact: match get(exact) {
                "1" | "true" => true,
                "0" | "false" => false,
                _ => return Err(bad("exact")),
            },
            distance: get(distance).parse().map_err(|_| bad("distance"))?,
            frequency: get(frequency).parse().map_err(|_| bad("frequency"))?,
            freeman: match freeman.map(get) {
                None | Some("") => None,
                Some(v) => Some(v.parse().map_err(|_| bad("freeman"))?),
            },
        });
    }
    Ok(out)
}
