//! Acceptance suite. Prints one line per criterion and exits non-zero on any failure.
//!
//! Criteria that need the released dataset read it from `ARDIAC_DATASET`
//! (column overrides in `ARDIAC_DATASET_COLUMNS`); without it they print BLOCKED.
//! The live benchmark check also needs `MODEL_API_KEY` and prints SKIP otherwise.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ardiac::bench::client::{HttpClient, HttpConfig, ReplayClient};
use ardiac::bench::prompt::PromptConfig;
use ardiac::bench::run::{run_benchmark, write_records, RunOptions};
use ardiac::dataset::{load_entries, summarize, ColumnMap, Entry, LoadOptions};
use ardiac::eval::analysis::{bin_analysis, BinKey, BinRow, BinScheme};
use ardiac::eval::freeman::{class_similarity, FreemanTable};
use ardiac::eval::metrics::{edit_distance, exact_match, ErrorClass};
use ardiac::eval::record::{Observation, Scorer};
use ardiac::eval::ErrorTaxonomy;
use ardiac::{
    check_integrity, from_hsb, normalize, parse_arabic, to_hsb, validate, Normalizer, RuleCode, ValidationProfile,
};
use rand::seq::SliceRandom;

const ACCURACY_TOL: f64 = 0.0005;
const CORRELATION_TOL: f64 = 0.01;
const FREEMAN_TOL: f64 = 0.05;
const LIVE_TOL: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Blocked,
    Skip,
}

struct Report {
    lines: Vec<(String, Status, String)>,
}

impl Report {
    fn record(&mut self, id: &str, status: Status, detail: impl Into<String>) {
        let detail = detail.into();
        let tag = match status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Blocked => "BLOCKED",
            Status::Skip => "SKIP",
        };
        println!("{tag:<8}{id:<5}{detail}");
        self.lines.push((id.to_string(), status, detail));
    }

    fn check(&mut self, id: &str, ok: bool, detail: impl Into<String>) {
        self.record(id, if ok { Status::Pass } else { Status::Fail }, detail);
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Non-comment data rows of a fixture TSV, header skipped.
fn fixture_rows(name: &str) -> Vec<Vec<String>> {
    fs::read_to_string(fixture(name))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .skip(1)
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

fn dataset_from_env() -> Option<Result<Vec<Entry>, String>> {
    let path = std::env::var_os("ARDIAC_DATASET")?;
    let columns = match std::env::var("ARDIAC_DATASET_COLUMNS") {
        Ok(spec) => match ColumnMap::default().with_overrides(&spec) {
            Ok(c) => c,
            Err(e) => return Some(Err(e.to_string())),
        },
        Err(_) => ColumnMap::default(),
    };
    let options = LoadOptions {
        columns,
        check_integrity: false,
    };
    Some(load_entries(PathBuf::from(path), &options).map_err(|e| e.to_string()))
}

fn criterion_1(r: &mut Report) {
    let cases = [("sAnšiyz", "saAn.šiyz"), ("karamu", "karam"), ("ςaDu~wm", "ςaD~uwm")];
    let start = Instant::now();
    let got: Vec<String> = cases
        .iter()
        .map(|(raw, _)| to_hsb(&normalize(&from_hsb(raw).unwrap()).word).into_string())
        .collect();
    let elapsed = start.elapsed();
    let exact = cases
        .iter()
        .zip(&got)
        .filter(|((_, want), g)| *want == g.as_str())
        .count();
    r.check(
        "1",
        exact == 3 && elapsed < Duration::from_secs(1),
        format!(
            "malformed-lemma repair {exact}/3 exact in {elapsed:?} (limit 1 s): {}",
            got.join(", ")
        ),
    );
}

/// Unique gold lemmas of the lemmatization, spelling-variant and error-example tables.
const GOLD_FORMS: [&str; 28] = [
    "سِتّ",
    "إِلْوَاس",
    "عَجَم",
    "غَظَاة",
    "فِنِزْوِيلِيّ",
    "جِيبُوتِيّ",
    "بْلَاسْتِك",
    "بِلَاسْتِك",
    "بْلَاسْتِيك",
    "بِلَاسْتِيك",
    "بَلَاسْتِيك",
    "اِبْلَاسْتِيك",
    "عَمُود",
    "أَفْرَامُوفُو",
    "هَاغِن",
    "إِشْتِهَارْد",
    "بْلَاجِيفِيتْش",
    "دِسُوق",
    "رِيبْلَاي",
    "رِيكْسِينْغِين",
    "جُونْدْرِيزِيك",
    "مِيشِيغَان",
    "تِسِيخَانُوف",
    "أَرْدِينَة",
    "إِيغِيل",
    "كُرَامَة",
    "إِيكُومِيدْيَا",
    "بَارَّافْرَانْكَا",
];

fn criterion_2(r: &mut Report) {
    let flagged: Vec<&str> = GOLD_FORMS
        .iter()
        .filter(|f| !validate(&parse_arabic(f).unwrap(), ValidationProfile::Lemma).is_empty())
        .copied()
        .collect();
    let invalid = [
        ("sAnšiyz", vec![RuleCode::R2, RuleCode::R4]),
        ("karamu", vec![RuleCode::R3]),
        ("ςaDu~wm", vec![RuleCode::R1]),
    ];
    let mut misses = Vec::new();
    for (hsb, codes) in &invalid {
        let found: Vec<RuleCode> = validate(&from_hsb(hsb).unwrap(), ValidationProfile::Lemma)
            .into_iter()
            .map(|v| v.code)
            .collect();
        if found.is_empty() || codes.iter().any(|c| !found.contains(c)) {
            misses.push(format!("{hsb}: {found:?}"));
        }
    }
    r.check(
        "2",
        flagged.is_empty() && misses.is_empty(),
        format!(
            "{} gold lemmas, {} flagged {:?}; malformed forms with expected codes {}/3 {}",
            GOLD_FORMS.len(),
            flagged.len(),
            flagged,
            3 - misses.len(),
            misses.join("; ")
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let rows = [
        ("الست", "سِتّ", "DET → φ"),
        ("الواس", "إِلْوَاس", "Bare Alif → Alif Hamza"),
        ("العجم", "عَجَم", "DET → φ"),
        ("الغظاة", "غَظَاة", "DET → φ"),
        ("فنزويليون", "فِنِزْوِيلِيّ", "3MP → φ"),
        ("الجيبوتيون", "جِيبُوتِيّ", "DET+3MP → φ"),
    ];
    let mut wrong = Vec::new();
    for (input, lemma, want) in rows {
        let got = check_integrity(input, &parse_arabic(lemma).unwrap()).label();
        if got != want {
            wrong.push(format!("{input}: {got}"));
        }
    }
    r.check(
        "3",
        wrong.is_empty(),
        format!("transformation labels {}/6 exact {}", 6 - wrong.len(), wrong.join("; ")),
    );
}

fn criterion_4(r: &mut Report) {
    let expected = [
        "exact-match",
        "exact-match",
        "exact-match",
        "diac-only",
        "diac-only",
        "diac-only",
        "awy",
        "awy",
        "awy",
        "letter-sub(j↔γ)",
        "letter-sub(x↔h)",
        "letter-sub(ħ↔h)",
        "multiple",
        "multiple",
        "multiple",
        "multiple",
    ];
    let predictions: HashMap<String, String> = fixture_rows("error_examples_predictions.tsv")
        .into_iter()
        .map(|row| (row[0].clone(), row[1].clone()))
        .collect();
    let entries = load_entries(fixture("error_examples.tsv"), &LoadOptions::default()).unwrap();
    let taxonomy = ErrorTaxonomy::default();
    let scorer = Scorer::new(Normalizer::bundled(), &taxonomy);
    let mut agree = 0;
    let mut matches = 0;
    for (e, want) in entries.iter().zip(expected) {
        let rec = scorer.score(&e.id, &predictions[&e.id], e.gold_lemma.as_ref().unwrap(), None, 0);
        let class = rec.error_class().map(|c| c.to_string()).unwrap_or_default();
        let parsed: Option<ErrorClass> = want.parse().ok();
        if class == want && rec.error_class() == parsed {
            agree += 1;
        }
        matches += usize::from(rec.exact);
    }
    let accuracy = matches as f64 / entries.len() as f64;
    r.check(
        "4",
        agree == 16 && entries.len() == 16 && matches == 3 && accuracy == 0.1875,
        format!(
            "{agree}/16 classes agree; accuracy {matches}/16 = {:.2}% (tolerance 0)",
            accuracy * 100.0
        ),
    );
}

fn criterion_5(r: &mut Report) {
    let forms: Vec<String> = fs::read_to_string(fixture("roundtrip_forms.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_string)
        .collect();
    let mut broken = Vec::new();
    for f in &forms {
        let back = parse_arabic(f)
            .ok()
            .and_then(|w| from_hsb(to_hsb(&w).as_str()).ok())
            .map(|w| w.render());
        if back.as_deref() != Some(f.as_str()) {
            broken.push(f.clone());
        }
    }
    r.check(
        "5",
        broken.is_empty() && forms.len() >= 60,
        format!(
            "round trip identity on {}/{} forms {}",
            forms.len() - broken.len(),
            forms.len(),
            broken.join(" ")
        ),
    );
}

fn oracle_distance(a: &[char], b: &[char]) -> usize {
    // Full-matrix Wagner-Fischer, kept separate from the library's row-based version.
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn criterion_6(r: &mut Report) {
    let mut rng = common::seeded(6);
    let words: Vec<_> = (0..1000)
        .map(|_| (common::random_word(&mut rng, 8), common::random_word(&mut rng, 8)))
        .collect();
    let mut mismatches = 0;
    let mut axiom_failures = 0;
    for (i, (a, b)) in words.iter().enumerate() {
        let ca: Vec<char> = a.codepoints().collect();
        let cb: Vec<char> = b.codepoints().collect();
        let d = edit_distance(a, b);
        mismatches += usize::from(d != oracle_distance(&ca, &cb));
        let c = &words[(i + 1) % words.len()].0;
        let ok = d == edit_distance(b, a)
            && edit_distance(a, a) == 0
            && (d == 0) == exact_match(a, b)
            && edit_distance(a, c) <= d + edit_distance(b, c);
        axiom_failures += usize::from(!ok);
    }
    r.check(
        "6",
        mismatches == 0 && axiom_failures == 0,
        format!("1000 pairs (len <= 8): {mismatches} oracle mismatches, {axiom_failures} metric axiom violations"),
    );
}

fn criterion_7(r: &mut Report) {
    match dataset_from_env() {
        None => r.record(
            "7a",
            Status::Blocked,
            "released dataset not available; set ARDIAC_DATASET to run",
        ),
        Some(Err(e)) => r.check("7a", false, format!("could not load dataset: {e}")),
        Some(Ok(entries)) => match summarize(&entries, FreemanTable::bundled()) {
            Ok(s) => r.check(
                "7a",
                s.unique_arabic == 3000 && s.pairs == 3362 && format!("{:.2}", s.glosses_per_entry) == "1.12",
                format!(
                    "unique {} (want 3000), pairs {} (want 3362), glosses/entry {:.2} (want 1.12)",
                    s.unique_arabic, s.pairs, s.glosses_per_entry
                ),
            ),
            Err(e) => r.check("7a", false, e.to_string()),
        },
    }
    let entries = load_entries(fixture("synthetic.tsv"), &LoadOptions::default()).unwrap();
    r.check(
        "7b",
        entries.len() == 7,
        format!(
            "5-row file with one triple-gloss row splits into {} entries (want 7)",
            entries.len()
        ),
    );
}

fn criterion_8(r: &mut Report) {
    let table = FreemanTable::bundled();
    match dataset_from_env() {
        None => r.record(
            "8a",
            Status::Blocked,
            "released dataset not available; set ARDIAC_DATASET to run",
        ),
        Some(Err(e)) => r.check("8a", false, format!("could not load dataset: {e}")),
        Some(Ok(entries)) => match summarize(&entries, table) {
            Ok(s) => {
                let mean = s.freeman_mean.unwrap_or(f64::NAN);
                r.check(
                    "8a",
                    (mean - 0.91).abs() <= FREEMAN_TOL,
                    format!(
                        "mean Freeman {mean:.3} over {} pairs (want 0.91 ± {FREEMAN_TOL})",
                        s.freeman_scored
                    ),
                )
            }
            Err(e) => r.check("8a", false, e.to_string()),
        },
    }
    let mut rng = common::seeded(8);
    let mut violations = 0;
    for _ in 0..1000 {
        let w = common::random_word(&mut rng, 8);
        let gloss = common::random_gloss(&mut rng, 12);
        let s = table.similarity(&w.skeleton(), &gloss).unwrap();
        let x = table.arabic_classes(&w.skeleton());
        let y = table.latin_classes(&gloss).unwrap();
        let ok = (0.0..=1.0).contains(&s)
            && class_similarity(&x, &y) == class_similarity(&y, &x)
            && class_similarity(&x, &x) == 1.0
            && class_similarity(&y, &y) == 1.0;
        violations += usize::from(!ok);
    }
    r.check(
        "8b",
        violations == 0,
        format!("1000 pairs: {violations} bound, symmetry or identity violations"),
    );
}

/// Observations reproducing one bin's published aggregates.
fn bin_members(
    n: usize,
    matches: usize,
    distance_sum: usize,
    frequency: u64,
    freeman: Option<f64>,
) -> Vec<Observation> {
    let misses = n - matches;
    (0..n)
        .map(|i| {
            let exact = i < matches;
            let distance = if exact || misses == 0 {
                0
            } else {
                let k = i - matches;
                distance_sum / misses + usize::from(k < distance_sum % misses)
            };
            Observation {
                exact,
                distance,
                frequency,
                freeman,
            }
        })
        .collect()
}

fn criterion_9(r: &mut Report) {
    let mut obs = Vec::new();
    let mut printed_distance = Vec::new();
    for row in fixture_rows("freeman_bins.tsv") {
        let upper: f64 = row[0].parse().unwrap();
        let n: usize = row[1].parse().unwrap();
        let matches: usize = row[3].parse().unwrap();
        printed_distance.push(row[4].parse::<f64>().unwrap());
        obs.extend(bin_members(
            n,
            matches,
            row[5].parse().unwrap(),
            row[2].parse().unwrap(),
            Some(upper - 0.05),
        ));
    }
    let a = bin_analysis(&obs, BinKey::Freeman, &BinScheme::deciles()).unwrap();
    let low = BinRow::merge("10-50%", &a.rows[..5]).unwrap();
    let mid = BinRow::merge("10-90%", &a.rows[..9]).unwrap();
    let high = BinRow::merge("60-100%", &a.rows[5..]).unwrap();
    let recomposed: f64 = a
        .rows
        .iter()
        .map(|row| row.accuracy * row.instances as f64)
        .sum::<f64>()
        / a.total.instances as f64;
    let distances_ok = a
        .rows
        .iter()
        .zip(&printed_distance)
        .all(|(row, d)| format!("{:.2}", row.avg_distance) == format!("{d:.2}"));
    let ok = a.rows.len() == 10
        && low.instances == 89
        && (low.accuracy - 0.865).abs() < ACCURACY_TOL
        && mid.instances == 1182
        && (mid.accuracy - 0.706).abs() < ACCURACY_TOL
        && high.instances == 3273
        && (high.accuracy - 0.726).abs() < ACCURACY_TOL
        && a.total.instances == 3362
        && a.total.matches == 2454
        && (recomposed - a.total.accuracy).abs() <= f64::EPSILON
        && distances_ok;
    r.check(
        "9",
        ok,
        format!(
            "10-50%: {} / {:.1}%; 10-90%: {} / {:.1}%; 60-100%: {} / {:.1}%; All: {} / {:.2}%; recomposition error {:.1e}",
            low.instances,
            low.accuracy * 100.0,
            mid.instances,
            mid.accuracy * 100.0,
            high.instances,
            high.accuracy * 100.0,
            a.total.instances,
            a.total.accuracy * 100.0,
            (recomposed - a.total.accuracy).abs()
        ),
    );

    let c = a.correlations;
    let close = |got: Option<f64>, want: f64| got.is_some_and(|g| (g - want).abs() <= CORRELATION_TOL);
    let mut qobs = Vec::new();
    let mut edges = Vec::new();
    for row in fixture_rows("frequency_quartiles.tsv") {
        let freq: u64 = row[2].parse().unwrap();
        edges.push(freq as f64);
        qobs.extend(bin_members(
            row[1].parse().unwrap(),
            row[3].parse().unwrap(),
            0,
            freq,
            row[4].parse().ok(),
        ));
    }
    edges.pop();
    let q = bin_analysis(&qobs, BinKey::Frequency, &BinScheme::Edges(edges)).unwrap();
    let fa = q.correlations.frequency_accuracy;
    r.check(
        "9c",
        close(c.accuracy_distance, -0.95) && close(c.frequency_freeman, -0.69) && close(c.freeman_accuracy, -0.70) && close(fa, 0.68),
        format!(
            "bin-level correlations accuracy/distance {:.3} (-0.95), frequency/freeman {:.3} (-0.69), freeman/accuracy {:.3} (-0.70), quartile frequency/accuracy {:.3} (0.68); tolerance {CORRELATION_TOL}",
            c.accuracy_distance.unwrap_or(f64::NAN),
            c.frequency_freeman.unwrap_or(f64::NAN),
            c.freeman_accuracy.unwrap_or(f64::NAN),
            fa.unwrap_or(f64::NAN)
        ),
    );
}

fn results_bytes(entries: &[Entry], client: &ReplayClient, config: &PromptConfig) -> (Vec<u8>, f64, f64) {
    let run = run_benchmark(entries, client, config, &RunOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_records(&mut buf, &run.records).unwrap();
    buf.extend(run.summary.to_json().into_bytes());
    (buf, run.summary.accuracy, run.summary.mean_distance)
}

fn criterion_10(r: &mut Report) {
    let entries = load_entries(fixture("error_examples.tsv"), &LoadOptions::default()).unwrap();
    let client = ReplayClient::load(fixture("error_examples_replay.jsonl")).unwrap();
    let config = PromptConfig::preset("few_gloss").unwrap();
    let (first, accuracy, distance) = results_bytes(&entries, &client, &config);
    let (second, _, _) = results_bytes(&entries, &client, &config);
    r.check(
        "10a",
        first == second,
        format!("two replay runs byte-identical ({} bytes)", first.len()),
    );
    r.check(
        "10b",
        accuracy == 0.1875 && distance == 1.1875,
        format!("recorded fixture accuracy {accuracy} (pinned 0.1875), mean distance {distance} (pinned 1.1875)"),
    );
    criterion_10c(r);
}

fn criterion_10c(r: &mut Report) {
    let Some(dataset) = dataset_from_env() else {
        r.record(
            "10c",
            Status::Blocked,
            "live check needs the released dataset (ARDIAC_DATASET) and MODEL_API_KEY",
        );
        return;
    };
    let client = match HttpClient::from_env(HttpConfig::default()) {
        Ok(c) => c,
        Err(_) => {
            r.record("10c", Status::Skip, "MODEL_API_KEY not set; live benchmark not run");
            return;
        }
    };
    let mut entries = match dataset {
        Ok(e) => e,
        Err(e) => return r.check("10c", false, format!("could not load dataset: {e}")),
    };
    entries.shuffle(&mut common::seeded(10));
    entries.truncate(100);
    let start = Instant::now();
    let mut acc = BTreeMap::new();
    for name in [
        "zero_arabic",
        "one_arabic",
        "few_arabic",
        "zero_gloss",
        "one_gloss",
        "few_gloss",
    ] {
        let config = PromptConfig::preset(name).unwrap();
        match run_benchmark(&entries, &client, &config, &RunOptions::default()) {
            Ok(run) => {
                acc.insert(name, run.summary.accuracy);
            }
            Err(e) => return r.check("10c", false, format!("{name}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let ordered = ["arabic", "gloss"].iter().all(|f| {
        acc[format!("few_{f}").as_str()] > acc[format!("one_{f}").as_str()]
            && acc[format!("one_{f}").as_str()] > acc[format!("zero_{f}").as_str()]
    }) && ["zero", "one", "few"]
        .iter()
        .all(|s| acc[format!("{s}_gloss").as_str()] > acc[format!("{s}_arabic").as_str()]);
    r.check(
        "10c",
        (acc["few_gloss"] - 0.73).abs() <= LIVE_TOL && ordered && elapsed < Duration::from_secs(600),
        format!("100-entry live slice {acc:?}; partial order holds: {ordered}; {elapsed:?}"),
    );
}

fn criterion_11(r: &mut Report) {
    let words = common::defective_words(11);
    let mut not_idempotent = 0;
    let mut residual = 0;
    for (_, defective) in &words {
        let once = normalize(&from_hsb(defective).unwrap());
        let twice = normalize(&once.word);
        not_idempotent += usize::from(twice.word != once.word || !twice.trace.is_empty());
        residual += validate(&once.word, ValidationProfile::Lemma)
            .iter()
            .filter(|v| common::FIXABLE.contains(&v.code))
            .count();
    }
    r.check(
        "11",
        words.len() == 500 && not_idempotent == 0 && residual == 0,
        format!(
            "{} defective words: {not_idempotent} not idempotent, {residual} residual R1/R3/R4/R5/R6/R7 violations",
            words.len()
        ),
    );
}

fn main() {
    let mut report = Report { lines: Vec::new() };
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    criterion_5(&mut report);
    criterion_6(&mut report);
    criterion_7(&mut report);
    criterion_8(&mut report);
    criterion_9(&mut report);
    criterion_10(&mut report);
    criterion_11(&mut report);
    let failed: Vec<&str> = report
        .lines
        .iter()
        .filter(|(_, s, _)| *s == Status::Fail)
        .map(|(id, _, _)| id.as_str())
        .collect();
    let count = |st: Status| report.lines.iter().filter(|(_, s, _)| *s == st).count();
    println!(
        "acceptance: {} passed, {} failed, {} blocked, {} skipped",
        count(Status::Pass),
        failed.len(),
        count(Status::Blocked),
        count(Status::Skip)
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
