//! Proper-noun dataset: loading, gloss splitting, frequencies and statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::freeman::FreemanTable;
use crate::lemma::check_integrity;
use crate::script::{is_diacritic, parse_arabic, DiacritizedWord, ParseError};

pub const GLOSS_SEPARATOR: char = ';';

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("line {line}: arabic_input contains diacritics")]
    DiacriticInInput { line: u64 },
    #[error("line {line}: empty gloss")]
    EmptyGloss { line: u64 },
    #[error("line {line}: gold lemma: {source}")]
    BadLemma { line: u64, source: ParseError },
    #[error("line {line}: {lemmas} gold lemmas for {glosses} glosses")]
    GoldCountMismatch { line: u64, lemmas: usize, glosses: usize },
    #[error("line {line}: gold lemma {lemma} is not reachable from {input}")]
    IntegrityViolation { line: u64, input: String, lemma: String },
    #[error("line {line}: bad frequency {value:?}")]
    BadFrequency { line: u64, value: String },
    #[error("line {line}: unknown entity class {value:?}")]
    BadEntityClass { line: u64, value: String },
    #[error("line {line}: malformed frequency row")]
    MalformedFrequencyRow { line: u64 },
    #[error("bad column mapping {0:?} (expected field=column)")]
    BadColumnMapping(String),
    #[error("no entries")]
    EmptyInput,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityClass {
    Location,
    Name,
    Organization,
    Unknown,
}

impl EntityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityClass::Location => "location",
            EntityClass::Name => "name",
            EntityClass::Organization => "organization",
            EntityClass::Unknown => "unknown",
        }
    }
}

impl fmt::Display for EntityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "location" | "loc" => Ok(EntityClass::Location),
            "name" | "person" | "per" => Ok(EntityClass::Name),
            "organization" | "organisation" | "org" => Ok(EntityClass::Organization),
            "unknown" | "" => Ok(EntityClass::Unknown),
            other => Err(format!("unknown entity class {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    /// Row id plus 1-based gloss ordinal, e.g. `17.2`.
    pub id: String,
    pub arabic_input: String,
    pub gloss: String,
    pub gold_lemma: Option<DiacritizedWord>,
    pub frequency: u64,
    /// A word may belong to several classes; `{Unknown}` when not given.
    pub entity_classes: BTreeSet<EntityClass>,
}

/// Header names for each logical field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub id: String,
    pub arabic_input: String,
    pub gloss: String,
    pub gold_lemma: String,
    pub frequency: String,
    pub entity_class: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            id: "id".into(),
            arabic_input: "arabic_input".into(),
            gloss: "gloss".into(),
            gold_lemma: "gold_lemma".into(),
            frequency: "frequency".into(),
            entity_class: "entity_class".into(),
        }
    }
}

impl ColumnMap {
    /// Apply overrides of the form `field=column`, comma-separated.
    pub fn with_overrides(mut self, spec: &str) -> Result<ColumnMap, DatasetError> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || DatasetError::BadColumnMapping(item.to_string());
            let (field, column) = item.split_once('=').ok_or_else(bad)?;
            let slot = match field.trim() {
                "id" => &mut self.id,
                "arabic_input" => &mut self.arabic_input,
                "gloss" => &mut self.gloss,
                "gold_lemma" => &mut self.gold_lemma,
                "frequency" => &mut self.frequency,
                "entity_class" => &mut self.entity_class,
                _ => return Err(bad()),
            };
            *slot = column.trim().to_string();
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub columns: ColumnMap,
    /// Reject gold lemmas that fail the spelling integrity check.
    pub check_integrity: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            columns: ColumnMap::default(),
            check_integrity: true,
        }
    }
}

fn tsv_reader<R: Read>(reader: R, has_headers: bool) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .comment(Some(b'#'))
        .has_headers(has_headers)
        .flexible(true)
        .from_reader(reader)
}

/// Split a gloss field on `;`, trimming each part.
pub fn split_glosses(field: &str) -> Vec<&str> {
    field.split(GLOSS_SEPARATOR).map(str::trim).collect()
}

pub fn load_entries(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Vec<Entry>, DatasetError> {
    read_entries(File::open(path)?, options)
}

pub fn read_entries<R: Read>(reader: R, options: &LoadOptions) -> Result<Vec<Entry>, DatasetError> {
    let mut rdr = tsv_reader(reader, true);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let require = |name: &str| find(name).ok_or_else(|| DatasetError::MissingColumn(name.to_string()));
    let cols = &options.columns;
    let arabic_col = require(&cols.arabic_input)?;
    let gloss_col = require(&cols.gloss)?;
    let id_col = find(&cols.id);
    let gold_col = find(&cols.gold_lemma);
    let freq_col = find(&cols.frequency);
    let class_col = find(&cols.entity_class);

    let mut entries = Vec::new();
    for (row_index, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: Option<usize>| i.and_then(|i| record.get(i)).map(str::trim).unwrap_or("");

        let arabic = field(Some(arabic_col)).to_string();
        if arabic.chars().any(is_diacritic) {
            return Err(DatasetError::DiacriticInInput { line });
        }
        let glosses = split_glosses(field(Some(gloss_col)));
        if glosses.iter().any(|g| g.is_empty()) {
            return Err(DatasetError::EmptyGloss { line });
        }
        let row_id = match field(id_col) {
            "" => (row_index + 1).to_string(),
            s => s.to_string(),
        };

        let gold_field = field(gold_col);
        let golds: Vec<Option<DiacritizedWord>> = if gold_field.is_empty() {
            vec![None; glosses.len()]
        } else {
            let parsed = gold_field
                .split(GLOSS_SEPARATOR)
                .map(|s| parse_arabic(s.trim()).map(Some))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|source| DatasetError::BadLemma { line, source })?;
            match parsed.len() {
                1 => vec![parsed[0].clone(); glosses.len()],
                n if n == glosses.len() => parsed,
                n => {
                    return Err(DatasetError::GoldCountMismatch {
                        line,
                        lemmas: n,
                        glosses: glosses.len(),
                    })
                }
            }
        };
        if options.check_integrity {
            for gold in golds.iter().flatten() {
                if !check_integrity(&arabic, gold).ok {
                    return Err(DatasetError::IntegrityViolation {
                        line,
                        input: arabic.clone(),
                        lemma: gold.render(),
                    });
                }
            }
        }

        let frequency = match field(freq_col) {
            "" => 0,
            s => s.parse().map_err(|_| DatasetError::BadFrequency {
                line,
                value: s.to_string(),
            })?,
        };
        let mut classes = field(class_col)
            .split(',')
            .map(|c| {
                c.parse::<EntityClass>().map_err(|_| DatasetError::BadEntityClass {
                    line,
                    value: c.trim().to_string(),
                })
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        if classes.len() > 1 {
            classes.remove(&EntityClass::Unknown);
        }

        for (k, (gloss, gold)) in glosses.iter().zip(golds).enumerate() {
            entries.push(Entry {
                id: format!("{row_id}.{}", k + 1),
                arabic_input: arabic.clone(),
                gloss: gloss.to_string(),
                gold_lemma: gold,
                frequency,
                entity_classes: classes.clone(),
            });
        }
    }
    Ok(entries)
}

/// Word to count lookup. On duplicate words the last row wins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    /// Words that appeared more than once, with the line of each repeat.
    pub duplicates: Vec<(String, u64)>,
}

impl FrequencyTable {
    pub fn load(path: impl AsRef<Path>) -> Result<FrequencyTable, DatasetError> {
        Self::read(File::open(path)?)
    }

    pub fn read<R: Read>(reader: R) -> Result<FrequencyTable, DatasetError> {
        let mut rdr = tsv_reader(reader, false);
        let mut table = FrequencyTable::default();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let (Some(word), Some(count), None) = (record.get(0), record.get(1), record.get(2)) else {
                return Err(DatasetError::MalformedFrequencyRow { line });
            };
            let (word, count) = (word.trim(), count.trim());
            if i == 0 && count.eq_ignore_ascii_case("count") {
                continue;
            }
            let count: u64 = count
                .parse()
                .map_err(|_| DatasetError::MalformedFrequencyRow { line })?;
            if word.is_empty() {
                return Err(DatasetError::MalformedFrequencyRow { line });
            }
            if table.counts.insert(word.to_string(), count).is_some() {
                log::warn!("frequency table line {line}: duplicate word {word}, keeping the later count");
                table.duplicates.push((word.to_string(), line));
            }
        }
        Ok(table)
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl FromIterator<(String, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        let mut t = FrequencyTable::default();
        for (w, c) in iter {
            if t.counts.insert(w.clone(), c).is_some() {
                t.duplicates.push((w, 0));
            }
        }
        t
    }
}

/// Set each entry's frequency by exact lookup of its Arabic input; absent words get 0.
pub fn attach_frequencies(entries: &mut [Entry], table: &FrequencyTable) {
    for e in entries {
        e.frequency = table.get(&e.arabic_input);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassShare {
    pub count: usize,
    /// Share of unique words. Shares can sum past 1 when words carry several classes.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub unique_arabic: usize,
    pub pairs: usize,
    pub glosses_per_entry: f64,
    pub frequency_mean: f64,
    pub frequency_median: f64,
    /// Mean over the pairs whose gloss has letters.
    pub freeman_mean: Option<f64>,
    pub freeman_scored: usize,
    pub class_distribution: BTreeMap<EntityClass, ClassShare>,
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Middle value; for an even count, the mean of the two middle values.
pub fn median(values: &mut [u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] as f64 + values[n / 2] as f64) / 2.0
    })
}

/// Counts are exact; averages are rounded to two decimals. Frequency and
/// Freeman statistics are over pairs; the class distribution is over unique words.
pub fn summarize(entries: &[Entry], freeman: &FreemanTable) -> Result<CorpusStats, DatasetError> {
    if entries.is_empty() {
        return Err(DatasetError::EmptyInput);
    }
    let mut word_classes: BTreeMap<&str, BTreeSet<EntityClass>> = BTreeMap::new();
    for e in entries {
        word_classes
            .entry(e.arabic_input.as_str())
            .or_default()
            .extend(e.entity_classes.iter().copied());
    }
    let unique = word_classes.len();
    let pairs = entries.len();

    let mut freqs: Vec<u64> = entries.iter().map(|e| e.frequency).collect();
    let frequency_mean = freqs.iter().map(|&f| f as f64).sum::<f64>() / pairs as f64;
    let frequency_median = median(&mut freqs).expect("non-empty");

    let scores: Vec<f64> = entries
        .iter()
        .filter_map(|e| freeman.similarity(&e.arabic_input, &e.gloss).ok())
        .collect();
    let freeman_mean = (!scores.is_empty()).then(|| round2(scores.iter().sum::<f64>() / scores.len() as f64));

    let mut class_distribution: BTreeMap<EntityClass, ClassShare> = BTreeMap::new();
    for classes in word_classes.values() {
        let classes: Vec<EntityClass> = if classes.len() > 1 {
            classes.iter().copied().filter(|&c| c != EntityClass::Unknown).collect()
        } else if classes.is_empty() {
            vec![EntityClass::Unknown]
        } else {
            classes.iter().copied().collect()
        };
        for c in classes {
            class_distribution
                .entry(c)
                .or_insert(ClassShare { count: 0, share: 0.0 })
                .count += 1;
        }
    }
    for s in class_distribution.values_mut() {
        s.share = round2(s.count as f64 / unique as f64);
    }

    Ok(CorpusStats {
        unique_arabic: unique,
        pairs,
        glosses_per_entry: round2(pairs as f64 / unique as f64),
        frequency_mean: round2(frequency_mean),
        frequency_median: round2(frequency_median),
        freeman_mean,
        freeman_scored: scores.len(),
        class_distribution,
    })
}

impl CorpusStats {
    /// `key<TAB>value` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "unique_arabic\t{}\npairs\t{}\nglosses_per_entry\t{:.2}\nfrequency_mean\t{:.2}\nfrequency_median\t{:.2}\n",
            self.unique_arabic, self.pairs, self.glosses_per_entry, self.frequency_mean, self.frequency_median
        );
        match self.freeman_mean {
            Some(m) => out.push_str(&format!("freeman_mean\t{m:.2}\n")),
            None => out.push_str("freeman_mean\tundefined\n"),
        }
        for (class, share) in &self.class_distribution {
            out.push_str(&format!("class_{class}\t{}\t{:.2}\n", share.count, share.share));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Vec<Entry>, DatasetError> {
        read_entries(text.as_bytes(), &LoadOptions::default())
    }

    #[test]
    fn splits_glosses() {
        let e = load("id\tarabic_input\tgloss\n7\tآنا\tA'ana; Ana; Anna\n").unwrap();
        let glosses: Vec<&str> = e.iter().map(|e| e.gloss.as_str()).collect();
        assert_eq!(glosses, ["A'ana", "Ana", "Anna"]);
        assert_eq!(e[2].id, "7.3");
        assert!(e
            .iter()
            .all(|e| e.entity_classes == BTreeSet::from([EntityClass::Unknown])));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            load("id\tarabic_input\tgloss\n1\tعَمان\tOman\n"),
            Err(DatasetError::DiacriticInInput { line: 2 })
        ));
        assert!(matches!(
            load("id\tarabic_input\tgloss\n1\tعمان\tOman;;x\n"),
            Err(DatasetError::EmptyGloss { .. })
        ));
        assert!(matches!(load("id\tgloss\n1\tOman\n"), Err(DatasetError::MissingColumn(c)) if c == "arabic_input"));
        assert!(matches!(
            load("arabic_input\tgloss\tgold_lemma\nلندن\tLondon\tبَرلِين\n"),
            Err(DatasetError::IntegrityViolation { .. })
        ));
    }

    #[test]
    fn lenient_integrity() {
        let opts = LoadOptions {
            check_integrity: false,
            ..LoadOptions::default()
        };
        let e = read_entries(
            "arabic_input\tgloss\tgold_lemma\nلندن\tLondon\tبَرلِين\n".as_bytes(),
            &opts,
        )
        .unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].id, "1.1");
    }

    #[test]
    fn aligned_gold_lemmas() {
        let text = "arabic_input\tgloss\tgold_lemma\nعمان\tOman; Amman\tعُمَان; عَمّان\n";
        let e = load(text).unwrap();
        assert_eq!(e[0].gold_lemma.as_ref().unwrap().render(), "عُمَان");
        assert_eq!(e[1].gold_lemma.as_ref().unwrap().render(), "عَمّان");
    }

    #[test]
    fn column_mapping() {
        let cols = ColumnMap::default()
            .with_overrides("arabic_input=word, gloss=english")
            .unwrap();
        let opts = LoadOptions {
            columns: cols,
            ..LoadOptions::default()
        };
        let e = read_entries("word\tenglish\nلندن\tLondon\n".as_bytes(), &opts).unwrap();
        assert_eq!(e[0].gloss, "London");
        assert!(ColumnMap::default().with_overrides("nope=x").is_err());
    }

    #[test]
    fn frequencies_last_wins() {
        let t = FrequencyTable::read("word\tcount\nلندن\t5\nعمان\t75\nلندن\t9\n".as_bytes()).unwrap();
        assert_eq!(t.get("لندن"), 9);
        assert_eq!(t.get("عمان"), 75);
        assert_eq!(t.get("باريس"), 0);
        assert_eq!(t.duplicates, vec![("لندن".to_string(), 4)]);
        assert!(matches!(
            FrequencyTable::read("لندن\tmany\n".as_bytes()),
            Err(DatasetError::MalformedFrequencyRow { line: 1 })
        ));
    }

    #[test]
    fn four_entry_stats() {
        let text =
            "arabic_input\tgloss\tfrequency\nلندن\tLondon\t0\nلندن\tLondres\t0\nعمان\tOman\t10\nعمان\tAmman\t30\n";
        let s = summarize(&load(text).unwrap(), FreemanTable::bundled()).unwrap();
        assert_eq!((s.unique_arabic, s.pairs), (2, 4));
        assert_eq!(s.frequency_mean, 10.0);
        assert_eq!(s.frequency_median, 5.0);
        assert_eq!(s.glosses_per_entry, 2.0);
    }

    #[test]
    fn class_distribution_counts_words() {
        let text = "arabic_input\tgloss\tentity_class\nلندن\tLondon\tlocation\nلندن\tLondres\tlocation\nعمان\tOman\tlocation,name\n";
        let s = summarize(&load(text).unwrap(), FreemanTable::bundled()).unwrap();
        assert_eq!(s.class_distribution[&EntityClass::Location].count, 2);
        assert_eq!(s.class_distribution[&EntityClass::Name].count, 1);
        assert_eq!(s.class_distribution[&EntityClass::Location].share, 1.0);
    }

    #[test]
    fn empty_summary() {
        assert!(matches!(
            summarize(&[], FreemanTable::bundled()),
            Err(DatasetError::EmptyInput)
        ));
    }

    #[test]
    fn median_convention() {
        assert_eq!(median(&mut [3, 1, 2]), Some(2.0));
        assert_eq!(median(&mut [0, 30, 0, 10]), Some(5.0));
        assert_eq!(median(&mut []), None);
    }
}
