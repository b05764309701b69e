//! Diacritic confusion and binned accuracy analyses.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::metrics::ErrorClass;
use crate::eval::record::{EvalRecord, Observation};
use crate::script::Mark;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkConfusion {
    pub mark: Mark,
    pub predicted: usize,
    pub reference: usize,
    /// `(predicted - reference) / reference`
    pub relative: f64,
}

/// Per-mark over- and under-prediction over the diac-only records. Marks
/// absent from every reference are left out.
pub fn diacritic_confusion(records: &[EvalRecord]) -> Vec<MarkConfusion> {
    let mut predicted = [0usize; Mark::ALL.len()];
    let mut reference = [0usize; Mark::ALL.len()];
    let count = |word: &crate::script::DiacritizedWord, into: &mut [usize; Mark::ALL.len()]| {
        for seg in word.segments() {
            for m in seg.marks.marks() {
                let i = Mark::ALL.iter().position(|x| x == m).expect("mark in ALL");
                into[i] += 1;
            }
        }
    };
    for r in records {
        if r.error_class() != Some(ErrorClass::DiacOnly) {
            continue;
        }
        if let Some(p) = r.prediction() {
            count(p, &mut predicted);
            count(&r.reference, &mut reference);
        }
    }
    Mark::ALL
        .iter()
        .enumerate()
        .filter(|&(i, _)| reference[i] > 0)
        .map(|(i, &mark)| MarkConfusion {
            mark,
            predicted: predicted[i],
            reference: reference[i],
            relative: (predicted[i] as f64 - reference[i] as f64) / reference[i] as f64,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinKey {
    Freeman,
    Frequency,
}

impl FromStr for BinKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "freeman" => Ok(BinKey::Freeman),
            "frequency" => Ok(BinKey::Frequency),
            _ => Err(format!("unknown bin key {s:?} (expected freeman or frequency)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BinScheme {
    /// Upper bin edges, inclusive. Bin k holds `edges[k-1] < v <= edges[k]`;
    /// values above the last edge go to an overflow bin.
    Edges(Vec<f64>),
    /// Value thresholds at the 25th, 50th and 75th percentiles; tied values
    /// stay in the same quartile.
    Quartiles,
}

impl BinScheme {
    /// Ten equal-width bins over [0, 1].
    pub fn deciles() -> BinScheme {
        BinScheme::Edges((1..=10).map(|k| k as f64 / 10.0).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("no records to analyse")]
    EmptyInput,
    #[error("bin edges must be non-empty, finite and strictly increasing")]
    BadEdges,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinRow {
    pub label: String,
    pub instances: usize,
    pub instance_share: f64,
    pub avg_frequency: f64,
    pub matches: usize,
    pub accuracy: f64,
    pub avg_distance: f64,
    pub avg_freeman: Option<f64>,
}

impl BinRow {
    fn from_members(label: String, members: &[&Observation], total: usize) -> BinRow {
        let n = members.len();
        let nf = n as f64;
        let matches = members.iter().filter(|o| o.exact).count();
        let freeman: Option<f64> = members.iter().map(|o| o.freeman).sum::<Option<f64>>().map(|s| s / nf);
        BinRow {
            label,
            instances: n,
            instance_share: nf / total as f64,
            avg_frequency: members.iter().map(|o| o.frequency as f64).sum::<f64>() / nf,
            matches,
            accuracy: matches as f64 / nf,
            avg_distance: members.iter().map(|o| o.distance as f64).sum::<f64>() / nf,
            avg_freeman: freeman,
        }
    }

    /// Combine rows into one, weighting averages by instance counts.
    pub fn merge(label: impl Into<String>, rows: &[BinRow]) -> Option<BinRow> {
        let n: usize = rows.iter().map(|r| r.instances).sum();
        if n == 0 {
            return None;
        }
        let nf = n as f64;
        let weighted = |f: &dyn Fn(&BinRow) -> f64| rows.iter().map(|r| f(r) * r.instances as f64).sum::<f64>() / nf;
        let matches = rows.iter().map(|r| r.matches).sum();
        let freeman = rows
            .iter()
            .map(|r| r.avg_freeman.map(|f| f * r.instances as f64))
            .sum::<Option<f64>>()
            .map(|s| s / nf);
        Some(BinRow {
            label: label.into(),
            instances: n,
            instance_share: rows.iter().map(|r| r.instance_share).sum(),
            avg_frequency: weighted(&|r| r.avg_frequency),
            matches,
            accuracy: matches as f64 / nf,
            avg_distance: weighted(&|r| r.avg_distance),
            avg_freeman: freeman,
        })
    }
}

/// Pearson correlations over bin aggregates. `None` when undefined.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Correlations {
    pub accuracy_distance: Option<f64>,
    pub frequency_freeman: Option<f64>,
    pub freeman_accuracy: Option<f64>,
    pub frequency_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinAnalysis {
    pub key: BinKey,
    /// Non-empty bins in ascending order.
    pub rows: Vec<BinRow>,
    pub total: BinRow,
    pub correlations: Correlations,
    /// Records without a value for the key.
    pub skipped: usize,
}

/// Pearson correlation; `None` with fewer than two points or zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn correlations(rows: &[BinRow]) -> Correlations {
    let col = |f: &dyn Fn(&BinRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let acc = col(&|r| r.accuracy);
    let dist = col(&|r| r.avg_distance);
    let freq = col(&|r| r.avg_frequency);
    let freeman: Option<Vec<f64>> = rows.iter().map(|r| r.avg_freeman).collect();
    Correlations {
        accuracy_distance: pearson(&acc, &dist),
        frequency_freeman: freeman.as_ref().and_then(|fm| pearson(&freq, fm)),
        freeman_accuracy: freeman.as_ref().and_then(|fm| pearson(fm, &acc)),
        frequency_accuracy: pearson(&freq, &acc),
    }
}

fn key_value(o: &Observation, key: BinKey) -> Option<f64> {
    match key {
        BinKey::Freeman => o.freeman,
        BinKey::Frequency => Some(o.frequency as f64),
    }
}

fn edge_label(key: BinKey, edge: f64) -> String {
    match key {
        BinKey::Freeman => format!("{}%", trim_float(edge * 100.0)),
        BinKey::Frequency => format!("<={}", trim_float(edge)),
    }
}

fn trim_float(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn bin_analysis(
    observations: &[Observation],
    key: BinKey,
    scheme: &BinScheme,
) -> Result<BinAnalysis, AnalysisError> {
    let keyed: Vec<(f64, &Observation)> = observations
        .iter()
        .filter_map(|o| key_value(o, key).map(|v| (v, o)))
        .collect();
    let skipped = observations.len() - keyed.len();
    if keyed.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let (labels, uppers): (Vec<String>, Vec<f64>) = match scheme {
        BinScheme::Edges(edges) => {
            let increasing = edges.windows(2).all(|w| w[0] < w[1]);
            if edges.is_empty() || !increasing || edges.iter().any(|e| !e.is_finite()) {
                return Err(AnalysisError::BadEdges);
            }
            let mut labels: Vec<String> = edges.iter().map(|&e| edge_label(key, e)).collect();
            let mut uppers = edges.clone();
            let last = *edges.last().expect("non-empty");
            labels.push(match key {
                BinKey::Freeman => format!(">{}%", trim_float(last * 100.0)),
                BinKey::Frequency => format!(">{}", trim_float(last)),
            });
            uppers.push(f64::INFINITY);
            (labels, uppers)
        }
        BinScheme::Quartiles => {
            let mut values: Vec<f64> = keyed.iter().map(|(v, _)| *v).collect();
            values.sort_by(f64::total_cmp);
            let n = values.len();
            let mut uppers: Vec<f64> = (1..=3).map(|k| values[(k * n).div_ceil(4) - 1]).collect();
            uppers.push(f64::INFINITY);
            let labels = (1..=4).map(|q| format!("Q{q}")).collect();
            (labels, uppers)
        }
    };

    let mut members: Vec<Vec<&Observation>> = vec![Vec::new(); uppers.len()];
    for (v, o) in &keyed {
        let bin = uppers.iter().position(|u| v <= u).expect("last bin is unbounded");
        members[bin].push(o);
    }
    let total = keyed.len();
    let rows: Vec<BinRow> = labels
        .into_iter()
        .zip(&members)
        .filter(|(_, m)| !m.is_empty())
        .map(|(label, m)| BinRow::from_members(label, m, total))
        .collect();
    let all: Vec<&Observation> = keyed.iter().map(|(_, o)| *o).collect();
    Ok(BinAnalysis {
        key,
        correlations: correlations(&rows),
        total: BinRow::from_members("All".to_string(), &all, total),
        rows,
        skipped,
    })
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.digits$}"))
}

impl BinAnalysis {
    /// TSV report: header comment, one row per bin, then the summary as comments.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str("# correlations: Pearson over bin-level aggregates, unweighted\n");
        out.push_str("bin\tinstances\tinstance_pct\tavg_frequency\tmatches\taccuracy\tavg_distance\tavg_freeman\n");
        let line = |r: &BinRow| {
            format!(
                "{}\t{}\t{:.1}\t{:.0}\t{}\t{:.1}\t{:.2}\t{}\n",
                r.label,
                r.instances,
                r.instance_share * 100.0,
                r.avg_frequency,
                r.matches,
                r.accuracy * 100.0,
                r.avg_distance,
                opt(r.avg_freeman.map(|f| f * 100.0), 1),
            )
        };
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out.push_str("# ");
        out.push_str(&line(&self.total));
        let c = &self.correlations;
        let _ = writeln!(out, "# corr accuracy~distance\t{}", opt(c.accuracy_distance, 3));
        let _ = writeln!(out, "# corr frequency~freeman\t{}", opt(c.frequency_freeman, 3));
        let _ = writeln!(out, "# corr freeman~accuracy\t{}", opt(c.freeman_accuracy, 3));
        let _ = writeln!(out, "# corr frequency~accuracy\t{}", opt(c.frequency_accuracy, 3));
        if self.skipped > 0 {
            let _ = writeln!(out, "# skipped\t{}", self.skipped);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::metrics::ErrorTaxonomy;
    use crate::eval::record::Scorer;
    use crate::hsb::from_hsb;
    use crate::normalizer::Normalizer;

    fn obs(exact: bool, distance: usize, frequency: u64, freeman: f64) -> Observation {
        Observation {
            exact,
            distance,
            frequency,
            freeman: Some(freeman),
        }
    }

    #[test]
    fn two_bins() {
        let data = [obs(true, 0, 1, 0.2), obs(false, 2, 1, 0.3), obs(true, 0, 1, 0.9)];
        let a = bin_analysis(&data, BinKey::Freeman, &BinScheme::Edges(vec![0.5, 1.0])).unwrap();
        assert_eq!(a.rows.len(), 2);
        assert_eq!(a.rows[0].accuracy, 0.5);
        assert_eq!(a.rows[1].accuracy, 1.0);
        assert_eq!(a.rows[0].label, "50%");
        assert!((a.total.accuracy - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn overflow_and_errors() {
        let data = [obs(true, 0, 10, 0.2), obs(false, 1, 500, 0.3)];
        let a = bin_analysis(&data, BinKey::Frequency, &BinScheme::Edges(vec![100.0])).unwrap();
        assert_eq!(a.rows[0].label, "<=100");
        assert_eq!(a.rows[1].label, ">100");
        assert_eq!(
            bin_analysis(&[], BinKey::Frequency, &BinScheme::Quartiles),
            Err(AnalysisError::EmptyInput)
        );
        assert_eq!(
            bin_analysis(&data, BinKey::Frequency, &BinScheme::Edges(vec![2.0, 1.0])),
            Err(AnalysisError::BadEdges)
        );
    }

    #[test]
    fn quartiles_keep_ties_together() {
        let data: Vec<_> = [1, 1, 1, 1, 2, 3, 4, 5].iter().map(|&f| obs(true, 0, f, 1.0)).collect();
        let a = bin_analysis(&data, BinKey::Frequency, &BinScheme::Quartiles).unwrap();
        let counts: Vec<usize> = a.rows.iter().map(|r| r.instances).collect();
        assert_eq!(counts, vec![4, 2, 2]);
    }

    #[test]
    fn degenerate_correlation_is_undefined() {
        let data = [obs(true, 0, 5, 0.2), obs(true, 0, 5, 0.9)];
        let a = bin_analysis(&data, BinKey::Freeman, &BinScheme::deciles()).unwrap();
        assert_eq!(a.correlations.accuracy_distance, None);
        assert!(a.to_tsv().contains("undefined"));
    }

    #[test]
    fn pearson_known() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&[1.0], &[1.0]), None);
    }

    #[test]
    fn confusion_counts() {
        let tax = ErrorTaxonomy::default();
        let s = Scorer::new(Normalizer::bundled(), &tax);
        // prediction has fatha where the reference has kasra
        let reference = from_hsb("Ăiš.tihaAr.d").unwrap();
        let raw = from_hsb("Ăiš.tahaAr.d").unwrap().render();
        let r = s.score("1", &raw, &reference, None, 0);
        let table = diacritic_confusion(&[r]);
        let get = |m: Mark| table.iter().find(|c| c.mark == m).unwrap().relative;
        assert_eq!(get(Mark::Fatha), 1.0);
        assert_eq!(get(Mark::Kasra), -0.5);
        assert_eq!(get(Mark::Sukun), 0.0);
        assert!(table.iter().all(|c| c.mark != Mark::Shadda));
        assert!(diacritic_confusion(&[]).is_empty());
    }
}
