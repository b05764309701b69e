//! Scored predictions.

use serde::{Deserialize, Serialize};

use crate::eval::metrics::{edit_distance, exact_match, ErrorClass, ErrorTaxonomy};
use crate::normalizer::{Normalizer, RepairTrace};
use crate::script::{parse_arabic, DiacritizedWord};

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Scored {
        /// Normalized prediction.
        prediction: DiacritizedWord,
        error_class: ErrorClass,
        trace: RepairTrace,
        /// Distance between the raw parsed prediction and the reference.
        raw_distance: usize,
    },
    /// The model output could not be parsed as one diacritized word.
    Failed { reason: String },
}

/// One prediction compared with its reference.
///
/// A failed record counts as a miss with the distance of an empty prediction,
/// so `exact ⇔ distance == 0` holds for every record with a non-empty reference.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub id: String,
    pub raw: String,
    pub reference: DiacritizedWord,
    pub exact: bool,
    pub distance: usize,
    pub freeman: Option<f64>,
    pub frequency: u64,
    pub outcome: Outcome,
}

impl EvalRecord {
    pub fn prediction(&self) -> Option<&DiacritizedWord> {
        match &self.outcome {
            Outcome::Scored { prediction, .. } => Some(prediction),
            Outcome::Failed { .. } => None,
        }
    }

    pub fn error_class(&self) -> Option<ErrorClass> {
        match &self.outcome {
            Outcome::Scored { error_class, .. } => Some(*error_class),
            Outcome::Failed { .. } => None,
        }
    }

    pub fn trace(&self) -> Option<&RepairTrace> {
        match &self.outcome {
            Outcome::Scored { trace, .. } => Some(trace),
            Outcome::Failed { .. } => None,
        }
    }

    pub fn is_failed(&self) -> bool {
        matches!(self.outcome, Outcome::Failed { .. })
    }

    /// `error_class` label, or `failed`.
    pub fn status_label(&self) -> String {
        match &self.outcome {
            Outcome::Scored { error_class, .. } => error_class.to_string(),
            Outcome::Failed { .. } => "failed".to_string(),
        }
    }

    pub fn observation(&self) -> Observation {
        Observation {
            exact: self.exact,
            distance: self.distance,
            frequency: self.frequency,
            freeman: self.freeman,
        }
    }
}

/// The fields bin analysis needs from a record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub exact: bool,
    pub distance: usize,
    pub frequency: u64,
    pub freeman: Option<f64>,
}

/// Scores raw model outputs: parse, normalize, compare.
#[derive(Debug, Clone, Copy)]
pub struct Scorer<'a> {
    pub normalizer: &'a Normalizer,
    pub taxonomy: &'a ErrorTaxonomy,
}

impl<'a> Scorer<'a> {
    pub fn new(normalizer: &'a Normalizer, taxonomy: &'a ErrorTaxonomy) -> Self {
        Scorer { normalizer, taxonomy }
    }

    /// Score `raw` against `reference`; the reference is normalized too.
    pub fn score(
        &self,
        id: impl Into<String>,
        raw: &str,
        reference: &DiacritizedWord,
        freeman: Option<f64>,
        frequency: u64,
    ) -> EvalRecord {
        let reference = self.normalizer.normalize(reference).word;
        let parsed = parse_arabic(raw.trim());
        self.build(
            id.into(),
            raw.to_string(),
            reference,
            parsed.map_err(|e| e.to_string()),
            freeman,
            frequency,
        )
    }

    /// Record for a prediction that never produced a parseable word.
    pub fn failed(
        &self,
        id: impl Into<String>,
        raw: &str,
        reference: &DiacritizedWord,
        reason: impl Into<String>,
        freeman: Option<f64>,
        frequency: u64,
    ) -> EvalRecord {
        let reference = self.normalizer.normalize(reference).word;
        self.build(
            id.into(),
            raw.to_string(),
            reference,
            Err(reason.into()),
            freeman,
            frequency,
        )
    }

    fn build(
        &self,
        id: String,
        raw: String,
        reference: DiacritizedWord,
        parsed: Result<DiacritizedWord, String>,
        freeman: Option<f64>,
        frequency: u64,
    ) -> EvalRecord {
        let parsed = parsed.and_then(|w| {
            if w.is_empty() {
                Err("empty prediction".to_string())
            } else {
                Ok(w)
            }
        });
        match parsed {
            Ok(raw_word) => {
                let raw_distance = edit_distance(&raw_word, &reference);
                let normalized = self.normalizer.normalize(&raw_word);
                let prediction = normalized.word;
                EvalRecord {
                    id,
                    raw,
                    exact: exact_match(&prediction, &reference),
                    distance: edit_distance(&prediction, &reference),
                    freeman,
                    frequency,
                    outcome: Outcome::Scored {
                        error_class: self.taxonomy.classify(&prediction, &reference),
                        prediction,
                        trace: normalized.trace,
                        raw_distance,
                    },
                    reference,
                }
            }
            Err(reason) => EvalRecord {
                id,
                raw,
                exact: false,
                distance: reference.codepoints().count(),
                freeman,
                frequency,
                outcome: Outcome::Failed { reason },
                reference,
            },
        }
    }
}
