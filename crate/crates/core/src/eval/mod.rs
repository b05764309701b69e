//! Scoring, error classification and analyses.

pub mod analysis;
pub mod freeman;
pub mod metrics;
pub mod record;

pub use analysis::{
    bin_analysis, diacritic_confusion, pearson, AnalysisError, BinAnalysis, BinKey, BinRow, BinScheme, Correlations,
    MarkConfusion,
};
pub use freeman::{freeman_similarity, ClassTableError, FreemanError, FreemanTable};
pub use metrics::{classify_error, edit_distance, exact_match, levenshtein, ErrorClass, ErrorTaxonomy, LetterPair};
pub use record::{EvalRecord, Observation, Outcome, Scorer};
