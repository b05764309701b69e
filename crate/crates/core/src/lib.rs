//! Diacritized Arabic lemmas for proper nouns: orthographic validation,
//! normalization of model output, scoring and a benchmark harness.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod eval;
pub mod hsb;
pub mod lemma;
pub mod normalizer;
pub mod script;
mod table;
pub mod validator;

pub use hsb::{from_hsb, to_hsb, HsbError, HsbTable, HsbText};
pub use lemma::{check_integrity, IntegrityReport, TransformKind};
pub use normalizer::{normalize, Normalized, Normalizer, RepairStep, RepairTrace};
pub use script::{parse_arabic, strip_diacritics, DiacritizedWord, Letter, Mark, ParseError};
pub use validator::{validate, RuleCode, ValidationProfile, Violation};
