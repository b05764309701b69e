//! Seven-step repair pipeline for model outputs and raw annotations.
//!
//! Steps run in a fixed order (S1..S7). S3 precedes S6, so a letter before a
//! bare alif receives fatha rather than sukun. The pipeline is idempotent: a
//! second pass over its own output changes nothing and records no steps.

use std::collections::HashMap;
use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::script::{DiacritizedWord, Letter, LetterClass, Mark};
use crate::table::{data_rows, parse_codepoint};
use crate::validator::is_mark_exempt;

pub const DEFAULT_LETTER_MAP_TSV: &str = include_str!("../data/foreign_letters.tsv");

static DEFAULT_NORMALIZER: LazyLock<Normalizer> = LazyLock::new(|| {
    Normalizer::new(LetterMap::from_tsv(DEFAULT_LETTER_MAP_TSV).expect("bundled letter map is valid"))
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RepairStep {
    /// Map a foreign letter to its Arabic equivalent.
    S1,
    /// Put shadda before the vowel.
    S2,
    /// Insert fatha before a long alif.
    S3,
    /// Insert kasra on alif with hamza below.
    S4,
    /// Drop fatha after alif madda.
    S5,
    /// Insert a missing sukun.
    S6,
    /// Drop the final short vowel or sukun.
    S7,
}

impl RepairStep {
    pub const ALL: [RepairStep; 7] = [
        RepairStep::S1,
        RepairStep::S2,
        RepairStep::S3,
        RepairStep::S4,
        RepairStep::S5,
        RepairStep::S6,
        RepairStep::S7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepairStep::S1 => "map-foreign-letter",
            RepairStep::S2 => "shadda-vowel-order",
            RepairStep::S3 => "fatha-before-alif",
            RepairStep::S4 => "kasra-on-hamza-below",
            RepairStep::S5 => "drop-fatha-after-madda",
            RepairStep::S6 => "insert-sukun",
            RepairStep::S7 => "drop-final-diacritic",
        }
    }
}

impl fmt::Display for RepairStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AppliedRepair {
    pub step: RepairStep,
    pub position: usize,
}

impl fmt::Display for AppliedRepair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.step, self.position)
    }
}

/// Ordered record of the repairs applied. Empty iff the word was unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairTrace {
    pub steps: Vec<AppliedRepair>,
}

impl RepairTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn push(&mut self, step: RepairStep, position: usize) {
        self.steps.push(AppliedRepair { step, position });
    }
}

impl fmt::Display for RepairTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LetterMapError {
    #[error("line {line}: expected two columns")]
    Malformed { line: usize },
    #[error("line {line}: {field:?} is not a supported letter")]
    UnsupportedLetter { line: usize, field: String },
    #[error("line {line}: target {field:?} is not an Arabic-language letter")]
    ForeignTarget { line: usize, field: String },
}

/// Foreign letter to Arabic letter map. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct LetterMap {
    map: HashMap<Letter, Letter>,
}

impl LetterMap {
    pub fn from_tsv(text: &str) -> Result<LetterMap, LetterMapError> {
        let mut map = HashMap::new();
        for (line, cols) in data_rows(text) {
            let [src, dst] = cols.as_slice() else {
                return Err(LetterMapError::Malformed { line });
            };
            let letter = |f: &str| {
                parse_codepoint(f)
                    .and_then(Letter::new)
                    .ok_or_else(|| LetterMapError::UnsupportedLetter {
                        line,
                        field: f.to_string(),
                    })
            };
            let (s, d) = (letter(src)?, letter(dst)?);
            if d.class() == LetterClass::Foreign {
                return Err(LetterMapError::ForeignTarget {
                    line,
                    field: dst.to_string(),
                });
            }
            map.insert(s, d);
        }
        Ok(LetterMap { map })
    }

    pub fn get(&self, letter: Letter) -> Option<Letter> {
        self.map.get(&letter).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Normalized word plus the repairs that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub word: DiacritizedWord,
    pub trace: RepairTrace,
}

#[derive(Debug, Clone, Default)]
pub struct Normalizer {
    letters: LetterMap,
}

impl Normalizer {
    pub fn new(letters: LetterMap) -> Normalizer {
        Normalizer { letters }
    }

    /// Normalizer with the bundled foreign-letter map.
    pub fn bundled() -> &'static Normalizer {
        &DEFAULT_NORMALIZER
    }

    pub fn letter_map(&self) -> &LetterMap {
        &self.letters
    }

    pub fn normalize(&self, word: &DiacritizedWord) -> Normalized {
        let mut word = word.clone();
        let mut trace = RepairTrace::default();
        let n = word.len();
        let segs = word.segments_mut();

        // S1
        for (i, seg) in segs.iter_mut().enumerate() {
            if let Some(target) = self.letters.get(seg.letter) {
                seg.letter = target;
                trace.push(RepairStep::S1, i);
            }
        }

        // S2
        for (i, seg) in segs.iter_mut().enumerate() {
            if seg.marks.canonicalize() {
                trace.push(RepairStep::S2, i);
            }
        }

        // S3
        for i in 1..n {
            let alif = &segs[i];
            // A final alif's vowel or sukun is dropped by S7, so it counts as bare here.
            let bare = alif.marks.is_empty()
                || (i == n - 1
                    && alif
                        .marks
                        .marks()
                        .iter()
                        .all(|m| m.is_short_vowel() || *m == Mark::Sukun));
            if alif.letter.class() != LetterClass::AlifBare || !bare {
                continue;
            }
            let prev = &mut segs[i - 1];
            let prev_is_alif = matches!(
                prev.letter.class(),
                LetterClass::AlifBare | LetterClass::AlifMadda | LetterClass::AlifWasla
            );
            if !prev_is_alif && prev.marks.vowel().is_none() {
                prev.marks.set_vowel(Mark::Fatha);
                trace.push(RepairStep::S3, i - 1);
            }
        }

        // S4
        for (i, seg) in segs.iter_mut().enumerate().take(n.saturating_sub(1)) {
            if seg.letter.class() == LetterClass::AlifHamzaBelow && seg.marks.vowel() != Some(Mark::Kasra) {
                seg.marks.set_vowel(Mark::Kasra);
                trace.push(RepairStep::S4, i);
            }
        }

        // S5
        for (i, seg) in segs.iter_mut().enumerate() {
            if seg.letter.class() == LetterClass::AlifMadda && seg.marks.remove(Mark::Fatha) {
                trace.push(RepairStep::S5, i);
            }
        }

        // S6
        for i in 0..n.saturating_sub(1) {
            if segs[i].marks.is_empty() && !is_mark_exempt(segs, i) {
                segs[i].marks.set_only(Mark::Sukun);
                trace.push(RepairStep::S6, i);
            }
        }

        // S7
        if let Some(last) = segs.last_mut() {
            let mut removed = false;
            for m in [Mark::Fatha, Mark::Damma, Mark::Kasra, Mark::Sukun] {
                removed |= last.marks.remove(m);
            }
            if removed {
                trace.push(RepairStep::S7, n - 1);
            }
        }

        Normalized { word, trace }
    }
}

/// Normalize with the bundled letter map.
pub fn normalize(word: &DiacritizedWord) -> Normalized {
    Normalizer::bundled().normalize(word)
}
