//! HSB romanization: a one-to-one mapping between Arabic codepoints and Latin
//! symbols. The table is data (`data/hsb.tsv`) and is checked for bijectivity
//! and full coverage of the supported alphabet when loaded.

use std::collections::HashMap;
use std::fmt;
use std::sync::LazyLock;

use thiserror::Error;

use crate::script::{parse_arabic, DiacritizedWord, Letter, Mark, ParseError};
use crate::table::{data_rows, parse_codepoint};

pub const DEFAULT_TABLE_TSV: &str = include_str!("../data/hsb.tsv");

static DEFAULT_TABLE: LazyLock<HsbTable> =
    LazyLock::new(|| HsbTable::from_tsv(DEFAULT_TABLE_TSV).expect("bundled HSB table is valid"));

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HsbTableError {
    #[error("line {line}: expected two columns")]
    Malformed { line: usize },
    #[error("line {line}: {field:?} is not a supported Arabic codepoint")]
    UnsupportedCodepoint { line: usize, field: String },
    #[error("line {line}: HSB symbol {field:?} must be a single character")]
    BadSymbol { line: usize, field: String },
    #[error("line {line}: duplicate mapping for {ch:?}")]
    Duplicate { line: usize, ch: char },
    #[error("no HSB symbol for {0:?}")]
    Missing(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HsbError {
    #[error("unknown HSB symbol {ch:?} at position {position}")]
    UnknownHsbSymbol { position: usize, ch: char },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Romanized text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HsbText(String);

impl HsbText {
    pub fn new(s: impl Into<String>) -> HsbText {
        HsbText(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for HsbText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone)]
pub struct HsbTable {
    to_latin: HashMap<char, char>,
    to_arabic: HashMap<char, char>,
}

impl HsbTable {
    pub fn from_tsv(text: &str) -> Result<HsbTable, HsbTableError> {
        let mut to_latin = HashMap::new();
        let mut to_arabic = HashMap::new();
        for (line, cols) in data_rows(text) {
            let [arabic, symbol] = cols.as_slice() else {
                return Err(HsbTableError::Malformed { line });
            };
            let ch = parse_codepoint(arabic)
                .filter(|&c| Letter::new(c).is_some() || Mark::from_char(c).is_some())
                .ok_or_else(|| HsbTableError::UnsupportedCodepoint {
                    line,
                    field: arabic.to_string(),
                })?;
            let sym = parse_codepoint(symbol).ok_or_else(|| HsbTableError::BadSymbol {
                line,
                field: symbol.to_string(),
            })?;
            if to_latin.insert(ch, sym).is_some() {
                return Err(HsbTableError::Duplicate { line, ch });
            }
            if to_arabic.insert(sym, ch).is_some() {
                return Err(HsbTableError::Duplicate { line, ch: sym });
            }
        }
        let table = HsbTable { to_latin, to_arabic };
        for c in Letter::all()
            .map(Letter::as_char)
            .chain(Mark::ALL.iter().map(|m| m.as_char()))
        {
            if !table.to_latin.contains_key(&c) {
                return Err(HsbTableError::Missing(c));
            }
        }
        Ok(table)
    }

    /// The table bundled with the crate.
    pub fn bundled() -> &'static HsbTable {
        &DEFAULT_TABLE
    }

    pub fn symbol_for(&self, arabic: char) -> Option<char> {
        self.to_latin.get(&arabic).copied()
    }

    pub fn arabic_for(&self, symbol: char) -> Option<char> {
        self.to_arabic.get(&symbol).copied()
    }

    pub fn to_hsb(&self, word: &DiacritizedWord) -> HsbText {
        // The table covers every letter and mark a parsed word can hold.
        HsbText(word.codepoints().map(|c| self.symbol_for(c).unwrap_or(c)).collect())
    }

    pub fn from_hsb(&self, hsb: &str) -> Result<DiacritizedWord, HsbError> {
        let arabic = hsb
            .chars()
            .enumerate()
            .map(|(position, ch)| self.arabic_for(ch).ok_or(HsbError::UnknownHsbSymbol { position, ch }))
            .collect::<Result<String, _>>()?;
        Ok(parse_arabic(&arabic)?)
    }

    /// Pairs (arabic, symbol) sorted by Arabic codepoint.
    pub fn entries(&self) -> Vec<(char, char)> {
        let mut v: Vec<_> = self.to_latin.iter().map(|(&a, &s)| (a, s)).collect();
        v.sort_unstable();
        v
    }
}

/// Romanize with the bundled table.
pub fn to_hsb(word: &DiacritizedWord) -> HsbText {
    HsbTable::bundled().to_hsb(word)
}

/// Parse romanized text with the bundled table.
pub fn from_hsb(hsb: &str) -> Result<DiacritizedWord, HsbError> {
    HsbTable::bundled().from_hsb(hsb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hsb(t: &str) -> String {
        to_hsb(&parse_arabic(t).unwrap()).into_string()
    }

    #[test]
    fn bundled_table_loads() {
        let t = HsbTable::bundled();
        assert_eq!(t.symbol_for('ع'), Some('ς'));
        assert_eq!(t.symbol_for('\u{0651}'), Some('~'));
    }

    #[test]
    fn oman_and_amman() {
        assert_eq!(hsb("عُمَان"), "ςumaAn");
        assert_eq!(
            hsb("\u{0639}\u{064E}\u{0645}\u{0651}\u{064E}\u{0627}\u{0646}"),
            "ςam~aAn"
        );
        assert_eq!(hsb(""), "");
    }

    #[test]
    fn from_hsb_examples() {
        assert_eq!(from_hsb("nax.jiwaAn").unwrap().render(), "نَخْجِوَان");
        assert_eq!(from_hsb("sit~").unwrap().render(), "سِتّ");
        assert!(from_hsb("").unwrap().is_empty());
    }

    #[test]
    fn unknown_symbol() {
        assert_eq!(
            from_hsb("baQ"),
            Err(HsbError::UnknownHsbSymbol { position: 2, ch: 'Q' })
        );
        assert!(matches!(from_hsb("ab"), Err(HsbError::Parse(_))));
    }

    #[test]
    fn output_length_is_letters_plus_marks() {
        let w = parse_arabic("بَارَّافْرَانْكَا").unwrap();
        assert_eq!(to_hsb(&w).as_str().chars().count(), w.len() + w.mark_count());
    }

    #[test]
    fn rejects_duplicate_symbol() {
        let mut text = DEFAULT_TABLE_TSV.to_string();
        text.push_str("U+0649\ty\n");
        assert!(matches!(
            HsbTable::from_tsv(&text),
            Err(HsbTableError::Duplicate { .. })
        ));
    }

    #[test]
    fn rejects_incomplete_table() {
        let text: String = DEFAULT_TABLE_TSV
            .lines()
            .filter(|l| !l.starts_with("U+0628"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(HsbTable::from_tsv(&text).unwrap_err(), HsbTableError::Missing('ب'));
    }
}
