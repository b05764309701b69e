//! Cross-script phonetic similarity between an Arabic skeleton and a Latin gloss.
//!
//! Both sides are mapped to sequences of phonetic classes and compared with
//! `2 * LCS / (|a| + |b|)`.

use std::collections::HashMap;
use std::sync::LazyLock;

use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::script::is_diacritic;
use crate::table::data_rows;

pub const DEFAULT_CLASSES_TSV: &str = include_str!("../../data/freeman_classes.tsv");

const VOWEL_CLASS: &str = "V";

static DEFAULT_TABLE: LazyLock<FreemanTable> =
    LazyLock::new(|| FreemanTable::from_tsv(DEFAULT_CLASSES_TSV).expect("bundled class table is valid"));

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreemanError {
    #[error("gloss {0:?} has no letters")]
    EmptyGloss(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassTableError {
    #[error("line {line}: expected two columns")]
    Malformed { line: usize },
    #[error("line {line}: symbol {field:?} is neither one Arabic letter nor lowercase ASCII")]
    BadSymbol { line: usize, field: String },
    #[error("line {line}: duplicate symbol {field:?}")]
    Duplicate { line: usize, field: String },
    #[error("class table has no vowel class {VOWEL_CLASS:?}")]
    NoVowelClass,
}

/// Index into the table's class names.
pub type ClassId = u16;

#[derive(Debug, Clone)]
pub struct FreemanTable {
    arabic: HashMap<char, ClassId>,
    /// Sorted longest first.
    latin: Vec<(String, ClassId)>,
    names: Vec<String>,
    vowel: ClassId,
}

fn intern(names: &mut Vec<String>, name: &str) -> ClassId {
    match names.iter().position(|n| n == name) {
        Some(i) => i as ClassId,
        None => {
            names.push(name.to_string());
            (names.len() - 1) as ClassId
        }
    }
}

/// Replacement for Latin letters that do not decompose into ASCII.
fn special_latin(c: char) -> Option<&'static str> {
    Some(match c {
        'ø' => "o",
        'æ' => "ae",
        'œ' => "oe",
        'ß' => "ss",
        'ł' => "l",
        'đ' | 'ð' => "d",
        'þ' => "th",
        'ı' => "i",
        _ => return None,
    })
}

fn collapse_vowels(seq: Vec<ClassId>, vowel: ClassId) -> Vec<ClassId> {
    let mut out: Vec<ClassId> = Vec::with_capacity(seq.len());
    for c in seq {
        if c == vowel && out.last() == Some(&vowel) {
            continue;
        }
        out.push(c);
    }
    out
}

impl FreemanTable {
    pub fn from_tsv(text: &str) -> Result<FreemanTable, ClassTableError> {
        let mut names = Vec::new();
        let mut arabic = HashMap::new();
        let mut latin: Vec<(String, ClassId)> = Vec::new();
        for (line, cols) in data_rows(text) {
            let [symbol, class] = cols.as_slice() else {
                return Err(ClassTableError::Malformed { line });
            };
            let (symbol, class) = (symbol.trim(), class.trim());
            if symbol.is_empty() || class.is_empty() {
                return Err(ClassTableError::Malformed { line });
            }
            let id = intern(&mut names, class);
            let dup = || ClassTableError::Duplicate {
                line,
                field: symbol.to_string(),
            };
            if symbol.chars().all(|c| c.is_ascii_lowercase()) {
                if latin.iter().any(|(s, _)| s == symbol) {
                    return Err(dup());
                }
                latin.push((symbol.to_string(), id));
                continue;
            }
            let mut chars = symbol.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if ('\u{0600}'..='\u{06FF}').contains(&c) => {
                    if arabic.insert(c, id).is_some() {
                        return Err(dup());
                    }
                }
                _ => {
                    return Err(ClassTableError::BadSymbol {
                        line,
                        field: symbol.to_string(),
                    })
                }
            }
        }
        let vowel = names
            .iter()
            .position(|n| n == VOWEL_CLASS)
            .ok_or(ClassTableError::NoVowelClass)? as ClassId;
        latin.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Ok(FreemanTable {
            arabic,
            latin,
            names,
            vowel,
        })
    }

    pub fn bundled() -> &'static FreemanTable {
        &DEFAULT_TABLE
    }

    pub fn class_name(&self, id: ClassId) -> &str {
        &self.names[id as usize]
    }

    /// Classes of an Arabic skeleton. Marks and unmapped characters are skipped.
    pub fn arabic_classes(&self, skeleton: &str) -> Vec<ClassId> {
        let seq = skeleton
            .chars()
            .filter(|&c| !is_diacritic(c))
            .filter_map(|c| self.arabic.get(&c).copied())
            .collect();
        collapse_vowels(seq, self.vowel)
    }

    /// Lowercased ASCII letters of a gloss, accents stripped and doubled letters collapsed.
    pub fn latin_letters(gloss: &str) -> String {
        let mut ascii = String::new();
        for c in gloss.nfd().filter(|&c| !is_combining_mark(c)) {
            for lc in c.to_lowercase() {
                if let Some(rep) = special_latin(lc) {
                    ascii.push_str(rep);
                } else if lc.is_ascii_lowercase() {
                    ascii.push(lc);
                }
            }
        }
        let mut out = String::with_capacity(ascii.len());
        for c in ascii.chars() {
            if !out.ends_with(c) {
                out.push(c);
            }
        }
        out
    }

    /// Classes of a Latin gloss.
    pub fn latin_classes(&self, gloss: &str) -> Result<Vec<ClassId>, FreemanError> {
        let letters = Self::latin_letters(gloss);
        if letters.is_empty() {
            return Err(FreemanError::EmptyGloss(gloss.to_string()));
        }
        let mut seq = Vec::new();
        let mut rest = letters.as_str();
        while !rest.is_empty() {
            match self.latin.iter().find(|(s, _)| rest.starts_with(s.as_str())) {
                Some((s, id)) => {
                    seq.push(*id);
                    rest = &rest[s.len()..];
                }
                None => rest = &rest[1..],
            }
        }
        Ok(collapse_vowels(seq, self.vowel))
    }

    pub fn similarity(&self, arabic_skeleton: &str, gloss: &str) -> Result<f64, FreemanError> {
        let b = self.latin_classes(gloss)?;
        Ok(class_similarity(&self.arabic_classes(arabic_skeleton), &b))
    }
}

/// Length of the longest common subsequence.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { above.max(row[j]) };
            diag = above;
        }
    }
    row[b.len()]
}

/// `2 * LCS / (|a| + |b|)`; two empty sequences count as identical.
pub fn class_similarity(a: &[ClassId], b: &[ClassId]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    2.0 * lcs_len(a, b) as f64 / (a.len() + b.len()) as f64
}

/// Similarity with the bundled class table.
pub fn freeman_similarity(arabic_skeleton: &str, gloss: &str) -> Result<f64, FreemanError> {
    FreemanTable::bundled().similarity(arabic_skeleton, gloss)
}
