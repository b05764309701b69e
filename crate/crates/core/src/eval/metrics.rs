//! Exact match, Levenshtein distance and the error taxonomy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hsb::HsbTable;
use crate::script::{DiacritizedWord, Letter};

/// Codepoint-for-codepoint equality of the rendered words.
pub fn exact_match(prediction: &DiacritizedWord, reference: &DiacritizedWord) -> bool {
    prediction.codepoints().eq(reference.codepoints())
}

/// Minimal number of insertions, deletions and substitutions.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if x == y { diag } else { 1 + diag.min(above).min(row[j]) };
            diag = above;
        }
    }
    row[b.len()]
}

/// Edit distance over the full codepoint sequences, letters and marks alike.
pub fn edit_distance(prediction: &DiacritizedWord, reference: &DiacritizedWord) -> usize {
    let a: Vec<char> = prediction.codepoints().collect();
    let b: Vec<char> = reference.codepoints().collect();
    levenshtein(&a, &b)
}

/// Unordered pair of letters that are commonly confused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LetterPair(pub char, pub char);

impl LetterPair {
    pub fn matches(self, a: char, b: char) -> bool {
        (self.0 == a && self.1 == b) || (self.0 == b && self.1 == a)
    }
}

impl fmt::Display for LetterPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = HsbTable::bundled();
        let sym = |c: char| t.symbol_for(c).unwrap_or(c);
        write!(f, "{}↔{}", sym(self.0), sym(self.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorClass {
    ExactMatch,
    /// Same letters, different marks.
    DiacOnly,
    /// Letters differ only in alif, waw and ya.
    Awy,
    /// Letters differ only by substitutions within one configured pair.
    LetterSub(LetterPair),
    Multiple,
}

impl ErrorClass {
    /// Label without the pair, for histograms.
    pub fn kind(&self) -> &'static str {
        match self {
            ErrorClass::ExactMatch => "exact-match",
            ErrorClass::DiacOnly => "diac-only",
            ErrorClass::Awy => "awy",
            ErrorClass::LetterSub(_) => "letter-sub",
            ErrorClass::Multiple => "multiple",
        }
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorClass::LetterSub(p) => write!(f, "letter-sub({p})"),
            other => f.write_str(other.kind()),
        }
    }
}

impl FromStr for ErrorClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact-match" => return Ok(ErrorClass::ExactMatch),
            "diac-only" => return Ok(ErrorClass::DiacOnly),
            "awy" => return Ok(ErrorClass::Awy),
            "multiple" => return Ok(ErrorClass::Multiple),
            _ => {}
        }
        let inner = s
            .strip_prefix("letter-sub(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("unknown error class {s:?}"))?;
        let (a, b) = inner
            .split_once('↔')
            .ok_or_else(|| format!("bad letter pair in {s:?}"))?;
        let t = HsbTable::bundled();
        let letter = |x: &str| -> Result<char, String> {
            let mut it = x.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(t.arabic_for(c).unwrap_or(c)),
                _ => Err(format!("bad letter {x:?} in {s:?}")),
            }
        };
        Ok(ErrorClass::LetterSub(LetterPair(letter(a)?, letter(b)?)))
    }
}

/// Classifier configuration: the letter pairs counted as simple substitutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorTaxonomy {
    pub pairs: Vec<LetterPair>,
}

impl Default for ErrorTaxonomy {
    fn default() -> Self {
        ErrorTaxonomy {
            pairs: vec![LetterPair('ج', 'غ'), LetterPair('خ', 'ه'), LetterPair('ة', 'ه')],
        }
    }
}

fn is_awy_char(c: char) -> bool {
    Letter::new(c).is_some_and(Letter::is_awy)
}

impl ErrorTaxonomy {
    pub fn classify(&self, prediction: &DiacritizedWord, reference: &DiacritizedWord) -> ErrorClass {
        if exact_match(prediction, reference) {
            return ErrorClass::ExactMatch;
        }
        let p: Vec<char> = prediction.skeleton().chars().collect();
        let r: Vec<char> = reference.skeleton().chars().collect();
        if p == r {
            return ErrorClass::DiacOnly;
        }
        let strip = |s: &[char]| -> Vec<char> { s.iter().copied().filter(|&c| !is_awy_char(c)).collect() };
        if strip(&p) == strip(&r) {
            return ErrorClass::Awy;
        }
        if p.len() == r.len() {
            let mut pair: Option<LetterPair> = None;
            let all_in_one_pair = p.iter().zip(&r).filter(|(a, b)| a != b).all(|(&a, &b)| {
                match self.pairs.iter().find(|pr| pr.matches(a, b)) {
                    Some(&found) => *pair.get_or_insert(found) == found,
                    None => false,
                }
            });
            if all_in_one_pair {
                if let Some(found) = pair {
                    return ErrorClass::LetterSub(found);
                }
            }
        }
        ErrorClass::Multiple
    }
}

/// Classify with the default letter pairs.
pub fn classify_error(prediction: &DiacritizedWord, reference: &DiacritizedWord) -> ErrorClass {
    ErrorTaxonomy::default().classify(prediction, reference)
}
