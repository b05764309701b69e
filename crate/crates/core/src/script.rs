//! Letter and diacritic model for Arabic proper nouns.
//!
//! A [`DiacritizedWord`] is a sequence of segments, each holding one letter and
//! the marks written after it. Parsing is lossless: marks keep their input order,
//! so rendering a parsed word gives back the exact input text. Repairs such as
//! reordering a vowel that precedes a shadda belong to the normalizer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Kind of a supported letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterClass {
    Consonant,
    AlifBare,
    AlifHamzaAbove,
    AlifHamzaBelow,
    AlifMadda,
    AlifWasla,
    AlifMaqsura,
    Waw,
    WawHamza,
    Ya,
    YaHamza,
    TaMarbuta,
    /// Arabic-script letter used by other languages (Persian, Urdu, ...).
    Foreign,
}

/// A letter of the supported alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(char);

pub const ALIF: char = '\u{0627}';
pub const LAM: char = '\u{0644}';
pub const WAW: char = '\u{0648}';
pub const YA: char = '\u{064A}';
pub const NUN: char = '\u{0646}';

fn letter_class(c: char) -> Option<LetterClass> {
    use LetterClass::*;
    let class = match c {
        '\u{0627}' => AlifBare,
        '\u{0623}' => AlifHamzaAbove,
        '\u{0625}' => AlifHamzaBelow,
        '\u{0622}' => AlifMadda,
        '\u{0671}' => AlifWasla,
        '\u{0649}' => AlifMaqsura,
        '\u{0648}' => Waw,
        '\u{0624}' => WawHamza,
        '\u{064A}' => Ya,
        '\u{0626}' => YaHamza,
        '\u{0629}' => TaMarbuta,
        '\u{0621}' | '\u{0628}' | '\u{062A}'..='\u{063A}' | '\u{0641}'..='\u{0647}' => Consonant,
        '\u{067E}' | '\u{06A4}' | '\u{06AF}' | '\u{0686}' | '\u{0698}' | '\u{06A9}' | '\u{06CC}' | '\u{06C1}'
        | '\u{06D5}' => Foreign,
        _ => return None,
    };
    Some(class)
}

impl Letter {
    pub fn new(c: char) -> Option<Letter> {
        letter_class(c).map(|_| Letter(c))
    }

    pub fn as_char(self) -> char {
        self.0
    }

    pub fn class(self) -> LetterClass {
        // Construction guarantees membership.
        letter_class(self.0).unwrap_or(LetterClass::Consonant)
    }

    /// Bare alif, hamza-seated alifs, madda, wasla and alif maqsura.
    pub fn is_alif_family(self) -> bool {
        matches!(
            self.class(),
            LetterClass::AlifBare
                | LetterClass::AlifHamzaAbove
                | LetterClass::AlifHamzaBelow
                | LetterClass::AlifMadda
                | LetterClass::AlifWasla
                | LetterClass::AlifMaqsura
        )
    }

    /// Letters that may spell a long vowel or a glide: the alif family, waw and ya.
    pub fn is_awy(self) -> bool {
        self.is_alif_family() || matches!(self.class(), LetterClass::Waw | LetterClass::Ya)
    }

    /// Iterator over every supported letter, in codepoint order.
    pub fn all() -> impl Iterator<Item = Letter> {
        ('\u{0621}'..='\u{06FF}').filter_map(Letter::new)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Supported diacritic marks. Nunation is rejected at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mark {
    Fatha,
    Damma,
    Kasra,
    Sukun,
    Shadda,
    DaggerAlif,
}

impl Mark {
    pub const ALL: [Mark; 6] = [
        Mark::Fatha,
        Mark::Damma,
        Mark::Kasra,
        Mark::Sukun,
        Mark::Shadda,
        Mark::DaggerAlif,
    ];

    pub fn from_char(c: char) -> Option<Mark> {
        Some(match c {
            '\u{064E}' => Mark::Fatha,
            '\u{064F}' => Mark::Damma,
            '\u{0650}' => Mark::Kasra,
            '\u{0652}' => Mark::Sukun,
            '\u{0651}' => Mark::Shadda,
            '\u{0670}' => Mark::DaggerAlif,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Mark::Fatha => '\u{064E}',
            Mark::Damma => '\u{064F}',
            Mark::Kasra => '\u{0650}',
            Mark::Sukun => '\u{0652}',
            Mark::Shadda => '\u{0651}',
            Mark::DaggerAlif => '\u{0670}',
        }
    }

    /// Fatha, damma or kasra.
    pub fn is_short_vowel(self) -> bool {
        matches!(self, Mark::Fatha | Mark::Damma | Mark::Kasra)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mark::Fatha => "fatha",
            Mark::Damma => "damma",
            Mark::Kasra => "kasra",
            Mark::Sukun => "sukun",
            Mark::Shadda => "shadda",
            Mark::DaggerAlif => "dagger-alif",
        }
    }
}

fn is_nunation(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{064D}')
}

/// True for any diacritic codepoint this crate recognises, including nunation.
pub fn is_diacritic(c: char) -> bool {
    Mark::from_char(c).is_some() || is_nunation(c)
}

/// Marks attached to one letter, in written order.
///
/// At most two marks; a pair is always one shadda plus one short vowel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MarkCluster {
    marks: Vec<Mark>,
}

impl MarkCluster {
    pub fn new() -> MarkCluster {
        MarkCluster::default()
    }

    pub fn from_marks(marks: &[Mark]) -> Option<MarkCluster> {
        let mut cluster = MarkCluster::new();
        for &m in marks {
            if !cluster.accepts(m) {
                return None;
            }
            cluster.marks.push(m);
        }
        Some(cluster)
    }

    fn accepts(&self, next: Mark) -> bool {
        match self.marks.as_slice() {
            [] => true,
            [only] => {
                (*only == Mark::Shadda && next.is_short_vowel()) || (only.is_short_vowel() && next == Mark::Shadda)
            }
            _ => false,
        }
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn contains(&self, mark: Mark) -> bool {
        self.marks.contains(&mark)
    }

    pub fn has_shadda(&self) -> bool {
        self.contains(Mark::Shadda)
    }

    pub fn has_sukun(&self) -> bool {
        self.contains(Mark::Sukun)
    }

    /// The short vowel in this cluster, if any.
    pub fn vowel(&self) -> Option<Mark> {
        self.marks.iter().copied().find(|m| m.is_short_vowel())
    }

    /// Shadda, when present, comes first.
    pub fn is_canonical(&self) -> bool {
        !matches!(self.marks.as_slice(), [v, Mark::Shadda] if v.is_short_vowel())
    }

    pub(crate) fn canonicalize(&mut self) -> bool {
        if self.is_canonical() {
            return false;
        }
        self.marks.swap(0, 1);
        true
    }

    /// Replace the vowel (and any sukun) with `vowel`, keeping a shadda in front.
    pub(crate) fn set_vowel(&mut self, vowel: Mark) {
        debug_assert!(vowel.is_short_vowel());
        let shadda = self.has_shadda();
        self.marks.clear();
        if shadda {
            self.marks.push(Mark::Shadda);
        }
        self.marks.push(vowel);
    }

    pub(crate) fn remove(&mut self, mark: Mark) -> bool {
        let before = self.marks.len();
        self.marks.retain(|&m| m != mark);
        before != self.marks.len()
    }

    pub(crate) fn set_only(&mut self, mark: Mark) {
        self.marks.clear();
        self.marks.push(mark);
    }
}

/// One letter with its marks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub letter: Letter,
    pub marks: MarkCluster,
}

impl Segment {
    pub fn new(letter: Letter, marks: MarkCluster) -> Segment {
        Segment { letter, marks }
    }

    pub fn bare(letter: Letter) -> Segment {
        Segment::new(letter, MarkCluster::new())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unsupported character {ch:?} at position {position}")]
    UnsupportedCharacter { position: usize, ch: char },
    #[error("diacritic at position {position} has no preceding letter")]
    LeadingDiacritic { position: usize },
    #[error("invalid mark cluster at position {position}")]
    OversizedCluster { position: usize },
    #[error("nunation mark at position {position} is not supported")]
    Nunation { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::UnsupportedCharacter { position, .. }
            | ParseError::LeadingDiacritic { position }
            | ParseError::OversizedCluster { position }
            | ParseError::Nunation { position } => position,
        }
    }
}

/// A parsed Arabic word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DiacritizedWord {
    segments: Vec<Segment>,
}

impl DiacritizedWord {
    pub fn from_segments(segments: Vec<Segment>) -> DiacritizedWord {
        DiacritizedWord { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub(crate) fn segments_mut(&mut self) -> &mut [Segment] {
        &mut self.segments
    }

    pub fn into_segments(self) -> Vec<Segment> {
        self.segments
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Letters and marks, in written order.
    pub fn codepoints(&self) -> impl Iterator<Item = char> + '_ {
        self.segments
            .iter()
            .flat_map(|s| std::iter::once(s.letter.as_char()).chain(s.marks.marks().iter().map(|m| m.as_char())))
    }

    pub fn render(&self) -> String {
        self.codepoints().collect()
    }

    /// Letters only.
    pub fn skeleton(&self) -> String {
        self.segments.iter().map(|s| s.letter.as_char()).collect()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.segments.iter().map(|s| s.letter)
    }

    pub fn mark_count(&self) -> usize {
        self.segments.iter().map(|s| s.marks.len()).sum()
    }
}

impl fmt::Display for DiacritizedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.codepoints() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for DiacritizedWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_arabic(s)
    }
}

/// Parse Arabic text into letter segments. Each mark attaches to the nearest
/// preceding letter and keeps its input order.
pub fn parse_arabic(text: &str) -> Result<DiacritizedWord, ParseError> {
    let mut segments: Vec<Segment> = Vec::new();
    for (position, ch) in text.chars().enumerate() {
        if let Some(letter) = Letter::new(ch) {
            segments.push(Segment::bare(letter));
        } else if let Some(mark) = Mark::from_char(ch) {
            let seg = segments.last_mut().ok_or(ParseError::LeadingDiacritic { position })?;
            if !seg.marks.accepts(mark) {
                return Err(ParseError::OversizedCluster { position });
            }
            seg.marks.marks.push(mark);
        } else if is_nunation(ch) {
            if segments.is_empty() {
                return Err(ParseError::LeadingDiacritic { position });
            }
            return Err(ParseError::Nunation { position });
        } else {
            return Err(ParseError::UnsupportedCharacter { position, ch });
        }
    }
    Ok(DiacritizedWord { segments })
}

/// Letter skeleton of a word. Hamza-seated letters are kept as they are.
pub fn strip_diacritics(word: &DiacritizedWord) -> String {
    word.skeleton()
}

/// Remove every recognised diacritic from raw text without parsing it.
pub fn strip_marks_str(text: &str) -> String {
    text.chars().filter(|&c| !is_diacritic(c)).collect()
}
