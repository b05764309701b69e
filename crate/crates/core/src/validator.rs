//! Well-formedness rules for maximally diacritized lemmas.
//!
//! Every rule is checked and every violation reported; nothing short-circuits.
//! Reports are sorted by position, then rule code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lemma;
use crate::script::{DiacritizedWord, LetterClass, Mark, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleCode {
    /// Vowel mark written before shadda.
    R1,
    /// Alif, waw or ya in a context where it is neither a valid long vowel nor a glide.
    R2,
    /// Final letter of a lemma carries a short vowel or sukun.
    R3,
    /// Non-final consonant without any mark.
    R4,
    /// Alif madda followed by fatha.
    R5,
    /// Alif with hamza below lacking kasra.
    R6,
    /// Letter outside the Arabic-language alphabet.
    R7,
    /// Lemma still starts with a determiner.
    R8,
}

impl RuleCode {
    pub const ALL: [RuleCode; 8] = [
        RuleCode::R1,
        RuleCode::R2,
        RuleCode::R3,
        RuleCode::R4,
        RuleCode::R5,
        RuleCode::R6,
        RuleCode::R7,
        RuleCode::R8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleCode::R1 => "R1",
            RuleCode::R2 => "R2",
            RuleCode::R3 => "R3",
            RuleCode::R4 => "R4",
            RuleCode::R5 => "R5",
            RuleCode::R6 => "R6",
            RuleCode::R7 => "R7",
            RuleCode::R8 => "R8",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleCode::R1 => "ClusterOrder",
            RuleCode::R2 => "LongVowelContext",
            RuleCode::R3 => "FinalShortVowel",
            RuleCode::R4 => "MissingMark",
            RuleCode::R5 => "MaddaFollowedByFatha",
            RuleCode::R6 => "HamzaBelowVowel",
            RuleCode::R7 => "ForeignLetter",
            RuleCode::R8 => "LeadingDeterminer",
        }
    }
}

impl fmt::Display for RuleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleCode::ALL
            .into_iter()
            .find(|c| c.as_str() == s || c.name() == s)
            .ok_or_else(|| format!("unknown rule code {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub code: RuleCode,
    /// Segment index.
    pub position: usize,
    pub message: String,
}

impl Violation {
    fn new(code: RuleCode, position: usize, message: impl Into<String>) -> Violation {
        Violation {
            code,
            position,
            message: message.into(),
        }
    }

    /// `code<TAB>position<TAB>message`
    pub fn report_line(&self) -> String {
        format!("{}\t{}\t{}", self.code, self.position, self.message)
    }
}

/// Lemma mode enables the final-letter and determiner rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ValidationProfile {
    #[default]
    Lemma,
    Surface,
}

impl FromStr for ValidationProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemma" => Ok(ValidationProfile::Lemma),
            "surface" => Ok(ValidationProfile::Surface),
            _ => Err(format!("unknown profile {s:?} (expected lemma or surface)")),
        }
    }
}

fn vowel_at(segments: &[Segment], i: usize) -> Option<Mark> {
    segments.get(i).and_then(|s| s.marks.vowel())
}

/// Bare alif or madda written without marks after the first letter: a long /a:/.
fn is_long_alif(segments: &[Segment], i: usize) -> bool {
    let s = &segments[i];
    s.marks.is_empty()
        && match s.letter.class() {
            LetterClass::AlifBare => i > 0,
            LetterClass::AlifMadda => true,
            _ => false,
        }
}

/// Letters that need no mark of their own: alif as a long vowel or carrier,
/// and unmarked non-initial waw, ya or alif maqsura acting as long vowels or
/// final glides. Their context is checked by R2 instead of R4, and the
/// normalizer never gives them a sukun.
pub(crate) fn is_mark_exempt(segments: &[Segment], i: usize) -> bool {
    let s = &segments[i];
    match s.letter.class() {
        LetterClass::AlifBare | LetterClass::AlifMadda | LetterClass::AlifWasla => true,
        LetterClass::Waw | LetterClass::Ya | LetterClass::AlifMaqsura => i > 0 && s.marks.is_empty(),
        _ => false,
    }
}

fn check_long_vowels(segments: &[Segment], profile: ValidationProfile, out: &mut Vec<Violation>) {
    let n = segments.len();
    for (i, seg) in segments.iter().enumerate() {
        let marks = &seg.marks;
        let final_letter = i + 1 == n;
        let prev_vowel = i.checked_sub(1).and_then(|p| vowel_at(segments, p));
        let after_long_alif = i > 0 && is_long_alif(segments, i - 1);
        match seg.letter.class() {
            LetterClass::AlifBare | LetterClass::AlifMaqsura => {
                if i == 0 {
                    if marks.vowel().is_none() {
                        out.push(Violation::new(
                            RuleCode::R2,
                            i,
                            "word-initial alif must carry a short vowel",
                        ));
                    }
                } else if !marks.is_empty() {
                    out.push(Violation::new(
                        RuleCode::R2,
                        i,
                        "alif used as a long vowel must not carry a mark",
                    ));
                } else if prev_vowel != Some(Mark::Fatha) {
                    out.push(Violation::new(RuleCode::R2, i, "long alif must be preceded by fatha"));
                }
            }
            LetterClass::AlifWasla => {
                if profile == ValidationProfile::Lemma {
                    out.push(Violation::new(RuleCode::R2, i, "alif wasla is not used in lemmas"));
                } else if i > 0 {
                    out.push(Violation::new(RuleCode::R2, i, "alif wasla may only start a word"));
                }
            }
            class @ (LetterClass::Waw | LetterClass::Ya) => {
                let (matching, name) = if class == LetterClass::Waw {
                    (Mark::Damma, "waw")
                } else {
                    (Mark::Kasra, "ya")
                };
                if marks.vowel().is_some() || i == 0 {
                    // consonantal use
                    continue;
                }
                let ok = if marks.is_empty() {
                    prev_vowel == Some(matching)
                        || (final_letter && (prev_vowel == Some(Mark::Fatha) || after_long_alif))
                } else if marks.has_sukun() {
                    prev_vowel == Some(Mark::Fatha) || segments[i - 1].marks.has_sukun() || after_long_alif
                } else if marks.marks() == [Mark::Shadda] {
                    final_letter || prev_vowel == Some(Mark::Fatha)
                } else {
                    true
                };
                if !ok {
                    let msg = if marks.is_empty() {
                        format!(
                            "long {name} must be preceded by {}, or be a final glide after fatha",
                            matching.name()
                        )
                    } else {
                        format!("{name} glide must be preceded by fatha")
                    };
                    out.push(Violation::new(RuleCode::R2, i, msg));
                }
            }
            _ => {}
        }
    }
}

/// Check a word against the rule set. R8 needs the input skeleton and is only
/// produced by [`validate_with_input`].
pub fn validate(word: &DiacritizedWord, profile: ValidationProfile) -> Vec<Violation> {
    let segments = word.segments();
    let n = segments.len();
    let mut out = Vec::new();

    for (i, seg) in segments.iter().enumerate() {
        if !seg.marks.is_canonical() {
            out.push(Violation::new(RuleCode::R1, i, "short vowel written before shadda"));
        }
    }

    check_long_vowels(segments, profile, &mut out);

    if profile == ValidationProfile::Lemma {
        if let Some(last) = segments.last() {
            let m = &last.marks;
            if m.vowel().is_some() || m.has_sukun() {
                out.push(Violation::new(
                    RuleCode::R3,
                    n - 1,
                    "final letter cannot carry a short vowel or sukun",
                ));
            }
        }
    }

    for (i, seg) in segments.iter().enumerate() {
        let final_letter = i + 1 == n;
        let class = seg.letter.class();
        let hamza_below_rule = class == LetterClass::AlifHamzaBelow && !final_letter;
        if hamza_below_rule && seg.marks.vowel() != Some(Mark::Kasra) {
            out.push(Violation::new(
                RuleCode::R6,
                i,
                "alif with hamza below must carry kasra",
            ));
        } else if !final_letter && seg.marks.is_empty() && !is_mark_exempt(segments, i) {
            out.push(Violation::new(
                RuleCode::R4,
                i,
                format!("letter {} has no diacritic", seg.letter),
            ));
        }
        if class == LetterClass::AlifMadda && seg.marks.contains(Mark::Fatha) {
            out.push(Violation::new(
                RuleCode::R5,
                i,
                "alif madda cannot be followed by fatha",
            ));
        }
        if class == LetterClass::Foreign {
            out.push(Violation::new(
                RuleCode::R7,
                i,
                format!("letter {} is not part of the Arabic alphabet", seg.letter),
            ));
        }
    }

    sort_violations(&mut out);
    out
}

/// [`validate`] plus the determiner check against the undiacritized input.
pub fn validate_with_input(word: &DiacritizedWord, profile: ValidationProfile, input_skeleton: &str) -> Vec<Violation> {
    let mut out = validate(word, profile);
    if profile == ValidationProfile::Lemma && lemma::is_determiner_remnant(input_skeleton, word) {
        out.push(Violation::new(RuleCode::R8, 0, "lemma keeps the definite article"));
        sort_violations(&mut out);
    }
    out
}

fn sort_violations(v: &mut [Violation]) {
    v.sort_by_key(|x| (x.position, x.code));
}

/// Render a report, one violation per line.
pub fn report(violations: &[Violation]) -> String {
    violations.iter().map(|v| format!("{}\n", v.report_line())).collect()
}
