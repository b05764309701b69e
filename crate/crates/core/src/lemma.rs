//! Input spelling integrity for lemmas.
//!
//! A lemma may differ from its undiacritized input only by dropping a leading
//! determiner (ال), dropping the masculine plural ون after a nisba ya, and
//! restoring hamza within the alif, waw and ya equivalence classes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::script::{is_diacritic, DiacritizedWord, LetterClass, ALIF, LAM, NUN, WAW, YA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransformKind {
    DetRemoval,
    Plural3mpRemoval,
    HamzaNormalization,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::DetRemoval => "det-removal",
            TransformKind::Plural3mpRemoval => "plural-3mp-removal",
            TransformKind::HamzaNormalization => "hamza-normalization",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One letter replaced within its hamza class, at a lemma skeleton index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamzaSubstitution {
    pub position: usize,
    pub from: char,
    pub to: char,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrityReport {
    pub ok: bool,
    pub transforms: BTreeSet<TransformKind>,
    /// First lemma letter index that could not be matched; `None` when ok.
    pub diff: Option<usize>,
    pub hamza_substitutions: Vec<HamzaSubstitution>,
}

impl IntegrityReport {
    /// Human-readable transformation label, e.g. `DET+3MP → φ`.
    pub fn label(&self) -> String {
        if !self.ok {
            return "not reachable".to_string();
        }
        let mut parts = Vec::new();
        let det = self.transforms.contains(&TransformKind::DetRemoval);
        let plural = self.transforms.contains(&TransformKind::Plural3mpRemoval);
        match (det, plural) {
            (true, true) => parts.push("DET+3MP → φ".to_string()),
            (true, false) => parts.push("DET → φ".to_string()),
            (false, true) => parts.push("3MP → φ".to_string()),
            (false, false) => {}
        }
        if self.transforms.contains(&TransformKind::HamzaNormalization) {
            let bare_to_hamza = self
                .hamza_substitutions
                .iter()
                .all(|s| s.from == ALIF && matches!(s.to, '\u{0622}' | '\u{0623}' | '\u{0625}'));
            parts.push(if bare_to_hamza {
                "Bare Alif → Alif Hamza".to_string()
            } else {
                "Hamza normalization".to_string()
            });
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("; ")
        }
    }
}

fn hamza_class(c: char) -> Option<u8> {
    match c {
        '\u{0627}' | '\u{0623}' | '\u{0625}' | '\u{0622}' | '\u{0671}' => Some(0),
        '\u{0648}' | '\u{0624}' => Some(1),
        '\u{064A}' | '\u{0626}' => Some(2),
        _ => None,
    }
}

fn strip_det(s: &[char]) -> Option<&[char]> {
    match s {
        [ALIF, LAM, rest @ ..] if !rest.is_empty() => Some(rest),
        _ => None,
    }
}

fn strip_plural(s: &[char]) -> Option<&[char]> {
    match s {
        [head @ .., YA, WAW, NUN] if !head.is_empty() => Some(&s[..s.len() - 2]),
        _ => None,
    }
}

/// Candidate input forms in preference order, with the transforms that produced them.
fn candidates(input: &[char]) -> Vec<(Vec<char>, BTreeSet<TransformKind>)> {
    let mut out = vec![(input.to_vec(), BTreeSet::new())];
    if let Some(s) = strip_det(input) {
        out.push((s.to_vec(), BTreeSet::from([TransformKind::DetRemoval])));
    }
    if let Some(s) = strip_plural(input) {
        out.push((s.to_vec(), BTreeSet::from([TransformKind::Plural3mpRemoval])));
    }
    if let Some(s) = strip_det(input).and_then(strip_plural) {
        out.push((
            s.to_vec(),
            BTreeSet::from([TransformKind::DetRemoval, TransformKind::Plural3mpRemoval]),
        ));
    }
    out
}

/// Compare letter by letter. `Err` holds the first mismatching lemma index.
fn align(candidate: &[char], lemma: &[char]) -> Result<Vec<HamzaSubstitution>, usize> {
    let mut subs = Vec::new();
    for (i, (&a, &b)) in candidate.iter().zip(lemma).enumerate() {
        if a == b {
            continue;
        }
        match (hamza_class(a), hamza_class(b)) {
            (Some(x), Some(y)) if x == y => subs.push(HamzaSubstitution {
                position: i,
                from: a,
                to: b,
            }),
            _ => return Err(i),
        }
    }
    if candidate.len() != lemma.len() {
        return Err(candidate.len().min(lemma.len()));
    }
    Ok(subs)
}

/// Check that `lemma` spells the same letters as `input_skeleton` up to the
/// permitted lemmatization transforms. The smallest transform set wins; when
/// the input already matches, no transform is reported.
pub fn check_integrity(input_skeleton: &str, lemma: &DiacritizedWord) -> IntegrityReport {
    let input: Vec<char> = input_skeleton
        .chars()
        .filter(|&c| !is_diacritic(c) && !c.is_whitespace())
        .collect();
    let target: Vec<char> = lemma.skeleton().chars().collect();

    let mut best: Option<IntegrityReport> = None;
    let mut furthest = 0;
    for (cand, mut transforms) in candidates(&input) {
        match align(&cand, &target) {
            Ok(subs) => {
                if !subs.is_empty() {
                    transforms.insert(TransformKind::HamzaNormalization);
                }
                let better = best.as_ref().is_none_or(|b| transforms.len() < b.transforms.len());
                if better {
                    best = Some(IntegrityReport {
                        ok: true,
                        transforms,
                        diff: None,
                        hamza_substitutions: subs,
                    });
                }
            }
            Err(pos) => furthest = furthest.max(pos),
        }
    }
    best.unwrap_or(IntegrityReport {
        ok: false,
        transforms: BTreeSet::new(),
        diff: Some(furthest),
        hamza_substitutions: Vec::new(),
    })
}

/// Skeletons reachable from the input by the determiner and plural transforms,
/// identity first. Hamza variants are not enumerated.
pub fn derive_candidates(input_skeleton: &str) -> Vec<String> {
    let input: Vec<char> = input_skeleton.chars().collect();
    let mut out: Vec<String> = Vec::new();
    for (cand, _) in candidates(&input) {
        let s: String = cand.into_iter().collect();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// True when a lemma still begins with a bare alif + lam that is the
/// determiner: dropping those two letters leaves a lemma the input reaches
/// through determiner removal.
pub fn is_determiner_remnant(input_skeleton: &str, lemma: &DiacritizedWord) -> bool {
    let segs = lemma.segments();
    if segs.len() < 3 || segs[0].letter.class() != LetterClass::AlifBare || segs[1].letter.as_char() != LAM {
        return false;
    }
    let rest = DiacritizedWord::from_segments(segs[2..].to_vec());
    let report = check_integrity(input_skeleton, &rest);
    report.ok && report.transforms.contains(&TransformKind::DetRemoval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::parse_arabic;

    fn check(input: &str, lemma: &str) -> IntegrityReport {
        check_integrity(input, &parse_arabic(lemma).unwrap())
    }

    fn set(kinds: &[TransformKind]) -> BTreeSet<TransformKind> {
        kinds.iter().copied().collect()
    }

    #[test]
    fn determiner() {
        let r = check("الست", "سِتّ");
        assert!(r.ok);
        assert_eq!(r.transforms, set(&[TransformKind::DetRemoval]));
        assert_eq!(r.label(), "DET → φ");
    }

    #[test]
    fn hamza() {
        let r = check("الواس", "إِلْوَاس");
        assert!(r.ok);
        assert_eq!(r.transforms, set(&[TransformKind::HamzaNormalization]));
        assert_eq!(r.label(), "Bare Alif → Alif Hamza");
        assert_eq!(
            r.hamza_substitutions,
            vec![HamzaSubstitution {
                position: 0,
                from: 'ا',
                to: 'إ'
            }]
        );
    }

    #[test]
    fn determiner_and_plural() {
        let r = check("الجيبوتيون", "جِيبُوتِيّ");
        assert!(r.ok);
        assert_eq!(
            r.transforms,
            set(&[TransformKind::DetRemoval, TransformKind::Plural3mpRemoval])
        );
        assert_eq!(r.label(), "DET+3MP → φ");
    }

    #[test]
    fn unrelated() {
        let r = check("لندن", "بَرلِين");
        assert!(!r.ok);
        assert_eq!(r.diff, Some(0));
        assert!(r.transforms.is_empty());
    }

    #[test]
    fn identity_preferred() {
        let r = check("عمان", "عُمَان");
        assert!(r.ok);
        assert!(r.transforms.is_empty());
        assert_eq!(r.label(), "none");
    }

    #[test]
    fn oblique_plural_not_removed() {
        assert!(!check("جيبوتيين", "جِيبُوتِيّ").ok);
    }

    #[test]
    fn maqsura_not_interchangeable() {
        assert!(!check("موسي", "مُوسَى").ok);
    }

    #[test]
    fn candidates() {
        assert_eq!(
            derive_candidates("الجيبوتيون"),
            vec!["الجيبوتيون", "جيبوتيون", "الجيبوتي", "جيبوتي"]
        );
        assert_eq!(derive_candidates("ست"), vec!["ست"]);
        assert_eq!(derive_candidates("العجم"), vec!["العجم", "عجم"]);
    }

    #[test]
    fn diff_reports_furthest_match() {
        let r = check("الست", "سِتَّة");
        assert!(!r.ok);
        assert_eq!(r.diff, Some(2));
    }
}
