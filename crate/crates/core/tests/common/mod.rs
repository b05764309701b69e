//! Shared generators for the integration and acceptance tests.
#![allow(dead_code)]

use ardiac::bench::prompt::bundled_examples;
use ardiac::{from_hsb, parse_arabic, to_hsb, validate, DiacritizedWord, RuleCode, ValidationProfile};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXABLE: [RuleCode; 6] = [
    RuleCode::R1,
    RuleCode::R3,
    RuleCode::R4,
    RuleCode::R5,
    RuleCode::R6,
    RuleCode::R7,
];
const FOREIGN: [(char, char); 7] = [
    ('b', 'p'),
    ('f', 'v'),
    ('k', 'g'),
    ('j', 'č'),
    ('z', 'ž'),
    ('y', 'ỳ'),
    ('h', 'ḣ'),
];

/// Few-shot outputs that are clean lemmas, as HSB strings.
pub fn valid_lemmas() -> Vec<String> {
    bundled_examples()
        .iter()
        .filter_map(|ex| {
            let w = parse_arabic(&ex.output).ok()?;
            validate(&w, ValidationProfile::Lemma)
                .is_empty()
                .then(|| to_hsb(&w).into_string())
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum Defect {
    ForeignLetter,
    VowelBeforeShadda,
    MissingFatha,
    MissingKasraOnHamza,
    FathaAfterMadda,
    MissingSukun,
    FinalVowel,
}

const DEFECTS: [Defect; 7] = [
    Defect::ForeignLetter,
    Defect::VowelBeforeShadda,
    Defect::MissingFatha,
    Defect::MissingKasraOnHamza,
    Defect::FathaAfterMadda,
    Defect::MissingSukun,
    Defect::FinalVowel,
];

fn positions(chars: &[char], pred: impl Fn(usize) -> bool) -> Vec<usize> {
    (0..chars.len()).filter(|&i| pred(i)).collect()
}

/// Apply one defect somewhere in `hsb`; None when the word has no site for it.
fn inject(hsb: &str, defect: Defect, rng: &mut ChaCha8Rng) -> Option<String> {
    let mut c: Vec<char> = hsb.chars().collect();
    let n = c.len();
    let is_vowel = |ch: char| matches!(ch, 'a' | 'u' | 'i');
    match defect {
        Defect::ForeignLetter => {
            let sites = positions(&c, |i| FOREIGN.iter().any(|&(a, _)| a == c[i]));
            let &i = sites.choose(rng)?;
            c[i] = FOREIGN.iter().find(|&&(a, _)| a == c[i])?.1;
        }
        Defect::VowelBeforeShadda => {
            let sites = positions(&c, |i| i + 1 < n && c[i] == '~' && is_vowel(c[i + 1]));
            let &i = sites.choose(rng)?;
            c.swap(i, i + 1);
        }
        Defect::MissingFatha => {
            let sites = positions(&c, |i| i + 1 < n && c[i] == 'a' && c[i + 1] == 'A');
            let &i = sites.choose(rng)?;
            c.remove(i);
        }
        Defect::MissingKasraOnHamza => {
            let sites = positions(&c, |i| i + 1 < n && c[i] == 'Ă' && c[i + 1] == 'i');
            let &i = sites.choose(rng)?;
            c.remove(i + 1);
        }
        Defect::FathaAfterMadda => {
            let sites = positions(&c, |i| c[i] == 'Ā' && c.get(i + 1) != Some(&'a'));
            let &i = sites.choose(rng)?;
            c.insert(i + 1, 'a');
        }
        Defect::MissingSukun => {
            let sites = positions(&c, |i| c[i] == '.');
            let &i = sites.choose(rng)?;
            c.remove(i);
        }
        Defect::FinalVowel => {
            if c.last().is_some_and(|&l| is_vowel(l) || l == '.') {
                return None;
            }
            c.push(*['a', 'u', 'i', '.'].choose(rng)?);
        }
    }
    Some(c.into_iter().collect())
}

/// 500 defective words, each carrying one to three injected defects.
pub fn defective_words(seed: u64) -> Vec<(String, String)> {
    let lemmas = valid_lemmas();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 500 {
        let base = lemmas.choose(&mut rng).unwrap().clone();
        let mut word = base.clone();
        for _ in 0..rng.random_range(1..=3) {
            let defect = *DEFECTS.choose(&mut rng).unwrap();
            if let Some(w) = inject(&word, defect, &mut rng) {
                word = w;
            }
        }
        if word != base {
            out.push((base, word));
        }
    }
    out
}

pub const HSB_LETTERS: &[&str] = &[
    "'", "Ā", "Â", "ŵ", "Ă", "ŷ", "A", "b", "ħ", "t", "θ", "j", "H", "x", "d", "ð", "r", "z", "s", "š", "S", "D", "T",
    "Ď", "ς", "γ", "f", "q", "k", "l", "m", "n", "h", "w", "y", "ý",
];
pub const HSB_CLUSTERS: &[&str] = &["", "a", "u", "i", ".", "~", "~a", "~u", "~i"];

/// Random word of one to `max_len` letters, each with a random mark cluster.
pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> DiacritizedWord {
    let n = rng.random_range(1..=max_len);
    let hsb: String = (0..n)
        .map(|_| {
            format!(
                "{}{}",
                HSB_LETTERS.choose(rng).unwrap(),
                HSB_CLUSTERS.choose(rng).unwrap()
            )
        })
        .collect();
    from_hsb(&hsb).expect("generated HSB is well-formed")
}

/// Random Latin-script name of one to `max_len` characters.
pub fn random_gloss(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    let n = rng.random_range(1..=max_len);
    let mut s: String = (0..n).map(|_| *ALPHABET.choose(rng).unwrap() as char).collect();
    s[..1].make_ascii_uppercase();
    s
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
