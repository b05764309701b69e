//! Splitting a completion into one Arabic lemma per line.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResponseError {
    #[error("expected {expected} lines, got {got}")]
    LineCountMismatch { expected: usize, got: usize },
    #[error("line {line} has non-Arabic content: {text:?}")]
    NonArabicPayload { line: usize, text: String },
}

fn is_arabic_script(c: char) -> bool {
    matches!(c,
        '\u{0600}'..='\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08FF}'
        | '\u{FB50}'..='\u{FDFF}'
        | '\u{FE70}'..='\u{FEFF}')
}

/// Directional and zero-width format characters that models sometimes emit.
fn is_invisible(c: char) -> bool {
    matches!(c, '\u{200B}'..='\u{200F}' | '\u{202A}'..='\u{202E}' | '\u{2066}'..='\u{2069}' | '\u{FEFF}')
}

/// Exactly `expected` non-empty lines, each consisting of Arabic-script text.
pub fn parse_response(text: &str, expected: usize) -> Result<Vec<String>, ResponseError> {
    let lines: Vec<String> = text
        .lines()
        .map(|l| l.chars().filter(|&c| !is_invisible(c)).collect::<String>())
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    for (i, l) in lines.iter().enumerate() {
        if !l.chars().all(|c| is_arabic_script(c) || c.is_whitespace()) {
            return Err(ResponseError::NonArabicPayload {
                line: i + 1,
                text: l.clone(),
            });
        }
    }
    if lines.len() != expected {
        return Err(ResponseError::LineCountMismatch {
            expected,
            got: lines.len(),
        });
    }
    Ok(lines)
}
