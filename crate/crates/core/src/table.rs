//! Small helpers for the tab-separated data files shipped with the crate.

/// Parse a codepoint column: either `U+XXXX` or a single literal character.
pub fn parse_codepoint(field: &str) -> Option<char> {
    let field = field.trim();
    if let Some(hex) = field.strip_prefix("U+").or_else(|| field.strip_prefix("u+")) {
        return u32::from_str_radix(hex, 16).ok().and_then(char::from_u32);
    }
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers, split on tabs.
pub fn data_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('\t').collect()))
}
