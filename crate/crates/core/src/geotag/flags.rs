use std::collections::BTreeSet;

const REGIONAL_A: u32 = 0x1F1E6;
const REGIONAL_Z: u32 = 0x1F1FF;

fn regional_letter(c: char) -> Option<char> {
    let cp = c as u32;
    (REGIONAL_A..=REGIONAL_Z)
        .contains(&cp)
        .then(|| char::from(b'A' + (cp - REGIONAL_A) as u8))
}

/// Every two-letter code spelled by consecutive Regional Indicator pairs,
/// read left to right. An indicator without a partner is ignored.
pub fn decode_flags(text: &str) -> Vec<String> {
    let mut codes = Vec::new();
    let mut pending: Option<char> = None;
    for c in text.chars() {
        match (regional_letter(c), pending) {
            (Some(second), Some(first)) => {
                codes.push([first, second].iter().collect());
                pending = None;
            }
            (Some(first), None) => pending = Some(first),
            (None, _) => pending = None,
        }
    }
    codes
}

/// Flag-emoji countries in `text` that belong to `allowed`.
pub fn detect_flag_emoji(text: &str, allowed: &[&str]) -> BTreeSet<String> {
    decode_flags(text)
        .into_iter()
        .filter(|c| allowed.contains(&c.as_str()))
        .collect()
}
