/// Splits raw post text into lowercase word tokens.
///
/// Links (`http://`, `https://`, `t.co/`) and `@`-mentions are dropped whole,
/// `#` is stripped from hashtags so the tag body survives, and punctuation is
/// trimmed from both ends of every token.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().filter_map(clean_token).collect()
}

fn trim_edges(s: &str, keep: impl Fn(char) -> bool) -> &str {
    s.trim_matches(|c: char| !(c.is_alphanumeric() || keep(c)))
}

fn clean_token(raw: &str) -> Option<String> {
    let lower = raw.to_lowercase().replace(['\u{2019}', '\u{2018}'], "'");
    if lower.contains("http://") || lower.contains("https://") {
        return None;
    }
    let core = trim_edges(&lower, |c| c == '#' || c == '@');
    if core.starts_with("t.co/") || core.starts_with("http") || core.contains('@') {
        return None;
    }
    let body: String = core.chars().filter(|&c| c != '#').collect();
    let body = trim_edges(&body, |_| false);
    if body.is_empty() || body.starts_with("http") {
        return None;
    }
    Some(body.to_string())
}
