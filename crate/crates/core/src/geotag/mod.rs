//! Country tagging by gazetteer lookup and flag emoji.

mod compile;
mod flags;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

pub use compile::{
    compile_gazetteer, gazetteer_tsv, parse_geonames, CompileOptions, CompileReport, GeoNamesRow, BUNDLED_AMBIGUOUS,
    BUNDLED_BLOCKED,
};
pub use flags::{decode_flags, detect_flag_emoji};

use crate::corpus::Diagnostic;
use crate::error::{Error, Result};
use crate::textprep::Document;

/// USA, China, UK, Canada.
pub const TARGET_COUNTRIES: [&str; 4] = ["US", "CN", "GB", "CA"];

pub const BUNDLED_GAZETTEER: &str = include_str!("../../data/gazetteer.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchMode {
    CaseInsensitive,
    CaseSensitiveExact,
}

impl MatchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMode::CaseInsensitive => "case_insensitive",
            MatchMode::CaseSensitiveExact => "case_sensitive_exact",
        }
    }
}

impl FromStr for MatchMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "case_insensitive" => Ok(MatchMode::CaseInsensitive),
            "case_sensitive_exact" => Ok(MatchMode::CaseSensitiveExact),
            _ => Err(format!("unknown match mode {s:?}")),
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryKind {
    Country,
    State,
    City,
    Abbreviation,
    Alias,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Country => "country",
            EntryKind::State => "state",
            EntryKind::City => "city",
            EntryKind::Abbreviation => "abbreviation",
            EntryKind::Alias => "alias",
        }
    }
}

impl FromStr for EntryKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "country" => Ok(EntryKind::Country),
            "state" => Ok(EntryKind::State),
            "city" => Ok(EntryKind::City),
            "abbreviation" => Ok(EntryKind::Abbreviation),
            "alias" => Ok(EntryKind::Alias),
            _ => Err(format!("unknown kind {s:?}")),
        }
    }
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GazetteerEntry {
    /// Lowercase for case-insensitive entries, verbatim otherwise.
    pub surface: String,
    pub country: String,
    pub match_mode: MatchMode,
    pub kind: EntryKind,
}

impl GazetteerEntry {
    pub fn new(surface: &str, country: &str, match_mode: MatchMode, kind: EntryKind) -> Self {
        let surface = match match_mode {
            MatchMode::CaseInsensitive => surface.to_lowercase(),
            MatchMode::CaseSensitiveExact => surface.to_string(),
        };
        GazetteerEntry {
            surface,
            country: country.to_string(),
            match_mode,
            kind,
        }
    }

    pub fn tsv_row(&self) -> String {
        format!("{}\t{}\t{}\t{}", self.surface, self.country, self.match_mode, self.kind)
    }
}

pub const GAZETTEER_HEADER: &str = "surface\tcountry_code\tmatch_mode\tkind";

/// Splits text into place-name tokens: whitespace separated, outer
/// punctuation trimmed, trailing possessive removed, case kept. URLs and
/// @-mentions are skipped.
pub fn geo_tokens(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .filter(|t| !t.starts_with('@') && !t.contains("://") && !t.starts_with("www."))
        .map(|t| {
            let t = t.trim_matches(|c: char| !c.is_alphanumeric());
            let t = t
                .strip_suffix("'s")
                .or_else(|| t.strip_suffix("\u{2019}s"))
                .unwrap_or(t);
            t.trim_end_matches(|c: char| !c.is_alphanumeric())
        })
        .filter(|t| !t.is_empty())
        .collect()
}

#[derive(Debug, Default, Clone)]
struct TrieNode {
    children: HashMap<String, usize>,
    countries: BTreeSet<String>,
}

/// Token trie; node 0 is the root.
#[derive(Debug, Clone)]
struct Trie {
    nodes: Vec<TrieNode>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            nodes: vec![TrieNode::default()],
        }
    }

    fn insert(&mut self, tokens: &[String], country: &str) {
        let mut at = 0;
        for t in tokens {
            at = match self.nodes[at].children.get(t) {
                Some(&next) => next,
                None => {
                    self.nodes.push(TrieNode::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[at].children.insert(t.clone(), next);
                    next
                }
            };
        }
        self.nodes[at].countries.insert(country.to_string());
    }

    /// Longest surface starting at `tokens[0]`: (token count, countries).
    fn longest<'a, S: AsRef<str>>(&'a self, tokens: &[S]) -> Option<(usize, &'a BTreeSet<String>)> {
        let mut at = 0;
        let mut best = None;
        for (i, t) in tokens.iter().enumerate() {
            match self.nodes[at].children.get(t.as_ref()) {
                Some(&next) => at = next,
                None => break,
            }
            if !self.nodes[at].countries.is_empty() {
                best = Some((i + 1, &self.nodes[at].countries));
            }
        }
        best
    }
}

/// An immutable, indexed place-name dictionary.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
    folded: Trie,
    exact: Trie,
    digest: String,
}

impl Gazetteer {
    /// Indexes `entries`, collapsing duplicates. Entries whose surface has no
    /// tokens under [`geo_tokens`] are rejected.
    pub fn from_entries(entries: impl IntoIterator<Item = GazetteerEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        let mut folded = Trie::new();
        let mut exact = Trie::new();
        for e in entries {
            if !seen.insert((e.surface.clone(), e.country.clone(), e.match_mode)) {
                continue;
            }
            let tokens: Vec<String> = geo_tokens(&e.surface).into_iter().map(str::to_string).collect();
            if tokens.is_empty() {
                return Err(Error::Config(format!(
                    "gazetteer surface {:?} has no matchable token",
                    e.surface
                )));
            }
            match e.match_mode {
                MatchMode::CaseInsensitive => folded.insert(&tokens, &e.country),
                MatchMode::CaseSensitiveExact => exact.insert(&tokens, &e.country),
            }
            kept.push(e);
        }
        if kept.is_empty() {
            return Err(Error::Config("gazetteer has no entries".into()));
        }
        let mut hasher = Sha256::new();
        for e in &kept {
            hasher.update(e.tsv_row().as_bytes());
            hasher.update(b"\n");
        }
        Ok(Gazetteer {
            entries: kept,
            folded,
            exact,
            digest: hex::encode(hasher.finalize()),
        })
    }

    pub fn bundled() -> Self {
        parse_gazetteer(BUNDLED_GAZETTEER, Path::new("data/gazetteer.tsv"))
            .expect("bundled gazetteer is valid")
            .0
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count_for(&self, country: &str) -> usize {
        self.entries.iter().filter(|e| e.country == country).count()
    }

    /// SHA-256 over the collapsed entries in load order.
    pub fn digest(&self) -> &str {
        &self.digest
    }
}

/// Parses gazetteer TSV. Rows for countries outside [`TARGET_COUNTRIES`] are
/// skipped with a diagnostic; any other malformed row is fatal.
pub fn parse_gazetteer(content: &str, path: &Path) -> Result<(Gazetteer, Vec<Diagnostic>)> {
    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    let malformed = |line: usize, reason: String| Error::Malformed {
        path: path.to_path_buf(),
        line,
        reason,
    };
    for (i, raw) in content.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') || raw == GAZETTEER_HEADER {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        let [surface, country, mode, kind] = cols[..] else {
            return Err(malformed(
                line,
                format!("expected 4 tab-separated columns, found {}", cols.len()),
            ));
        };
        if surface.trim().is_empty() {
            return Err(malformed(line, "empty surface".into()));
        }
        if country.len() != 2 || !country.bytes().all(|b| b.is_ascii_uppercase()) {
            return Err(malformed(line, format!("bad country code {country:?}")));
        }
        let mode: MatchMode = mode.parse().map_err(|e| malformed(line, e))?;
        let kind: EntryKind = kind.parse().map_err(|e| malformed(line, e))?;
        if !TARGET_COUNTRIES.contains(&country) {
            diagnostics.push(Diagnostic {
                line,
                reason: format!("country {country} is not a target country; row skipped"),
            });
            continue;
        }
        entries.push(GazetteerEntry::new(surface.trim(), country, mode, kind));
    }
    if entries.is_empty() {
        return Err(Error::Malformed {
            path: path.to_path_buf(),
            line: 0,
            reason: "gazetteer has no entries".into(),
        });
    }
    let gazetteer = Gazetteer::from_entries(entries).map_err(|e| malformed(0, e.to_string()))?;
    Ok((gazetteer, diagnostics))
}

pub fn load_gazetteer(path: &Path) -> Result<(Gazetteer, Vec<Diagnostic>)> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gazetteer(&content, path)
}

/// Gazetteer countries named in `text` (longest match first, case rules per
/// entry) plus target-country flag emoji.
pub fn match_locations(text: &str, g: &Gazetteer) -> BTreeSet<String> {
    let tokens = geo_tokens(text);
    let lowered: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut found = BTreeSet::new();
    let mut i = 0;
    while i < tokens.len() {
        let a = g.folded.longest(&lowered[i..]);
        let b = g.exact.longest(&tokens[i..]);
        let len = match (a, b) {
            (Some((la, ca)), Some((lb, cb))) => {
                if la >= lb {
                    found.extend(ca.iter().cloned());
                }
                if lb >= la {
                    found.extend(cb.iter().cloned());
                }
                la.max(lb)
            }
            (Some((l, c)), None) | (None, Some((l, c))) => {
                found.extend(c.iter().cloned());
                l
            }
            (None, None) => 1,
        };
        i += len;
    }
    found.extend(detect_flag_emoji(text, &TARGET_COUNTRIES));
    found
}

pub fn assign_countries(mut doc: Document, matches: BTreeSet<String>) -> Document {
    doc.countries = matches;
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn small() -> Gazetteer {
        use EntryKind::*;
        use MatchMode::*;
        Gazetteer::from_entries([
            GazetteerEntry::new("York", "GB", CaseInsensitive, City),
            GazetteerEntry::new("New York", "US", CaseInsensitive, State),
            GazetteerEntry::new("US", "US", CaseSensitiveExact, Abbreviation),
            GazetteerEntry::new("London", "GB", CaseInsensitive, City),
            GazetteerEntry::new("Toronto", "CA", CaseInsensitive, City),
            GazetteerEntry::new("Birmingham", "GB", CaseInsensitive, City),
            GazetteerEntry::new("Birmingham", "US", CaseInsensitive, City),
        ])
        .unwrap()
    }

    #[test]
    fn geo_tokens_trim_and_possessive() {
        assert_eq!(
            geo_tokens("(New York's) mayor, @NYC http://x.co/London #Toronto!"),
            ["New", "York", "mayor", "Toronto"]
        );
    }

    #[test]
    fn new_york_example() {
        assert_eq!(match_locations("if a tweet discusses New York", &small()), set(&["US"]));
    }

    #[test]
    fn longest_match_consumes_tokens() {
        let g = small();
        assert_eq!(match_locations("new york", &g), set(&["US"]));
        assert_eq!(match_locations("york", &g), set(&["GB"]));
    }

    #[test]
    fn abbreviation_is_case_sensitive() {
        let g = small();
        assert!(match_locations("us against the world", &g).is_empty());
        assert_eq!(match_locations("the US response", &g), set(&["US"]));
        assert!(match_locations("Us too", &g).is_empty());
    }

    #[test]
    fn union_of_matches() {
        let g = small();
        assert_eq!(match_locations("flight from London to Toronto", &g), set(&["GB", "CA"]));
        assert_eq!(match_locations("Birmingham", &g), set(&["GB", "US"]));
    }

    #[test]
    fn flags_join_the_union() {
        assert_eq!(
            match_locations("London \u{1F1E8}\u{1F1F3}", &small()),
            set(&["CN", "GB"])
        );
    }

    #[test]
    fn position_independent() {
        let g = small();
        let a = match_locations("Stay safe. Toronto cases rise. Wash hands.", &g);
        let b = match_locations("Wash hands. Stay safe. Toronto cases rise.", &g);
        assert_eq!(a, b);
    }

    #[test]
    fn duplicates_collapse() {
        use EntryKind::*;
        use MatchMode::*;
        let g = Gazetteer::from_entries([
            GazetteerEntry::new("Leeds", "GB", CaseInsensitive, City),
            GazetteerEntry::new("LEEDS", "GB", CaseInsensitive, Alias),
        ])
        .unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn parse_rejects_and_skips() {
        let p = Path::new("g.tsv");
        assert!(parse_gazetteer("", p).is_err());
        assert!(parse_gazetteer("# only a comment\n", p).is_err());
        let err = parse_gazetteer("london\tGB\tcase_insensitive\n", p).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 1, .. }), "{err}");
        let err = parse_gazetteer("# c\nlondon\tGB\tfuzzy\tcity\n", p).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 2, .. }), "{err}");

        let text =
            format!("{GAZETTEER_HEADER}\nparis\tFR\tcase_insensitive\tcity\nLondon\tGB\tcase_insensitive\tcity\n");
        let (g, diags) = parse_gazetteer(&text, p).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.entries()[0].surface, "london");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].line, 2);
    }

    #[test]
    fn bundled_dictionary_size() {
        let g = Gazetteer::bundled();
        assert!(g.len() >= 2000, "{}", g.len());
        assert!(g.count_for("US") >= 400, "{}", g.count_for("US"));
        let header = BUNDLED_GAZETTEER.lines().find(|l| l.starts_with("# entries")).unwrap();
        assert!(header.contains(&format!("total={} ", g.len())), "{header}");
        assert!(header.contains(&format!("US={}", g.count_for("US"))), "{header}");
        for c in TARGET_COUNTRIES {
            assert!(g.count_for(c) > 0, "{c}");
        }
    }

    #[test]
    fn every_bundled_entry_round_trips() {
        let g = Gazetteer::bundled();
        for e in g.entries() {
            let text = format!("latest news from {} today", e.surface);
            let found = match_locations(&text, &g);
            assert!(found.contains(&e.country), "{:?} -> {found:?}", e);
        }
    }

    #[test]
    fn bundled_case_rules() {
        let g = Gazetteer::bundled();
        assert!(match_locations("us against the world", &g).is_empty());
        assert_eq!(match_locations("cases in the US rise", &g), set(&["US"]));
        assert_eq!(match_locations("if a tweet discusses New York", &g), set(&["US"]));
        assert!(match_locations("reading a book", &g).is_empty());
        assert!(match_locations("corona cases", &g).is_empty());
    }

    #[test]
    fn assign_replaces_countries() {
        let doc = Document::from_term_ids("a", 1, [0]);
        let doc = assign_countries(doc, set(&["GB", "CA"]));
        assert_eq!(doc.countries, set(&["CA", "GB"]));
        assert!(assign_countries(doc, BTreeSet::new()).countries.is_empty());
    }
}
