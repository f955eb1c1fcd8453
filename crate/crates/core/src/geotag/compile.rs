//! Builds a gazetteer TSV from a GeoNames-format export.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use super::{geo_tokens, EntryKind, GazetteerEntry, MatchMode, GAZETTEER_HEADER};
use crate::error::{Error, Result};
use crate::textprep::parse_term_list;

pub const BUNDLED_AMBIGUOUS: &str = include_str!("../../data/ambiguous_places.txt");
pub const BUNDLED_BLOCKED: &str = include_str!("../../data/blocked_places.txt");

const GEONAMES_COLUMNS: usize = 19;

/// The subset of a GeoNames row the compiler reads.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoNamesRow {
    pub name: String,
    pub ascii_name: String,
    pub alternates: Vec<String>,
    pub feature_class: String,
    pub feature_code: String,
    pub country: String,
    pub admin1: String,
    pub population: u64,
}

/// Reads a GeoNames export (19 tab-separated columns), keeping rows whose
/// country is in `countries`. Returns the rows and how many were skipped
/// for other countries.
pub fn parse_geonames(reader: impl BufRead, path: &Path, countries: &[String]) -> Result<(Vec<GeoNamesRow>, usize)> {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != GEONAMES_COLUMNS {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                reason: format!("expected {GEONAMES_COLUMNS} columns, found {}", cols.len()),
            });
        }
        if !countries.iter().any(|c| c == cols[8]) {
            skipped += 1;
            continue;
        }
        let population = if cols[14].is_empty() {
            0
        } else {
            cols[14].parse().map_err(|_| Error::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                reason: format!("bad population {:?}", cols[14]),
            })?
        };
        rows.push(GeoNamesRow {
            name: cols[1].to_string(),
            ascii_name: cols[2].to_string(),
            alternates: cols[3]
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
            feature_class: cols[6].to_string(),
            feature_code: cols[7].to_string(),
            country: cols[8].to_string(),
            admin1: cols[10].to_string(),
            population,
        });
    }
    Ok((rows, skipped))
}

#[derive(Debug, Clone)]
pub struct CompileOptions {
    pub countries: Vec<String>,
    pub min_population: u64,
    /// Lowercase words that may only match verbatim.
    pub ambiguous: HashSet<String>,
    /// Lowercase surfaces never emitted.
    pub blocked: HashSet<String>,
    pub stoplist: HashSet<String>,
}

impl CompileOptions {
    pub fn bundled(countries: Vec<String>, min_population: u64) -> Self {
        CompileOptions {
            countries,
            min_population,
            ambiguous: parse_term_list(BUNDLED_AMBIGUOUS),
            blocked: parse_term_list(BUNDLED_BLOCKED),
            stoplist: parse_term_list(crate::textprep::BUNDLED_STOPLIST),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CompileReport {
    pub rows: usize,
    pub other_country_rows: usize,
    pub small_cities: usize,
    pub blocked: usize,
    /// City surfaces dropped because they name a region of another country.
    pub cross_country: usize,
    pub per_country: BTreeMap<String, usize>,
}

/// Is `s` written like a short code: 2–5 capital letters, optionally dotted.
fn is_code(s: &str) -> bool {
    let letters = s.chars().filter(|c| c.is_ascii_alphabetic()).count();
    (2..=5).contains(&letters) && s.chars().all(|c| c.is_ascii_uppercase() || c == '.')
}

fn code_letters(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphabetic())
        .collect::<String>()
        .to_lowercase()
}

fn initials(name: &str) -> String {
    name.split_whitespace()
        .filter_map(|w| w.chars().next())
        .filter(char::is_ascii_alphabetic)
        .collect::<String>()
        .to_lowercase()
}

fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// City alternates worth keeping: "<name> <qualifier>", "<qualifier> <name>",
/// codes made of the name's leading initials ("NYC", "LA"), and for Chinese
/// cities the syllable-spaced spellings of the name ("wu han", "Xi'an").
fn keep_city_alternate(row: &GeoNamesRow, alt: &str, stoplist: &HashSet<String>) -> bool {
    let name = row.name.as_str();
    if is_code(alt) {
        let letters = code_letters(alt);
        return initials(name).starts_with(&letters) && name.split_whitespace().count() > 1;
    }
    alt.starts_with(&format!("{name} "))
        || alt.ends_with(&format!(" {name}"))
        || (row.country == "CN"
            && squash(alt) == squash(name)
            && !alt.split_whitespace().any(|t| stoplist.contains(&t.to_lowercase())))
}

struct Candidate {
    surface: String,
    kind: EntryKind,
    /// Curated country-level alias: exempt from the word filters.
    curated: bool,
}

fn candidates(row: &GeoNamesRow, opts: &CompileOptions) -> Option<Vec<Candidate>> {
    let code = row.feature_code.as_str();
    let (kind, curated) = match (row.feature_class.as_str(), code) {
        ("A", c) if c.starts_with("PCL") => (EntryKind::Country, true),
        ("A", "ADM1" | "ADM2") => (EntryKind::State, false),
        ("P", c) if c.starts_with("PPL") => (EntryKind::City, false),
        _ => return None,
    };
    let mut out = vec![Candidate {
        surface: row.name.clone(),
        kind,
        curated,
    }];
    if row.ascii_name != row.name && !row.ascii_name.is_empty() {
        out.push(Candidate {
            surface: row.ascii_name.clone(),
            kind,
            curated,
        });
    }
    for alt in &row.alternates {
        let keep = kind != EntryKind::City || keep_city_alternate(row, alt, &opts.stoplist);
        if keep {
            out.push(Candidate {
                surface: alt.clone(),
                kind: EntryKind::Alias,
                curated,
            });
        }
    }
    if code == "ADM1" && row.country == "US" && is_code(&row.admin1) {
        out.push(Candidate {
            surface: row.admin1.clone(),
            kind: EntryKind::Abbreviation,
            curated: false,
        });
    }
    Some(out)
}

/// Decides how a surface is stored, or `None` to drop it.
fn classify(c: &Candidate, opts: &CompileOptions) -> Option<(String, MatchMode, EntryKind)> {
    let surface = c.surface.trim();
    if geo_tokens(surface).is_empty() {
        return None;
    }
    let lower = surface.to_lowercase();
    if is_code(surface) {
        let letters = code_letters(surface);
        if !c.curated && (opts.stoplist.contains(&letters) || opts.ambiguous.contains(&letters)) {
            return None;
        }
        return Some((
            surface.to_string(),
            MatchMode::CaseSensitiveExact,
            EntryKind::Abbreviation,
        ));
    }
    if surface.chars().filter(|ch| ch.is_alphanumeric()).count() < 3 {
        return None;
    }
    if c.curated {
        return Some((lower, MatchMode::CaseInsensitive, c.kind));
    }
    if opts.stoplist.contains(&lower) {
        return None;
    }
    if opts.ambiguous.contains(&lower) {
        if !surface.starts_with(|ch: char| ch.is_uppercase()) {
            return None;
        }
        return Some((surface.to_string(), MatchMode::CaseSensitiveExact, c.kind));
    }
    Some((lower, MatchMode::CaseInsensitive, c.kind))
}

/// Compiles dictionary entries from GeoNames rows: countries and first/second
/// level divisions with all their names, cities at or above the population
/// threshold with their names and anchored alternates.
pub fn compile_gazetteer(rows: &[GeoNamesRow], opts: &CompileOptions) -> (Vec<GazetteerEntry>, CompileReport) {
    let mut report = CompileReport {
        rows: rows.len(),
        ..Default::default()
    };
    let mut admin_names: HashMap<String, HashSet<String>> = HashMap::new();
    let mut chosen: Vec<(Candidate, &GeoNamesRow)> = Vec::new();
    for row in rows {
        if !opts.countries.contains(&row.country) {
            report.other_country_rows += 1;
            continue;
        }
        if row.feature_class == "P" && row.population < opts.min_population {
            report.small_cities += 1;
            continue;
        }
        let Some(cands) = candidates(row, opts) else {
            continue;
        };
        for c in cands {
            if row.feature_class == "A" {
                admin_names
                    .entry(c.surface.to_lowercase())
                    .or_default()
                    .insert(row.country.clone());
            }
            chosen.push((c, row));
        }
    }

    let mut best: BTreeMap<(String, MatchMode, String), EntryKind> = BTreeMap::new();
    for (c, row) in &chosen {
        let lower = c.surface.trim().to_lowercase();
        if opts.blocked.contains(&squash(&lower)) {
            report.blocked += 1;
            continue;
        }
        if row.feature_class == "P" {
            let elsewhere = admin_names
                .get(&lower)
                .is_some_and(|cs| cs.iter().any(|cc| *cc != row.country));
            if elsewhere {
                report.cross_country += 1;
                continue;
            }
        }
        let Some((surface, mode, kind)) = classify(c, opts) else {
            continue;
        };
        best.entry((row.country.clone(), mode, surface))
            .and_modify(|k| *k = (*k).min(kind))
            .or_insert(kind);
    }

    let order = |country: &str| opts.countries.iter().position(|c| c == country).unwrap_or(usize::MAX);
    let mut entries: Vec<GazetteerEntry> = best
        .into_iter()
        .map(|((country, match_mode, surface), kind)| GazetteerEntry {
            surface,
            country,
            match_mode,
            kind,
        })
        .collect();
    entries.sort_by(|a, b| {
        order(&a.country)
            .cmp(&order(&b.country))
            .then(a.kind.cmp(&b.kind))
            .then(a.surface.cmp(&b.surface))
            .then(a.match_mode.cmp(&b.match_mode))
    });
    for e in &entries {
        *report.per_country.entry(e.country.clone()).or_default() += 1;
    }
    (entries, report)
}

/// Renders compiled entries as gazetteer TSV with a provenance header.
pub fn gazetteer_tsv(entries: &[GazetteerEntry], opts: &CompileOptions, source: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# compiled from {source}");
    let _ = writeln!(
        out,
        "# countries={} min_population={}",
        opts.countries.join(","),
        opts.min_population
    );
    let counts: Vec<String> = opts
        .countries
        .iter()
        .map(|c| format!("{c}={}", entries.iter().filter(|e| &e.country == c).count()))
        .collect();
    let _ = writeln!(out, "# entries total={} {}", entries.len(), counts.join(" "));
    out.push_str(GAZETTEER_HEADER);
    out.push('\n');
    for e in entries {
        out.push_str(&e.tsv_row());
        out.push('\n');
    }
    out
}
