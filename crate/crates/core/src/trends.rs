//! Weekly topic counts, worldwide and per country, and their renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::corpus::StudyWindow;
use crate::error::{Error, Result};
use crate::geotag::TARGET_COUNTRIES;
use crate::lda::LdaModel;
use crate::textprep::{Document, Vocabulary};

/// Topics charted per country unless configured otherwise.
pub const DEFAULT_TOP_TOPICS: usize = 4;

/// Dominant-topic counts keyed by week (1-based) and topic id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrendTable {
    pub week_count: u32,
    pub global_counts: BTreeMap<(u32, usize), u64>,
    pub country_counts: BTreeMap<(String, u32, usize), u64>,
    pub topic_totals: BTreeMap<usize, u64>,
}

impl TrendTable {
    pub fn new(week_count: u32) -> Self {
        TrendTable {
            week_count,
            ..Default::default()
        }
    }

    /// Adds one document with the given dominant topic.
    pub fn add(&mut self, week: u32, topic: usize, countries: &BTreeSet<String>) {
        *self.global_counts.entry((week, topic)).or_default() += 1;
        *self.topic_totals.entry(topic).or_default() += 1;
        for c in countries {
            *self.country_counts.entry((c.clone(), week, topic)).or_default() += 1;
        }
    }

    /// Merges another partial table into this one.
    pub fn merge(&mut self, other: TrendTable) {
        self.week_count = self.week_count.max(other.week_count);
        for (k, v) in other.global_counts {
            *self.global_counts.entry(k).or_default() += v;
        }
        for (k, v) in other.country_counts {
            *self.country_counts.entry(k).or_default() += v;
        }
        for (k, v) in other.topic_totals {
            *self.topic_totals.entry(k).or_default() += v;
        }
    }

    /// Topics with at least one document, ascending.
    pub fn topics_present(&self) -> Vec<usize> {
        self.topic_totals.keys().copied().collect()
    }

    pub fn total_documents(&self) -> u64 {
        self.topic_totals.values().sum()
    }

    pub fn global(&self, week: u32, topic: usize) -> u64 {
        self.global_counts.get(&(week, topic)).copied().unwrap_or(0)
    }

    pub fn country(&self, country: &str, week: u32, topic: usize) -> u64 {
        self.country_counts
            .get(&(country.to_string(), week, topic))
            .copied()
            .unwrap_or(0)
    }

    /// Weekly series of one topic, worldwide, weeks 1..=week_count.
    pub fn global_series(&self, topic: usize) -> Vec<u64> {
        (1..=self.week_count).map(|w| self.global(w, topic)).collect()
    }

    pub fn country_series(&self, country: &str, topic: usize) -> Vec<u64> {
        (1..=self.week_count).map(|w| self.country(country, w, topic)).collect()
    }
}

/// Counts every non-empty document once under its dominant topic, globally
/// and for each of its countries. `docs` must be the model's training
/// documents in order, built against the vocabulary with digest `vocab_hash`.
pub fn build_trends(docs: &[Document], vocab_hash: &str, model: &LdaModel, week_count: u32) -> Result<TrendTable> {
    if vocab_hash != model.vocab_hash {
        return Err(Error::Mismatch(format!(
            "documents use vocabulary {vocab_hash} but the model was trained on {}",
            model.vocab_hash
        )));
    }
    if docs.len() != model.theta.len() {
        return Err(Error::Mismatch(format!(
            "{} documents but the model has {} θ rows",
            docs.len(),
            model.theta.len()
        )));
    }
    let mut table = TrendTable::new(week_count);
    for (d, doc) in docs.iter().enumerate() {
        if model.doc_ids.get(d) != Some(&doc.source_id) {
            return Err(Error::Mismatch(format!(
                "document {} at position {d} does not match the model's document order",
                doc.source_id
            )));
        }
        if doc.is_empty() {
            continue;
        }
        if doc.week == 0 || doc.week > week_count {
            return Err(Error::Mismatch(format!(
                "document {} has week {} outside 1..={week_count}",
                doc.source_id, doc.week
            )));
        }
        table.add(doc.week, model.dominant_topic(d), &doc.countries);
    }
    Ok(table)
}

/// The `n` topics with the most documents in `country`, ties by id.
pub fn top_n_topics(table: &TrendTable, country: &str, n: usize) -> Vec<usize> {
    let mut totals: BTreeMap<usize, u64> = BTreeMap::new();
    for ((c, _, topic), count) in &table.country_counts {
        if c == country {
            *totals.entry(*topic).or_default() += count;
        }
    }
    if totals.is_empty() {
        log::warn!("no documents tagged {country}");
        return Vec::new();
    }
    let mut ranked: Vec<(usize, u64)> = totals.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.into_iter().take(n).map(|(t, _)| t).collect()
}

/// Official case counts per week; weeks without data are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseSeries {
    pub weeks: BTreeMap<u32, u64>,
}

#[derive(Debug, Deserialize)]
struct CaseRow {
    date: String,
    region: String,
    confirmed: u64,
}

/// Reads `date,region,confirmed` rows for `region` and sums them per study
/// week. Rows outside the window are ignored.
pub fn load_case_counts(path: &Path, region: &str, window: &StudyWindow) -> Result<CaseSeries> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut series = CaseSeries::default();
    for (i, row) in reader.deserialize::<CaseRow>().enumerate() {
        let row = row?;
        let date = NaiveDate::parse_from_str(row.date.trim(), "%Y-%m-%d").map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: i + 2,
            reason: format!("bad date {:?}: {e}", row.date),
        })?;
        if row.region.trim() != region {
            continue;
        }
        if let Some(week) = window.week_of_date(date) {
            *series.weeks.entry(week).or_default() += row.confirmed;
        }
    }
    Ok(series)
}

/// Pearson correlation; `None` with fewer than two points or zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinedRow {
    pub week: u32,
    pub topic: usize,
    pub tweet_count: u64,
    pub case_count: Option<u64>,
    /// Same value on every row of a topic.
    pub correlation: Option<f64>,
}

/// One row per (week, present topic), with the week's case count when known
/// and the topic's correlation with the case series over weeks that have data.
pub fn join_case_counts(table: &TrendTable, cases: &CaseSeries) -> Vec<JoinedRow> {
    let topics = table.topics_present();
    let weeks_with_cases: Vec<u32> = (1..=table.week_count).filter(|w| cases.weeks.contains_key(w)).collect();
    let case_values: Vec<f64> = weeks_with_cases.iter().map(|w| cases.weeks[w] as f64).collect();
    let correlations: BTreeMap<usize, Option<f64>> = topics
        .iter()
        .map(|&t| {
            let xs: Vec<f64> = weeks_with_cases.iter().map(|&w| table.global(w, t) as f64).collect();
            (t, pearson(&xs, &case_values))
        })
        .collect();
    let mut rows = Vec::new();
    for week in 1..=table.week_count {
        for &t in &topics {
            rows.push(JoinedRow {
                week,
                topic: t,
                tweet_count: table.global(week, t),
                case_count: cases.weeks.get(&week).copied(),
                correlation: correlations[&t],
            });
        }
    }
    rows
}

pub fn joined_csv(rows: &[JoinedRow]) -> String {
    let mut out = String::from("week,topic_id,tweet_count,case_count,pearson\n");
    for r in rows {
        let cases = r.case_count.map(|c| c.to_string()).unwrap_or_default();
        let corr = r.correlation.map(|c| format!("{c:.6}")).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{cases},{corr}", r.week, r.topic, r.tweet_count);
    }
    out
}

/// `week,topic_id,count` for every week and every present topic.
pub fn trends_csv(table: &TrendTable) -> String {
    let mut out = String::from("week,topic_id,count\n");
    for week in 1..=table.week_count {
        for t in table.topics_present() {
            let _ = writeln!(out, "{week},{t},{}", table.global(week, t));
        }
    }
    out
}

/// `country,week,topic_id,count` for the four target countries, every week
/// and every globally present topic.
pub fn trends_country_csv(table: &TrendTable) -> String {
    let mut countries: Vec<&str> = TARGET_COUNTRIES.to_vec();
    countries.sort_unstable();
    let mut out = String::from("country,week,topic_id,count\n");
    for c in countries {
        for week in 1..=table.week_count {
            for t in table.topics_present() {
                let _ = writeln!(out, "{c},{week},{t},{}", table.country(c, week, t));
            }
        }
    }
    out
}

pub fn topic_totals_csv(table: &TrendTable) -> String {
    let mut out = String::from("topic_id,total\n");
    for (t, n) in &table.topic_totals {
        let _ = writeln!(out, "{t},{n}");
    }
    out
}

/// `country,rank,topic_id,total` for the top `n` topics of each target country.
pub fn country_top_csv(table: &TrendTable, n: usize) -> String {
    let mut countries: Vec<&str> = TARGET_COUNTRIES.to_vec();
    countries.sort_unstable();
    let mut out = String::from("country,rank,topic_id,total\n");
    for c in countries {
        for (rank, t) in top_n_topics(table, c, n).into_iter().enumerate() {
            let total: u64 = table.country_series(c, t).iter().sum();
            let _ = writeln!(out, "{c},{},{t},{total}", rank + 1);
        }
    }
    out
}

/// `topic_id,rank,term,phi_weight`, the `n` top terms of every topic.
pub fn topics_csv(model: &LdaModel, vocab: &Vocabulary, n: usize) -> String {
    let mut out = String::from("topic_id,rank,term,phi_weight\n");
    for k in 0..model.num_topics() {
        for (rank, (w, p)) in model.top_words(k, n).into_iter().enumerate() {
            let _ = writeln!(out, "{k},{},{},{p:.8}", rank + 1, vocab.term(w));
        }
    }
    out
}

/// Gnuplot data: one block per topic, blocks separated by two blank lines.
pub fn gnuplot_dat(table: &TrendTable, country: Option<&str>, topics: &[usize]) -> String {
    let mut out = String::new();
    for &t in topics {
        let _ = writeln!(out, "# topic {t}\n# week count");
        let series = match country {
            Some(c) => table.country_series(c, t),
            None => table.global_series(t),
        };
        for (i, n) in series.iter().enumerate() {
            let _ = writeln!(out, "{} {n}", i + 1);
        }
        out.push_str("\n\n");
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// Line chart with one polyline per topic over the study weeks.
pub fn svg_lines(table: &TrendTable, country: Option<&str>, topics: &[usize], title: &str) -> String {
    let (width, height) = (720.0, 400.0);
    let (left, right, top, bottom) = (60.0, 110.0, 40.0, 50.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let series: Vec<(usize, Vec<u64>)> = topics
        .iter()
        .map(|&t| {
            let s = match country {
                Some(c) => table.country_series(c, t),
                None => table.global_series(t),
            };
            (t, s)
        })
        .collect();
    let max = series
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let weeks = table.week_count.max(1);
    let x = |week: u32| {
        if weeks == 1 {
            left + plot_w / 2.0
        } else {
            left + plot_w * f64::from(week - 1) / f64::from(weeks - 1)
        }
    };
    let y = |n: u64| top + plot_h * (1.0 - n as f64 / max);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (left, top + plot_h, left + plot_w, top);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for week in 1..=weeks {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{week}</text>"#,
            x(week),
            y0 + 16.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="end">0</text>"#,
        x0 - 6.0,
        y0 + 4.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        y1 + 4.0,
        max as u64
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">week</text>"#,
        left + plot_w / 2.0,
        height - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">tweets</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    for (i, (t, s)) in series.iter().enumerate() {
        let color = PALETTE[t % PALETTE.len()];
        let points: Vec<String> = s
            .iter()
            .enumerate()
            .map(|(w, &n)| format!("{:.1},{:.1}", x(w as u32 + 1), y(n)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            x1 + 10.0,
            x1 + 30.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">topic {t}</text>"#,
            x1 + 36.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
