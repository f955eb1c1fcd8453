//! Record ingestion: parsing, retweet removal, the study window and
//! per-week sampling.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// One raw input document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub lang: String,
    pub is_retweet: bool,
}

impl TweetRecord {
    fn sort_key(&self) -> (DateTime<Utc>, &str) {
        (self.created_at, self.id.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(InputFormat::Jsonl),
            "csv" => Ok(InputFormat::Csv),
            other => Err(Error::Config(format!("unknown input format {other:?}"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Jsonl => "jsonl",
            InputFormat::Csv => "csv",
        })
    }
}

/// Inclusive range of UTC dates split into 7-day buckets anchored at `start`.
/// The last bucket may be partial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyWindow {
    start: NaiveDate,
    end: NaiveDate,
}

/// 2020-03-23 through 2020-06-23: fourteen weekly buckets.
impl Default for StudyWindow {
    fn default() -> Self {
        StudyWindow {
            start: NaiveDate::from_ymd_opt(2020, 3, 23).unwrap(),
            end: NaiveDate::from_ymd_opt(2020, 6, 23).unwrap(),
        }
    }
}

impl StudyWindow {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if end < start {
            return Err(Error::Config(format!("window end {end} precedes start {start}")));
        }
        Ok(StudyWindow { start, end })
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn week_count(&self) -> u32 {
        let days = (self.end - self.start).num_days() + 1;
        ((days + 6) / 7) as u32
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    /// Bucket index of a date, 1-based.
    pub fn week_of_date(&self, date: NaiveDate) -> Option<u32> {
        if !self.contains(date) {
            return None;
        }
        Some(1 + ((date - self.start).num_days() / 7) as u32)
    }
}

impl FromStr for StudyWindow {
    type Err = Error;

    /// Parses `YYYY-MM-DD:YYYY-MM-DD`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("window {s:?} is not START:END")))?;
        let parse = |d: &str| {
            NaiveDate::parse_from_str(d.trim(), "%Y-%m-%d")
                .map_err(|e| Error::Config(format!("window date {d:?}: {e}")))
        };
        StudyWindow::new(parse(a)?, parse(b)?)
    }
}

impl fmt::Display for StudyWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

/// Week index of a timestamp: `1 + floor(days since window start / 7)`.
pub fn week_index(t: DateTime<Utc>, window: &StudyWindow) -> Result<u32> {
    window
        .week_of_date(t.date_naive())
        .ok_or_else(|| Error::OutOfWindow(t.to_rfc3339()))
}

/// A skipped input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Option<serde_json::Value>,
    created_at: Option<String>,
    text: Option<String>,
    lang: Option<String>,
    is_retweet: Option<serde_json::Value>,
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "" | "false" | "0" | "no" | "f" => Some(false),
        "true" | "1" | "yes" | "t" => Some(true),
        _ => None,
    }
}

fn validate(
    id: Option<String>,
    created_at: Option<String>,
    text: Option<String>,
    lang: Option<String>,
    is_retweet: Option<bool>,
) -> std::result::Result<TweetRecord, String> {
    let id = id.filter(|s| !s.is_empty()).ok_or("missing id")?;
    let created_at = created_at.ok_or("missing created_at")?;
    // RFC 3339 requires an explicit offset, which is what we want.
    let created_at = DateTime::parse_from_rfc3339(created_at.trim())
        .map_err(|e| format!("bad created_at {created_at:?}: {e}"))?
        .with_timezone(&Utc);
    let text = text.ok_or("missing text")?;
    let lang = lang
        .filter(|l| !l.trim().is_empty())
        .unwrap_or_else(|| "en".to_string());
    Ok(TweetRecord {
        id,
        created_at,
        text,
        lang,
        is_retweet: is_retweet.unwrap_or(false),
    })
}

fn parse_json_line(line: &str) -> std::result::Result<TweetRecord, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| format!("invalid json: {e}"))?;
    let id = match raw.id {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(s),
        Some(serde_json::Value::Number(n)) => Some(n.to_string()),
        Some(other) => return Err(format!("id has unsupported type: {other}")),
    };
    let is_retweet = match raw.is_retweet {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::Bool(b)) => Some(b),
        Some(serde_json::Value::String(s)) => Some(parse_bool(&s).ok_or_else(|| format!("bad is_retweet {s:?}"))?),
        Some(other) => return Err(format!("bad is_retweet {other}")),
    };
    validate(id, raw.created_at, raw.text, raw.lang, is_retweet)
}

enum Source {
    Jsonl(std::io::Lines<BufReader<File>>),
    Csv {
        records: csv::StringRecordsIntoIter<File>,
        columns: [Option<usize>; 5],
    },
}

/// Streaming reader over a JSONL or CSV corpus. Malformed lines are skipped
/// and kept as diagnostics; call [`RecordReader::finish`] once drained.
pub struct RecordReader {
    path: PathBuf,
    source: Source,
    line: usize,
    total: usize,
    diagnostics: Vec<Diagnostic>,
    failed: Option<Error>,
}

/// Outcome of draining a [`RecordReader`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub diagnostics: Vec<Diagnostic>,
}

const CSV_COLUMNS: [&str; 5] = ["id", "created_at", "text", "lang", "is_retweet"];

/// Opens `path` for streaming. Fails immediately if the file is unreadable.
pub fn load_records(path: impl AsRef<Path>, format: InputFormat) -> Result<RecordReader> {
    let path = path.as_ref().to_path_buf();
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    let source = match format {
        InputFormat::Jsonl => Source::Jsonl(BufReader::new(file).lines()),
        InputFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(file);
            let headers = rdr.headers()?.clone();
            let mut columns = [None; 5];
            for (slot, name) in columns.iter_mut().zip(CSV_COLUMNS) {
                *slot = headers.iter().position(|h| h.trim() == name);
            }
            Source::Csv {
                records: rdr.into_records(),
                columns,
            }
        }
    };
    Ok(RecordReader {
        path,
        source,
        line: if format == InputFormat::Csv { 1 } else { 0 },
        total: 0,
        diagnostics: Vec::new(),
        failed: None,
    })
}

impl RecordReader {
    fn reject(&mut self, line: usize, reason: String) {
        self.diagnostics.push(Diagnostic { line, reason });
    }

    /// Checks the malformed-line ratio and returns the tally.
    pub fn finish(self) -> Result<LoadReport> {
        if let Some(err) = self.failed {
            return Err(err);
        }
        let malformed = self.diagnostics.len();
        if self.total > 0 && malformed * 2 > self.total {
            return Err(Error::TooManyMalformed {
                path: self.path,
                malformed,
                total: self.total,
            });
        }
        Ok(LoadReport {
            lines: self.total,
            diagnostics: self.diagnostics,
        })
    }
}

impl Iterator for RecordReader {
    type Item = TweetRecord;

    fn next(&mut self) -> Option<TweetRecord> {
        if self.failed.is_some() {
            return None;
        }
        loop {
            let parsed = match &mut self.source {
                Source::Jsonl(lines) => {
                    let line = match lines.next()? {
                        Ok(l) => l,
                        Err(e) => {
                            self.failed = Some(Error::io(&self.path, e));
                            return None;
                        }
                    };
                    self.line += 1;
                    if line.trim().is_empty() {
                        continue;
                    }
                    parse_json_line(&line)
                }
                Source::Csv { records, columns } => {
                    let rec = match records.next()? {
                        Ok(r) => r,
                        Err(e) => {
                            self.line += 1;
                            self.total += 1;
                            let line = self.line;
                            self.reject(line, format!("invalid csv: {e}"));
                            continue;
                        }
                    };
                    self.line = rec.position().map_or(self.line + 1, |p| p.line() as usize);
                    let field = |i: usize| columns[i].and_then(|c| rec.get(c)).map(str::to_string);
                    let flag = field(4);
                    match flag.as_deref().map(parse_bool) {
                        Some(None) => Err(format!("bad is_retweet {:?}", flag.unwrap())),
                        other => validate(field(0), field(1), field(2), field(3), other.flatten()),
                    }
                }
            };
            self.total += 1;
            match parsed {
                Ok(r) => return Some(r),
                Err(reason) => {
                    let line = self.line;
                    self.reject(line, reason);
                }
            }
        }
    }
}

/// True when the record is a retweet by flag or by a leading `RT @` marker.
pub fn is_retweet(r: &TweetRecord) -> bool {
    r.is_retweet || r.text.trim_start().starts_with("RT @")
}

pub fn drop_retweets(records: impl IntoIterator<Item = TweetRecord>) -> Vec<TweetRecord> {
    records.into_iter().filter(|r| !is_retweet(r)).collect()
}

/// Keeps at most `n_per_week` records per weekly bucket. Oversized buckets are
/// sampled uniformly without replacement from the stream `seed ^ week`. The
/// result is ordered by (week, created_at, id).
pub fn sample_weekly(
    records: impl IntoIterator<Item = TweetRecord>,
    window: &StudyWindow,
    n_per_week: usize,
    seed: u64,
) -> Result<Vec<TweetRecord>> {
    let mut buckets: BTreeMap<u32, Vec<TweetRecord>> = BTreeMap::new();
    for r in records {
        let week = week_index(r.created_at, window)?;
        buckets.entry(week).or_default().push(r);
    }
    let mut out = Vec::new();
    for (week, mut bucket) in buckets {
        bucket.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        if bucket.len() <= n_per_week {
            out.extend(bucket);
            continue;
        }
        let mut rng = rng::for_week(seed, week);
        let mut picked = rand::seq::index::sample(&mut rng, bucket.len(), n_per_week).into_vec();
        picked.sort_unstable();
        let mut slots: Vec<Option<TweetRecord>> = bucket.into_iter().map(Some).collect();
        out.extend(picked.into_iter().map(|i| slots[i].take().unwrap()));
    }
    Ok(out)
}

/// Filtering options applied by [`ingest`].
#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub window: StudyWindow,
    pub sample_per_week: usize,
    pub seed: u64,
    /// Keep only records whose language tag starts with "en".
    pub english_only: bool,
}

/// Counts of kept and dropped records, by reason.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub lines: usize,
    pub malformed: Vec<Diagnostic>,
    pub parsed: usize,
    pub duplicate_ids: usize,
    pub non_english: usize,
    pub retweets: usize,
    pub out_of_window: usize,
    pub sampled_out: usize,
    pub kept: usize,
    pub kept_per_week: BTreeMap<u32, usize>,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lines\t{}", self.lines)?;
        writeln!(f, "malformed\t{}", self.malformed.len())?;
        writeln!(f, "parsed\t{}", self.parsed)?;
        writeln!(f, "dropped_duplicate_id\t{}", self.duplicate_ids)?;
        writeln!(f, "dropped_non_english\t{}", self.non_english)?;
        writeln!(f, "dropped_retweet\t{}", self.retweets)?;
        writeln!(f, "dropped_out_of_window\t{}", self.out_of_window)?;
        writeln!(f, "dropped_sampling\t{}", self.sampled_out)?;
        writeln!(f, "kept\t{}", self.kept)?;
        for (week, n) in &self.kept_per_week {
            writeln!(f, "kept_week_{week}\t{n}")?;
        }
        for d in &self.malformed {
            writeln!(f, "malformed_line\t{}\t{}", d.line, d.reason)?;
        }
        Ok(())
    }
}

/// Deduplicates ids (first occurrence wins), applies the language filter,
/// removes retweets, drops out-of-window records, then samples per week.
pub fn ingest(
    records: impl IntoIterator<Item = TweetRecord>,
    opts: &IngestOptions,
    report: &mut IngestReport,
) -> Result<Vec<TweetRecord>> {
    let mut seen = HashSet::new();
    let mut survivors = Vec::new();
    for r in records {
        report.parsed += 1;
        if !seen.insert(r.id.clone()) {
            report.duplicate_ids += 1;
            continue;
        }
        if opts.english_only && !r.lang.to_ascii_lowercase().starts_with("en") {
            report.non_english += 1;
            continue;
        }
        if is_retweet(&r) {
            report.retweets += 1;
            continue;
        }
        if !opts.window.contains(r.created_at.date_naive()) {
            report.out_of_window += 1;
            continue;
        }
        survivors.push(r);
    }
    let before = survivors.len();
    let kept = sample_weekly(survivors, &opts.window, opts.sample_per_week, opts.seed)?;
    report.sampled_out = before - kept.len();
    report.kept = kept.len();
    for r in &kept {
        *report
            .kept_per_week
            .entry(week_index(r.created_at, &opts.window)?)
            .or_default() += 1;
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn rec(id: &str, ts: &str, text: &str, rt: bool) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            created_at: DateTime::parse_from_rfc3339(ts).unwrap().with_timezone(&Utc),
            text: text.into(),
            lang: "en".into(),
            is_retweet: rt,
        }
    }

    fn ts(s: &str) -> DateTime<Utc> {
        DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc)
    }

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn default_window_has_fourteen_weeks() {
        assert_eq!(StudyWindow::default().week_count(), 14);
        let w: StudyWindow = "2020-03-23:2020-03-29".parse().unwrap();
        assert_eq!(w.week_count(), 1);
        let w: StudyWindow = "2020-03-23:2020-03-30".parse().unwrap();
        assert_eq!(w.week_count(), 2);
        assert!("2020-03-23:2020-03-01".parse::<StudyWindow>().is_err());
    }

    #[test]
    fn week_index_examples() {
        let w = StudyWindow::default();
        assert_eq!(week_index(ts("2020-03-23T00:00:00Z"), &w).unwrap(), 1);
        assert_eq!(week_index(ts("2020-03-30T12:00:00Z"), &w).unwrap(), 2);
        assert_eq!(week_index(ts("2020-06-23T23:59:59Z"), &w).unwrap(), 14);
        assert!(matches!(
            week_index(ts("2020-06-24T00:00:00Z"), &w),
            Err(Error::OutOfWindow(_))
        ));
        assert!(week_index(ts("2020-03-22T23:59:59Z"), &w).is_err());
    }

    #[test]
    fn offset_timestamps_are_normalized_to_utc() {
        let w = StudyWindow::default();
        // 2020-03-30T01:00+02:00 is still 2020-03-29 in UTC.
        let t = DateTime::parse_from_rfc3339("2020-03-30T01:00:00+02:00")
            .unwrap()
            .with_timezone(&Utc);
        assert_eq!(week_index(t, &w).unwrap(), 1);
    }

    #[test]
    fn retweet_rules() {
        let flagged = rec("1", "2020-04-01T00:00:00Z", "hello", true);
        let marked = rec("2", "2020-04-01T00:00:00Z", "  RT @user stay home", false);
        let start = rec("3", "2020-04-01T00:00:00Z", "START of week", false);
        let rt_word = rec("4", "2020-04-01T00:00:00Z", "RT this please", false);
        let kept = drop_retweets(vec![flagged, marked, start, rt_word]);
        let ids: Vec<_> = kept.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["3", "4"]);
    }

    #[test]
    fn jsonl_clean_and_malformed() {
        let f = write_tmp(concat!(
            r#"{"id":"1","created_at":"2020-03-23T10:00:00Z","text":"a"}"#,
            "\n",
            r#"{"id":"2","created_at":"2020-03-24T10:00:00Z","text":"b","lang":"en-GB","is_retweet":true}"#,
            "\n",
            r#"{"id":"3","created_at":"2020-03-25T10:00:00Z","text":"c"}"#,
            "\n",
        ));
        let mut rdr = load_records(f.path(), InputFormat::Jsonl).unwrap();
        let recs: Vec<_> = rdr.by_ref().collect();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[1].lang, "en-GB");
        assert!(recs[1].is_retweet);
        assert_eq!(recs[0].lang, "en");
        assert!(rdr.finish().unwrap().diagnostics.is_empty());

        let f = write_tmp(concat!(
            r#"{"id":"1","created_at":"2020-03-23T10:00:00Z","text":"a"}"#,
            "\n",
            r#"{"id":"2","text":"b"}"#,
            "\n",
            r#"{"id":"3","created_at":"2020-03-25T10:00:00Z","text":"c"}"#,
            "\n",
        ));
        let mut rdr = load_records(f.path(), InputFormat::Jsonl).unwrap();
        assert_eq!(rdr.by_ref().count(), 2);
        let report = rdr.finish().unwrap();
        assert_eq!(report.diagnostics.len(), 1);
        assert_eq!(report.diagnostics[0].line, 2);
        assert!(report.diagnostics[0].reason.contains("created_at"));
    }

    #[test]
    fn missing_offset_is_malformed() {
        let f = write_tmp(concat!(
            r#"{"id":"1","created_at":"2020-03-23T10:00:00","text":"a"}"#,
            "\n",
            r#"{"id":"2","created_at":"2020-03-23T10:00:00Z","text":"a"}"#,
            "\n",
        ));
        let mut rdr = load_records(f.path(), InputFormat::Jsonl).unwrap();
        assert_eq!(rdr.by_ref().count(), 1);
        assert_eq!(rdr.finish().unwrap().diagnostics.len(), 1);
    }

    #[test]
    fn empty_file_is_fine() {
        let f = write_tmp("");
        let mut rdr = load_records(f.path(), InputFormat::Jsonl).unwrap();
        assert_eq!(rdr.by_ref().count(), 0);
        assert_eq!(rdr.finish().unwrap(), LoadReport::default());
    }

    #[test]
    fn mostly_malformed_is_fatal() {
        let f = write_tmp("id,created_at,text\n1,2020-03-23T00:00:00Z,ok\n");
        let mut rdr = load_records(f.path(), InputFormat::Jsonl).unwrap();
        assert_eq!(rdr.by_ref().count(), 0);
        assert!(matches!(rdr.finish(), Err(Error::TooManyMalformed { .. })));
    }

    #[test]
    fn unreadable_file_is_fatal() {
        assert!(matches!(
            load_records("/nonexistent/corpus.jsonl", InputFormat::Jsonl),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn csv_with_quoting() {
        let f = write_tmp(
            "id,created_at,text,lang,is_retweet\n\
             1,2020-03-23T00:00:00Z,\"stay home, stay \"\"safe\"\"\",en,false\n\
             2,2020-03-23T00:00:00Z,plain,,\n\
             3,not-a-date,x,en,false\n\
             4,2020-03-23T00:00:00Z,x,en,maybe\n",
        );
        let mut rdr = load_records(f.path(), InputFormat::Csv).unwrap();
        let recs: Vec<_> = rdr.by_ref().collect();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].text, "stay home, stay \"safe\"");
        assert_eq!(recs[1].lang, "en");
        let report = rdr.finish().unwrap();
        assert_eq!(report.diagnostics.iter().map(|d| d.line).collect::<Vec<_>>(), [4, 5]);
    }

    #[test]
    fn small_bucket_kept_whole() {
        let w = StudyWindow::default();
        let recs: Vec<_> = (0..5)
            .map(|i| rec(&i.to_string(), "2020-04-01T00:00:00Z", "x", false))
            .collect();
        assert_eq!(sample_weekly(recs, &w, 10, 1).unwrap().len(), 5);
    }

    #[test]
    fn sampling_is_reproducible_and_order_free() {
        let w = StudyWindow::default();
        let recs: Vec<_> = (0..100)
            .map(|i| rec(&format!("{i:03}"), "2020-04-01T00:00:00Z", "x", false))
            .collect();
        let a = sample_weekly(recs.clone(), &w, 10, 99).unwrap();
        let mut reversed = recs.clone();
        reversed.reverse();
        let b = sample_weekly(reversed, &w, 10, 99).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
        let c = sample_weekly(recs, &w, 10, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_output_order() {
        let w = StudyWindow::default();
        let recs = vec![
            rec("b", "2020-04-10T00:00:00Z", "x", false),
            rec("a", "2020-04-10T00:00:00Z", "x", false),
            rec("c", "2020-03-23T05:00:00Z", "x", false),
        ];
        let out = sample_weekly(recs, &w, 10, 0).unwrap();
        let ids: Vec<_> = out.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }

    #[test]
    fn ingest_counts_each_reason() {
        let mut recs = vec![
            rec("1", "2020-04-01T00:00:00Z", "ok", false),
            rec("1", "2020-04-01T00:00:00Z", "dup", false),
            rec("2", "2020-04-01T00:00:00Z", "rt", true),
            rec("3", "2019-04-01T00:00:00Z", "old", false),
            rec("4", "2020-04-02T00:00:00Z", "fr", false),
        ];
        recs[4].lang = "fr".into();
        let opts = IngestOptions {
            window: StudyWindow::default(),
            sample_per_week: 150_000,
            seed: 0,
            english_only: true,
        };
        let mut report = IngestReport::default();
        let kept = ingest(recs, &opts, &mut report).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(report.duplicate_ids, 1);
        assert_eq!(report.retweets, 1);
        assert_eq!(report.out_of_window, 1);
        assert_eq!(report.non_english, 1);
        assert_eq!(report.kept_per_week.get(&2), Some(&1));
    }
}
