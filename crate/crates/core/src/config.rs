//! Flat `key = value` pipeline configuration.
//!
//! Values are resolved in three layers: built-in defaults, then a config
//! file, then command-line flags. The resolved form is echoed into every
//! output directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::corpus::{InputFormat, StudyWindow};
use crate::error::{Error, Result};
use crate::lda::LdaConfig;

/// Names a config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "TOPIC_TRENDS_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub window: StudyWindow,
    pub sample_per_week: usize,
    pub seed: u64,
    pub k: usize,
    /// `None` means 50/K.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub min_df: usize,
    pub max_df_ratio: f64,
    /// `None` selects the bundled list.
    pub stoplist: Option<PathBuf>,
    pub domain_terms: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub heldout_fraction: f64,
    pub format: InputFormat,
    pub english_only: bool,
    pub top_terms: usize,
    pub top_topics: usize,
    /// Optional `date,region,confirmed` file joined onto the weekly series.
    pub cases: Option<PathBuf>,
    pub case_region: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            window: StudyWindow::default(),
            sample_per_week: 150_000,
            seed: 20200323,
            k: 10,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            burn_in: 200,
            min_df: 5,
            max_df_ratio: 0.5,
            stoplist: None,
            domain_terms: None,
            gazetteer: None,
            heldout_fraction: 0.1,
            format: InputFormat::Jsonl,
            english_only: true,
            top_terms: 10,
            top_topics: 4,
            cases: None,
            case_region: "WORLD".into(),
        }
    }
}

pub const KEYS: [&str; 20] = [
    "window",
    "sample_per_week",
    "seed",
    "k",
    "alpha",
    "beta",
    "iterations",
    "burn_in",
    "min_df",
    "max_df_ratio",
    "stoplist",
    "domain_terms",
    "gazetteer",
    "heldout_fraction",
    "format",
    "english_only",
    "top_terms",
    "top_topics",
    "cases",
    "case_region",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn optional_path(value: &str) -> Option<PathBuf> {
    match value {
        "" | "bundled" | "none" => None,
        p => Some(PathBuf::from(p)),
    }
}

impl PipelineConfig {
    /// Sets one field from its textual form. Keys accept `-` for `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "window" => self.window = value.parse()?,
            "sample_per_week" => self.sample_per_week = parse(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "k" => self.k = parse(&key, value)?,
            "alpha" => {
                self.alpha = match value {
                    "auto" | "" => None,
                    v => Some(parse(&key, v)?),
                }
            }
            "beta" => self.beta = parse(&key, value)?,
            "iterations" => self.iterations = parse(&key, value)?,
            "burn_in" => self.burn_in = parse(&key, value)?,
            "min_df" => self.min_df = parse(&key, value)?,
            "max_df_ratio" => self.max_df_ratio = parse(&key, value)?,
            "stoplist" => self.stoplist = optional_path(value),
            "domain_terms" => self.domain_terms = optional_path(value),
            "gazetteer" => self.gazetteer = optional_path(value),
            "heldout_fraction" => self.heldout_fraction = parse(&key, value)?,
            "format" => self.format = value.parse()?,
            "english_only" => self.english_only = parse(&key, value)?,
            "top_terms" => self.top_terms = parse(&key, value)?,
            "top_topics" => self.top_topics = parse(&key, value)?,
            "cases" => self.cases = optional_path(value),
            "case_region" => self.case_region = value.to_string(),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a config file's `key = value` lines; `#` starts a comment.
    /// Relative paths in the file resolve against the file's directory.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for (i, raw) in content.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                reason: "expected key = value".into(),
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let is_path = matches!(key.as_str(), "stoplist" | "domain_terms" | "gazetteer" | "cases");
            let resolved = match optional_path(value) {
                Some(p) if is_path && p.is_relative() => base.join(p).to_string_lossy().into_owned(),
                _ => value.to_string(),
            };
            self.set(&key, &resolved).map_err(|e| Error::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }

    pub fn lda(&self) -> LdaConfig {
        LdaConfig {
            k: self.k,
            alpha: self.alpha(),
            beta: self.beta,
            iterations: self.iterations,
            burn_in: self.burn_in,
            seed: self.seed,
        }
    }

    /// Checks numeric ranges and that every referenced file exists.
    pub fn validate(&self) -> Result<()> {
        self.lda().validate()?;
        if self.min_df == 0 {
            return Err(Error::Config("min_df must be at least 1".into()));
        }
        if !(self.max_df_ratio > 0.0 && self.max_df_ratio <= 1.0) {
            return Err(Error::Config("max_df_ratio must be in (0, 1]".into()));
        }
        if !(self.heldout_fraction > 0.0 && self.heldout_fraction < 1.0) {
            return Err(Error::Config("heldout_fraction must be in (0, 1)".into()));
        }
        if self.top_terms == 0 || self.top_topics == 0 {
            return Err(Error::Config("top_terms and top_topics must be at least 1".into()));
        }
        for p in [&self.stoplist, &self.domain_terms, &self.gazetteer, &self.cases]
            .into_iter()
            .flatten()
        {
            if !p.is_file() {
                return Err(Error::MissingInput(p.clone()));
            }
        }
        Ok(())
    }

    /// Every key with its resolved value, one `key = value` line each.
    pub fn echo(&self) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or("bundled".to_string(), |p| p.display().to_string());
        let mut out = String::from("# resolved configuration\n");
        for key in KEYS {
            let value = match key {
                "window" => self.window.to_string(),
                "sample_per_week" => self.sample_per_week.to_string(),
                "seed" => self.seed.to_string(),
                "k" => self.k.to_string(),
                "alpha" => self.alpha().to_string(),
                "beta" => self.beta.to_string(),
                "iterations" => self.iterations.to_string(),
                "burn_in" => self.burn_in.to_string(),
                "min_df" => self.min_df.to_string(),
                "max_df_ratio" => self.max_df_ratio.to_string(),
                "stoplist" => path(&self.stoplist),
                "domain_terms" => path(&self.domain_terms),
                "gazetteer" => path(&self.gazetteer),
                "heldout_fraction" => self.heldout_fraction.to_string(),
                "format" => self.format.to_string(),
                "english_only" => self.english_only.to_string(),
                "top_terms" => self.top_terms.to_string(),
                "top_topics" => self.top_topics.to_string(),
                "cases" => self
                    .cases
                    .as_ref()
                    .map_or("none".to_string(), |p| p.display().to_string()),
                "case_region" => self.case_region.clone(),
                _ => unreachable!(),
            };
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}
