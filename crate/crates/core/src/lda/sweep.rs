use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;

use super::{perplexity, train, LdaConfig};
use crate::error::{Error, Result};
use crate::rng;
use crate::textprep::{Document, Vocabulary};

#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Share of documents held out for perplexity, in (0, 1).
    pub heldout_fraction: f64,
    /// Fixed α for every K; `None` uses 50/K.
    pub alpha: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            heldout_fraction: 0.1,
            alpha: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub k: usize,
    pub heldout_perplexity: f64,
    pub runtime: Duration,
}

/// Seeded shuffle split into (train, held-out) index lists, each sorted.
pub fn split_heldout(n_docs: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "held-out fraction must be in (0, 1), got {fraction}"
        )));
    }
    if n_docs < 2 {
        return Err(Error::EmptyCorpus(
            "need at least two documents to hold some out".into(),
        ));
    }
    let n_held = ((n_docs as f64 * fraction).round() as usize).clamp(1, n_docs - 1);
    let mut idx: Vec<usize> = (0..n_docs).collect();
    idx.shuffle(&mut rng::seeded(seed));
    let mut held = idx[..n_held].to_vec();
    let mut train = idx[n_held..].to_vec();
    held.sort_unstable();
    train.sort_unstable();
    Ok((train, held))
}

/// Trains one model per K on the training split and reports held-out
/// perplexity. Picks nothing: choosing K is left to the reader of the table.
pub fn sweep_k(
    docs: &[Document],
    vocab: &Vocabulary,
    ks: &[usize],
    template: &LdaConfig,
    opts: &SweepOptions,
) -> Result<Vec<SweepRow>> {
    if ks.is_empty() {
        return Err(Error::Config("sweep needs at least one K".into()));
    }
    let (train_idx, held_idx) = split_heldout(docs.len(), opts.heldout_fraction, template.seed)?;
    let train_docs: Vec<Document> = train_idx.iter().map(|&i| docs[i].clone()).collect();
    let held_docs: Vec<Document> = held_idx.iter().map(|&i| docs[i].clone()).collect();
    ks.iter()
        .map(|&k| {
            let cfg = LdaConfig {
                k,
                alpha: opts.alpha.unwrap_or(50.0 / k as f64),
                ..template.clone()
            };
            let started = Instant::now();
            let model = train(&train_docs, vocab, &cfg)?;
            let heldout_perplexity = perplexity(&model, &held_docs);
            Ok(SweepRow {
                k,
                heldout_perplexity,
                runtime: started.elapsed(),
            })
        })
        .collect()
}

pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("k\theldout_perplexity\truntime_secs\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{:.6}\t{:.3}",
            r.k,
            r.heldout_perplexity,
            r.runtime.as_secs_f64()
        );
    }
    out
}

/// Parses `5:20` (inclusive range) or `5,10,15`.
pub fn parse_ks(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("bad K list {spec:?}; use START:END or a comma list"));
    let ks: Vec<usize> = if let Some((a, b)) = spec.split_once(':') {
        let (a, b): (usize, usize) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        );
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if ks.is_empty() || ks.contains(&0) {
        return Err(bad());
    }
    Ok(ks)
}
