//! Latent Dirichlet allocation trained by collapsed Gibbs sampling.
//!
//! The sampler resamples one token's topic at a time from
//!
//! ```text
//! p(z = k | rest) ∝ (n_dk + α) · (n_kw + β) / (n_k + V·β)
//! ```
//!
//! where every count excludes the token being resampled. Topic-word and
//! document-topic estimates are posterior means of the counts averaged over
//! all post-burn-in sweeps.

mod model;
mod sweep;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

pub use model::{fold_in, perplexity, perplexity_with_theta, LdaModel};
pub use sweep::{parse_ks, split_heldout, sweep_k, sweep_tsv, SweepOptions, SweepRow};

use crate::error::{Error, Result};
use crate::rng::{self, PipelineRng};
use crate::textprep::{Document, Vocabulary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// Defaults: α = 50/K, β = 0.01, 1000 sweeps with 200 burn-in.
    pub fn new(k: usize) -> Self {
        LdaConfig {
            k,
            alpha: 50.0 / k.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            burn_in: 200,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("beta must be positive, got {}", self.beta)));
        }
        if self.iterations == 0 || self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "need 0 <= burn_in < iterations, got burn_in={} iterations={}",
                self.burn_in, self.iterations
            )));
        }
        Ok(())
    }
}

/// Topic assignments plus the count tables they imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdaState {
    k: usize,
    v: usize,
    /// Term id of every token, per document.
    words: Vec<Vec<u32>>,
    /// Topic of every token, per document.
    z: Vec<Vec<u32>>,
    /// D × K, row-major.
    n_dk: Vec<u32>,
    /// V × K, row-major (word-major so one token's column is contiguous).
    n_wk: Vec<u32>,
    n_k: Vec<u32>,
}

impl LdaState {
    /// Draws every token's topic uniformly from `0..k`.
    pub fn init(docs: &[Document], n_terms: usize, k: usize, rng: &mut PipelineRng) -> Result<Self> {
        if docs.is_empty() || docs.iter().all(Document::is_empty) {
            return Err(Error::EmptyCorpus("no tokens to train on".into()));
        }
        if k == 0 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        let mut state = LdaState {
            k,
            v: n_terms,
            words: Vec::with_capacity(docs.len()),
            z: Vec::with_capacity(docs.len()),
            n_dk: vec![0; docs.len() * k],
            n_wk: vec![0; n_terms * k],
            n_k: vec![0; k],
        };
        for (d, doc) in docs.iter().enumerate() {
            let words: Vec<u32> = doc.tokens().collect();
            if let Some(&bad) = words.iter().find(|&&w| w as usize >= n_terms) {
                return Err(Error::Mismatch(format!(
                    "document {} has term id {bad} outside a vocabulary of {n_terms}",
                    doc.source_id
                )));
            }
            let mut zs = Vec::with_capacity(words.len());
            for &w in &words {
                let topic = rng.random_range(0..k as u32);
                zs.push(topic);
                state.add(d, w, topic as usize);
            }
            state.words.push(words);
            state.z.push(zs);
        }
        Ok(state)
    }

    /// Builds a state from explicit assignments (used by tests and oracles).
    pub fn from_assignments(words: Vec<Vec<u32>>, z: Vec<Vec<u32>>, n_terms: usize, k: usize) -> Self {
        let mut state = LdaState {
            k,
            v: n_terms,
            n_dk: vec![0; words.len() * k],
            n_wk: vec![0; n_terms * k],
            n_k: vec![0; k],
            words: Vec::new(),
            z: Vec::new(),
        };
        for (d, (ws, zs)) in words.iter().zip(&z).enumerate() {
            assert_eq!(ws.len(), zs.len());
            for (&w, &t) in ws.iter().zip(zs) {
                state.add(d, w, t as usize);
            }
        }
        state.words = words;
        state.z = z;
        state
    }

    fn add(&mut self, d: usize, w: u32, topic: usize) {
        self.n_dk[d * self.k + topic] += 1;
        self.n_wk[w as usize * self.k + topic] += 1;
        self.n_k[topic] += 1;
    }

    fn sub(&mut self, d: usize, w: u32, topic: usize) {
        self.n_dk[d * self.k + topic] -= 1;
        self.n_wk[w as usize * self.k + topic] -= 1;
        self.n_k[topic] -= 1;
    }

    /// Takes token (d, i) out of the count tables, leaving its assignment
    /// recorded; the tables then hold the "minus-i" counts.
    pub fn remove_token(&mut self, d: usize, i: usize) {
        let (w, t) = (self.words[d][i], self.z[d][i]);
        self.sub(d, w, t as usize);
    }

    /// Assigns token (d, i) to `topic` and adds it back to the count tables.
    pub fn assign_token(&mut self, d: usize, i: usize, topic: usize) {
        self.z[d][i] = topic as u32;
        let w = self.words[d][i];
        self.add(d, w, topic);
    }

    pub fn num_topics(&self) -> usize {
        self.k
    }

    pub fn num_terms(&self) -> usize {
        self.v
    }

    pub fn num_docs(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.z
    }

    pub fn n_dk(&self, d: usize, k: usize) -> u32 {
        self.n_dk[d * self.k + k]
    }

    pub fn n_kw(&self, k: usize, w: usize) -> u32 {
        self.n_wk[w * self.k + k]
    }

    pub fn n_k(&self, k: usize) -> u32 {
        self.n_k[k]
    }

    pub fn total_tokens(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Verifies the count tables against the assignments by recounting.
    pub fn check_counts(&self) -> std::result::Result<(), String> {
        let mut n_dk = vec![0u32; self.n_dk.len()];
        let mut n_wk = vec![0u32; self.n_wk.len()];
        let mut n_k = vec![0u32; self.k];
        for (d, (ws, zs)) in self.words.iter().zip(&self.z).enumerate() {
            for (&w, &t) in ws.iter().zip(zs) {
                n_dk[d * self.k + t as usize] += 1;
                n_wk[w as usize * self.k + t as usize] += 1;
                n_k[t as usize] += 1;
            }
        }
        if n_dk != self.n_dk {
            return Err("document-topic counts disagree with assignments".into());
        }
        if n_wk != self.n_wk {
            return Err("topic-word counts disagree with assignments".into());
        }
        if n_k != self.n_k {
            return Err("topic totals disagree with assignments".into());
        }
        let total: u64 = self.n_k.iter().map(|&n| u64::from(n)).sum();
        if total as usize != self.total_tokens() {
            return Err("topic totals do not sum to the token count".into());
        }
        Ok(())
    }

    /// Joint log-likelihood ln p(w, z) with θ and φ integrated out.
    pub fn log_likelihood(&self, alpha: f64, beta: f64) -> f64 {
        let (k, v) = (self.k as f64, self.v as f64);
        let mut ll = 0.0;
        let lg_beta = ln_gamma(beta);
        for t in 0..self.k {
            ll += ln_gamma(v * beta) - ln_gamma(f64::from(self.n_k[t]) + v * beta);
        }
        for &n in self.n_wk.iter().filter(|&&n| n > 0) {
            ll += ln_gamma(f64::from(n) + beta) - lg_beta;
        }
        let lg_alpha = ln_gamma(alpha);
        for (d, ws) in self.words.iter().enumerate() {
            ll += ln_gamma(k * alpha) - ln_gamma(ws.len() as f64 + k * alpha);
            for &n in self.n_dk[d * self.k..(d + 1) * self.k].iter().filter(|&&n| n > 0) {
                ll += ln_gamma(f64::from(n) + alpha) - lg_alpha;
            }
        }
        ll
    }
}

/// Unnormalized conditional weights for term `w` in document `d`, written
/// into `out`. Returns their sum.
fn conditional_weights(state: &LdaState, alpha: f64, beta: f64, d: usize, w: u32, out: &mut [f64]) -> f64 {
    let k = state.k;
    let vbeta = state.v as f64 * beta;
    let dk = &state.n_dk[d * k..(d + 1) * k];
    let wk = &state.n_wk[w as usize * k..(w as usize + 1) * k];
    let mut total = 0.0;
    for t in 0..k {
        let p = (f64::from(dk[t]) + alpha) * (f64::from(wk[t]) + beta) / (f64::from(state.n_k[t]) + vbeta);
        out[t] = p;
        total += p;
    }
    total
}

/// Normalized full conditional for token (d, i). The token must already have
/// been removed from the counts ([`LdaState::remove_token`]).
pub fn conditional(state: &LdaState, cfg: &LdaConfig, d: usize, i: usize) -> Vec<f64> {
    let mut p = vec![0.0; state.k];
    let total = conditional_weights(state, cfg.alpha, cfg.beta, d, state.words[d][i], &mut p);
    for x in &mut p {
        *x /= total;
    }
    p
}

fn sample_index(weights: &[f64], total: f64, rng: &mut PipelineRng) -> usize {
    let mut u = rng.random::<f64>() * total;
    for (t, &p) in weights.iter().enumerate() {
        u -= p;
        if u < 0.0 {
            return t;
        }
    }
    // rounding left u marginally non-negative; fall back to the last nonzero weight
    weights.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// One pass over every token in document order, resampling each topic.
pub fn gibbs_sweep(state: &mut LdaState, cfg: &LdaConfig, rng: &mut PipelineRng) {
    let mut buf = vec![0.0; state.k];
    for d in 0..state.words.len() {
        for i in 0..state.words[d].len() {
            let w = state.words[d][i];
            let old = state.z[d][i] as usize;
            state.sub(d, w, old);
            let total = conditional_weights(state, cfg.alpha, cfg.beta, d, w, &mut buf);
            let new = sample_index(&buf, total, rng);
            state.z[d][i] = new as u32;
            state.add(d, w, new);
        }
    }
}

/// A running chain: state, RNG and the post-burn-in count accumulators.
pub struct GibbsSampler {
    cfg: LdaConfig,
    state: LdaState,
    rng: PipelineRng,
    sweeps_done: usize,
    averaged: u64,
    sum_dk: Vec<u64>,
    sum_wk: Vec<u64>,
}

impl GibbsSampler {
    pub fn new(docs: &[Document], n_terms: usize, cfg: &LdaConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = rng::seeded(cfg.seed);
        let state = LdaState::init(docs, n_terms, cfg.k, &mut rng)?;
        Ok(GibbsSampler {
            sum_dk: vec![0; state.n_dk.len()],
            sum_wk: vec![0; state.n_wk.len()],
            cfg: cfg.clone(),
            state,
            rng,
            sweeps_done: 0,
            averaged: 0,
        })
    }

    pub fn state(&self) -> &LdaState {
        &self.state
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps_done
    }

    /// Runs one sweep; after burn-in, adds the counts to the running means.
    pub fn sweep(&mut self) {
        gibbs_sweep(&mut self.state, &self.cfg, &mut self.rng);
        self.sweeps_done += 1;
        if cfg!(debug_assertions) || self.sweeps_done.is_multiple_of(100) {
            if let Err(e) = self.state.check_counts() {
                panic!("count tables corrupted after sweep {}: {e}", self.sweeps_done);
            }
        }
        if self.sweeps_done > self.cfg.burn_in {
            self.averaged += 1;
            for (s, &n) in self.sum_dk.iter_mut().zip(&self.state.n_dk) {
                *s += u64::from(n);
            }
            for (s, &n) in self.sum_wk.iter_mut().zip(&self.state.n_wk) {
                *s += u64::from(n);
            }
        }
    }

    fn estimate(&self, dk: &[f64], wk: &[f64], scale: f64, doc_ids: Vec<String>) -> LdaModel {
        let (k, v) = (self.state.k, self.state.v);
        let LdaConfig { alpha, beta, .. } = self.cfg;
        let mut n_k = vec![0.0; k];
        for w in 0..v {
            for t in 0..k {
                n_k[t] += wk[w * k + t];
            }
        }
        let phi = (0..k)
            .map(|t| {
                let denom = n_k[t] + scale * v as f64 * beta;
                (0..v).map(|w| (wk[w * k + t] + scale * beta) / denom).collect()
            })
            .collect();
        let theta = self
            .state
            .words
            .iter()
            .enumerate()
            .map(|(d, ws)| {
                let denom = scale * (ws.len() as f64 + k as f64 * alpha);
                (0..k).map(|t| (dk[d * k + t] + scale * alpha) / denom).collect()
            })
            .collect();
        LdaModel {
            config: self.cfg.clone(),
            vocab_hash: String::new(),
            phi,
            theta,
            doc_ids,
        }
    }

    /// φ and θ from the current assignments alone.
    pub fn current_estimate(&self) -> LdaModel {
        let dk: Vec<f64> = self.state.n_dk.iter().map(|&n| f64::from(n)).collect();
        let wk: Vec<f64> = self.state.n_wk.iter().map(|&n| f64::from(n)).collect();
        self.estimate(&dk, &wk, 1.0, Vec::new())
    }

    /// Posterior-mean φ and θ over the post-burn-in sweeps run so far, or the
    /// current assignments if none have been averaged yet.
    pub fn posterior_mean(&self) -> LdaModel {
        if self.averaged == 0 {
            return self.current_estimate();
        }
        // Scaling the prior by the sweep count keeps the sums integral.
        let dk: Vec<f64> = self.sum_dk.iter().map(|&n| n as f64).collect();
        let wk: Vec<f64> = self.sum_wk.iter().map(|&n| n as f64).collect();
        self.estimate(&dk, &wk, self.averaged as f64, Vec::new())
    }
}

/// Runs `cfg.iterations` sweeps and returns the posterior-mean model along
/// with the per-sweep joint log-likelihood.
pub fn train_with_trace(docs: &[Document], vocab: &Vocabulary, cfg: &LdaConfig) -> Result<(LdaModel, Vec<f64>)> {
    let mut sampler = GibbsSampler::new(docs, vocab.len(), cfg)?;
    let mut trace = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        sampler.sweep();
        trace.push(sampler.state.log_likelihood(cfg.alpha, cfg.beta));
    }
    let mut model = sampler.posterior_mean();
    model.vocab_hash = vocab.digest();
    model.doc_ids = docs.iter().map(|d| d.source_id.clone()).collect();
    Ok((model, trace))
}

pub fn train(docs: &[Document], vocab: &Vocabulary, cfg: &LdaConfig) -> Result<LdaModel> {
    let mut sampler = GibbsSampler::new(docs, vocab.len(), cfg)?;
    for _ in 0..cfg.iterations {
        sampler.sweep();
    }
    let mut model = sampler.posterior_mean();
    model.vocab_hash = vocab.digest();
    model.doc_ids = docs.iter().map(|d| d.source_id.clone()).collect();
    Ok(model)
}

/// Independent chains seeded `cfg.seed + i`, run concurrently. Results are in
/// chain order and never merged.
pub fn train_chains(
    docs: &[Document],
    vocab: &Vocabulary,
    cfg: &LdaConfig,
    chains: usize,
) -> Result<Vec<(LdaModel, Vec<f64>)>> {
    use rayon::prelude::*;
    (0..chains)
        .into_par_iter()
        .map(|i| {
            let cfg = LdaConfig {
                seed: cfg.seed.wrapping_add(i as u64),
                ..cfg.clone()
            };
            train_with_trace(docs, vocab, &cfg)
        })
        .collect()
}
