use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LdaConfig;
use crate::rng;
use crate::textprep::{Document, Vocabulary};

/// Number of Gibbs sweeps used to infer θ for unseen documents.
pub const FOLD_IN_SWEEPS: usize = 20;

/// A trained topic model: φ (K × V) and θ (D × K), both row-stochastic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub config: LdaConfig,
    /// Digest of the vocabulary the model was trained on.
    pub vocab_hash: String,
    pub phi: Vec<Vec<f64>>,
    pub theta: Vec<Vec<f64>>,
    /// Source ids of the training documents, one per θ row.
    pub doc_ids: Vec<String>,
}

impl LdaModel {
    pub fn num_topics(&self) -> usize {
        self.phi.len()
    }

    pub fn num_terms(&self) -> usize {
        self.phi.first().map_or(0, Vec::len)
    }

    /// The `n` most probable terms of topic `k` as (term id, φ), ties by id.
    /// Returns all V terms when `n > V`.
    pub fn top_words(&self, k: usize, n: usize) -> Vec<(u32, f64)> {
        let mut ranked: Vec<(u32, f64)> = self.phi[k].iter().enumerate().map(|(w, &p)| (w as u32, p)).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked.truncate(n);
        ranked
    }

    /// argmax of θ[d]; the lowest topic wins ties.
    pub fn dominant_topic(&self, d: usize) -> usize {
        dominant(&self.theta[d])
    }

    /// Human-readable dump: config, φ and θ in long format.
    pub fn dump_tsv(&self, vocab: Option<&Vocabulary>) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# k={} alpha={} beta={} iterations={} burn_in={} seed={}",
            c.k, c.alpha, c.beta, c.iterations, c.burn_in, c.seed
        );
        let _ = writeln!(out, "# vocab_hash={}", self.vocab_hash);
        out.push_str("section\trow\tcolumn\tweight\n");
        for (k, row) in self.phi.iter().enumerate() {
            for (w, p) in row.iter().enumerate() {
                match vocab {
                    Some(v) => writeln!(out, "phi\t{k}\t{}\t{p}", v.term(w as u32)),
                    None => writeln!(out, "phi\t{k}\t{w}\t{p}"),
                }
                .unwrap();
            }
        }
        for (d, row) in self.theta.iter().enumerate() {
            let id = self.doc_ids.get(d).map_or_else(|| d.to_string(), Clone::clone);
            for (k, p) in row.iter().enumerate() {
                let _ = writeln!(out, "theta\t{id}\t{k}\t{p}");
            }
        }
        out
    }
}

pub(crate) fn dominant(row: &[f64]) -> usize {
    let mut best = 0;
    for (k, &p) in row.iter().enumerate().skip(1) {
        if p > row[best] {
            best = k;
        }
    }
    best
}

/// Infers θ for `docs` with φ held fixed: topics start uniform at random and
/// are resampled `sweeps` times from p(k) ∝ (n_dk + α)·φ[k][w].
pub fn fold_in(model: &LdaModel, docs: &[Document], sweeps: usize, seed: u64) -> Vec<Vec<f64>> {
    let k = model.num_topics();
    let alpha = model.config.alpha;
    let mut rng = rng::seeded(seed);
    let mut weights = vec![0.0; k];
    docs.iter()
        .map(|doc| {
            let words: Vec<u32> = doc.tokens().collect();
            let mut n_k = vec![0u32; k];
            let mut z: Vec<usize> = words
                .iter()
                .map(|_| {
                    let t = rng.random_range(0..k);
                    n_k[t] += 1;
                    t
                })
                .collect();
            for _ in 0..sweeps {
                for (i, &w) in words.iter().enumerate() {
                    n_k[z[i]] -= 1;
                    let mut total = 0.0;
                    for t in 0..k {
                        weights[t] = (f64::from(n_k[t]) + alpha) * model.phi[t][w as usize];
                        total += weights[t];
                    }
                    let new = super::sample_index(&weights, total, &mut rng);
                    z[i] = new;
                    n_k[new] += 1;
                }
            }
            let denom = words.len() as f64 + k as f64 * alpha;
            n_k.iter().map(|&n| (f64::from(n) + alpha) / denom).collect()
        })
        .collect()
}

/// `exp(−Σ_d Σ_w c_dw · ln Σ_k θ_dk φ_kw / Σ_d len_d)` for the given θ rows.
/// NaN when the documents hold no tokens.
pub fn perplexity_with_theta(phi: &[Vec<f64>], theta: &[Vec<f64>], docs: &[Document]) -> f64 {
    assert_eq!(theta.len(), docs.len(), "one θ row per document");
    let mut log_lik = 0.0;
    let mut tokens = 0u64;
    for (doc, th) in docs.iter().zip(theta) {
        for &(w, c) in &doc.counts {
            let p: f64 = th.iter().zip(phi).map(|(t, row)| t * row[w as usize]).sum();
            log_lik += f64::from(c) * p.ln();
        }
        tokens += u64::from(doc.length);
    }
    (-log_lik / tokens as f64).exp()
}

/// Held-out perplexity: θ comes from [`FOLD_IN_SWEEPS`] fold-in sweeps
/// seeded with the model's seed.
pub fn perplexity(model: &LdaModel, docs: &[Document]) -> f64 {
    let theta = fold_in(model, docs, FOLD_IN_SWEEPS, model.config.seed);
    perplexity_with_theta(&model.phi, &theta, docs)
}
