use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textprep::Document;

/// Dense term ↔ id map with document frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<u32>,
    term_to_id: HashMap<String, u32>,
    n_docs: u32,
}

impl Vocabulary {
    /// Builds from (term, df) pairs; ids follow the given order.
    pub fn from_terms(entries: Vec<(String, u32)>, n_docs: u32) -> Self {
        let mut terms = Vec::with_capacity(entries.len());
        let mut doc_freq = Vec::with_capacity(entries.len());
        let mut term_to_id = HashMap::with_capacity(entries.len());
        for (i, (term, df)) in entries.into_iter().enumerate() {
            let prev = term_to_id.insert(term.clone(), i as u32);
            assert!(prev.is_none(), "duplicate vocabulary term {term:?}");
            terms.push(term);
            doc_freq.push(df);
        }
        Vocabulary {
            terms,
            doc_freq,
            term_to_id,
            n_docs,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.term_to_id.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn doc_freq(&self, id: u32) -> u32 {
        self.doc_freq[id as usize]
    }

    pub fn idf(&self, id: u32) -> f64 {
        tfidf_weight(1, self.doc_freq(id), self.n_docs)
    }

    /// TSV with header `term id df idf`, rows in id order. The first line
    /// records the document count.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# n_docs={}\nterm\tid\tdf\tidf\n", self.n_docs);
        for (i, term) in self.terms.iter().enumerate() {
            let id = i as u32;
            let _ = writeln!(out, "{term}\t{id}\t{}\t{:.6}", self.doc_freq(id), self.idf(id));
        }
        out
    }

    pub fn from_tsv(content: &str) -> Result<Self> {
        let mut n_docs = None;
        let mut entries = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let bad = |reason: &str| Error::Config(format!("vocabulary line {}: {reason}", lineno + 1));
            if let Some(rest) = line.strip_prefix("# n_docs=") {
                n_docs = Some(rest.trim().parse::<u32>().map_err(|_| bad("bad n_docs"))?);
                continue;
            }
            if line.starts_with('#') || line.starts_with("term\t") || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 3 {
                return Err(bad("expected term, id, df"));
            }
            let id: usize = cols[1].parse().map_err(|_| bad("bad id"))?;
            if id != entries.len() {
                return Err(bad("ids must be dense and ascending"));
            }
            let df: u32 = cols[2].parse().map_err(|_| bad("bad df"))?;
            entries.push((cols[0].to_string(), df));
        }
        let n_docs = n_docs.ok_or_else(|| Error::Config("vocabulary missing n_docs header".into()))?;
        Ok(Vocabulary::from_terms(entries, n_docs))
    }

    /// SHA-256 of the TSV dump; binds a model to the vocabulary it was trained on.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_tsv().as_bytes()))
    }
}

/// `tf · ln(n_docs / df)`, natural log, unsmoothed.
pub fn tfidf_weight(tf: u32, df: u32, n_docs: u32) -> f64 {
    debug_assert!(df >= 1 && n_docs >= df);
    if tf == 0 || df == n_docs {
        return 0.0;
    }
    f64::from(tf) * (f64::from(n_docs) / f64::from(df)).ln()
}

/// Keeps terms with `df >= min_df` and `df / N <= max_df_ratio`, assigning
/// ids by descending df, ties in lexicographic order.
pub fn build_vocabulary(docs: &[Vec<String>], min_df: usize, max_df_ratio: f64) -> Result<Vocabulary> {
    let n_docs = docs.len();
    let df: HashMap<&str, u32> = docs
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<&str, u32>, doc| {
            let distinct: HashSet<&str> = doc.iter().map(String::as_str).collect();
            for t in distinct {
                *acc.entry(t).or_default() += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (t, n) in b {
                *a.entry(t).or_default() += n;
            }
            a
        });
    let mut kept: Vec<(String, u32)> = df
        .into_iter()
        .filter(|&(_, d)| d as usize >= min_df && f64::from(d) / n_docs as f64 <= max_df_ratio)
        .map(|(t, d)| (t.to_string(), d))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary { min_df, max_df_ratio });
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(Vocabulary::from_terms(kept, n_docs as u32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermImportance {
    pub id: u32,
    pub tfidf_sum: f64,
}

/// Corpus-wide Σ_d tf·idf per term, highest first (ties by id).
pub fn term_importance(vocab: &Vocabulary, docs: &[Document]) -> Vec<TermImportance> {
    let mut sums = vec![0.0f64; vocab.len()];
    for doc in docs {
        for &(id, tf) in &doc.counts {
            sums[id as usize] += tfidf_weight(tf, vocab.doc_freq(id), vocab.n_docs());
        }
    }
    let mut out: Vec<TermImportance> = sums
        .into_iter()
        .enumerate()
        .map(|(i, tfidf_sum)| TermImportance {
            id: i as u32,
            tfidf_sum,
        })
        .collect();
    out.sort_by(|a, b| b.tfidf_sum.total_cmp(&a.tfidf_sum).then(a.id.cmp(&b.id)));
    out
}
