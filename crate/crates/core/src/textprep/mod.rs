//! Text preprocessing: tokens, stopword and domain-term filtering, stemming,
//! vocabulary construction and TF-IDF weights.

mod porter;
mod tokenize;
mod vocab;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use porter::stem;
pub use tokenize::tokenize;
pub use vocab::{build_vocabulary, term_importance, tfidf_weight, TermImportance, Vocabulary};

use crate::corpus::{week_index, StudyWindow, TweetRecord};
use crate::error::{Error, Result};

pub const BUNDLED_STOPLIST: &str = include_str!("../../data/stoplist.txt");
pub const BUNDLED_DOMAIN_TERMS: &str = include_str!("../../data/domain_terms.txt");

/// Parses a term list: one lowercase term per line, `#` starts a comment.
pub fn parse_term_list(content: &str) -> HashSet<String> {
    content
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn read_term_list(path: &Path) -> Result<HashSet<String>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_term_list(&content))
}

pub fn remove_stopwords(tokens: Vec<String>, stoplist: &HashSet<String>) -> Vec<String> {
    tokens.into_iter().filter(|t| !stoplist.contains(t)).collect()
}

/// Same filter as [`remove_stopwords`], applied to the corpus-specific list
/// before stemming.
pub fn remove_domain_terms(tokens: Vec<String>, domain_terms: &HashSet<String>) -> Vec<String> {
    tokens.into_iter().filter(|t| !domain_terms.contains(t)).collect()
}

/// The full text pipeline: tokenize, drop stopwords and domain terms, apply
/// lemma overrides, stem.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    stoplist: HashSet<String>,
    domain_terms: HashSet<String>,
    /// Token → lemma replacements applied before stemming. Empty unless
    /// configured.
    lemmas: HashMap<String, String>,
}

impl Preprocessor {
    pub fn new(stoplist: HashSet<String>, domain_terms: HashSet<String>) -> Self {
        Preprocessor {
            stoplist,
            domain_terms,
            lemmas: HashMap::new(),
        }
    }

    pub fn bundled() -> Self {
        Preprocessor::new(parse_term_list(BUNDLED_STOPLIST), parse_term_list(BUNDLED_DOMAIN_TERMS))
    }

    pub fn with_lemmas(mut self, lemmas: HashMap<String, String>) -> Self {
        self.lemmas = lemmas;
        self
    }

    pub fn stoplist(&self) -> &HashSet<String> {
        &self.stoplist
    }

    pub fn domain_terms(&self) -> &HashSet<String> {
        &self.domain_terms
    }

    pub fn terms(&self, text: &str) -> Vec<String> {
        let tokens = remove_stopwords(tokenize(text), &self.stoplist);
        remove_domain_terms(tokens, &self.domain_terms)
            .into_iter()
            .map(|t| match self.lemmas.get(&t) {
                Some(lemma) => stem(lemma),
                None => stem(&t),
            })
            .collect()
    }
}

/// Bag-of-words document over a fixed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub source_id: String,
    pub week: u32,
    /// (term id, count) pairs, ascending by id, counts positive.
    pub counts: Vec<(u32, u32)>,
    pub length: u32,
    #[serde(default)]
    pub countries: BTreeSet<String>,
}

impl Document {
    pub fn from_term_ids(source_id: impl Into<String>, week: u32, ids: impl IntoIterator<Item = u32>) -> Self {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for id in ids {
            *counts.entry(id).or_default() += 1;
        }
        let length = counts.values().sum();
        Document {
            source_id: source_id.into(),
            week,
            counts: counts.into_iter().collect(),
            length,
            countries: BTreeSet::new(),
        }
    }

    /// Token ids with multiplicity, in ascending id order.
    pub fn tokens(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts
            .iter()
            .flat_map(|&(id, n)| std::iter::repeat_n(id, n as usize))
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }
}

/// Result of running one record through the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Converted {
    /// `None` when no in-vocabulary token survived.
    pub document: Option<Document>,
    pub out_of_vocabulary: usize,
}

pub fn to_document(
    record: &TweetRecord,
    vocab: &Vocabulary,
    window: &StudyWindow,
    pre: &Preprocessor,
) -> Result<Converted> {
    let week = week_index(record.created_at, window)?;
    let mut oov = 0;
    let mut ids = Vec::new();
    for term in pre.terms(&record.text) {
        match vocab.id(&term) {
            Some(id) => ids.push(id),
            None => oov += 1,
        }
    }
    let document = (!ids.is_empty()).then(|| Document::from_term_ids(record.id.clone(), week, ids));
    Ok(Converted {
        document,
        out_of_vocabulary: oov,
    })
}
