//! Pipeline stages. Each stage reads its inputs from and writes its outputs
//! to one output directory, so any stage can be rerun on its own.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::corpus::{ingest, load_records, IngestOptions, IngestReport, InputFormat, TweetRecord};
use crate::error::{Error, Result};
use crate::geotag::{assign_countries, load_gazetteer, match_locations, Gazetteer, TARGET_COUNTRIES};
use crate::lda::{self, perplexity_with_theta, LdaModel, SweepOptions};
use crate::textprep::{
    build_vocabulary, parse_term_list, read_term_list, term_importance, Document, Preprocessor, Vocabulary,
    BUNDLED_DOMAIN_TERMS, BUNDLED_STOPLIST,
};
use crate::trends::{self, TrendTable};

pub const CONFIG_ECHO: &str = "config.txt";
pub const RECORDS: &str = "records.jsonl";
pub const INGEST_REPORT: &str = "ingest_report.txt";
pub const VOCAB: &str = "vocab.tsv";
pub const DOCS: &str = "docs.jsonl";
pub const TERM_IMPORTANCE: &str = "term_importance.tsv";
pub const PREP_REPORT: &str = "prep_report.txt";
pub const COUNTRIES: &str = "countries.tsv";
pub const GEOTAG_REPORT: &str = "geotag_report.txt";
pub const MODEL: &str = "model.json";
pub const LOGLIK: &str = "loglik.tsv";
pub const CHAINS: &str = "chains.tsv";
pub const SWEEP: &str = "sweep_k.tsv";
pub const MODEL_DUMP: &str = "model_dump.tsv";
pub const DIGESTS: &str = "digests.txt";
pub const TOPICS: &str = "topics.csv";
pub const TOPIC_TOTALS: &str = "topic_totals.csv";
pub const TRENDS: &str = "trends.csv";
pub const TRENDS_COUNTRY: &str = "trends_country.csv";
pub const COUNTRY_TOP: &str = "country_top_topics.csv";
pub const TRENDS_DAT: &str = "trends.dat";
pub const TRENDS_SVG: &str = "trends.svg";
pub const CASES_JOINED: &str = "trends_cases.csv";

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    require(path)?;
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn require(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::MissingInput(path.to_path_buf()))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn prepare_dir(out: &Path, cfg: &PipelineConfig) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_file(&out.join(CONFIG_ECHO), &cfg.echo())
}

fn term_list_source(path: &Option<PathBuf>, bundled: &str) -> Result<String> {
    match path {
        Some(p) => read_file(p),
        None => Ok(bundled.to_string()),
    }
}

pub fn preprocessor(cfg: &PipelineConfig) -> Result<Preprocessor> {
    let stop = match &cfg.stoplist {
        Some(p) => read_term_list(p)?,
        None => parse_term_list(BUNDLED_STOPLIST),
    };
    let domain = match &cfg.domain_terms {
        Some(p) => read_term_list(p)?,
        None => parse_term_list(BUNDLED_DOMAIN_TERMS),
    };
    Ok(Preprocessor::new(stop, domain))
}

pub fn gazetteer(cfg: &PipelineConfig) -> Result<Gazetteer> {
    match &cfg.gazetteer {
        Some(p) => {
            let (g, diagnostics) = load_gazetteer(p)?;
            for d in diagnostics {
                log::warn!("{}:{}: {}", p.display(), d.line, d.reason);
            }
            Ok(g)
        }
        None => Ok(Gazetteer::bundled()),
    }
}

fn write_jsonl<T: serde::Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_records(out: &Path) -> Result<Vec<TweetRecord>> {
    let path = out.join(RECORDS);
    require(&path)?;
    let mut reader = load_records(&path, InputFormat::Jsonl)?;
    let records: Vec<TweetRecord> = reader.by_ref().collect();
    let report = reader.finish()?;
    if let Some(d) = report.diagnostics.first() {
        return Err(Error::Malformed {
            path,
            line: d.line,
            reason: d.reason.clone(),
        });
    }
    Ok(records)
}

pub fn read_docs(out: &Path) -> Result<Vec<Document>> {
    let path = out.join(DOCS);
    require(&path)?;
    let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
    let mut docs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(&path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| Error::Malformed {
            path: path.clone(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn read_vocab(out: &Path) -> Result<Vocabulary> {
    Vocabulary::from_tsv(&read_file(&out.join(VOCAB))?)
}

pub fn read_model(path: &Path) -> Result<LdaModel> {
    Ok(serde_json::from_str(&read_file(path)?)?)
}

/// Loads, filters and samples the raw corpus into `records.jsonl`.
pub fn run_ingest(cfg: &PipelineConfig, input: &Path, out: &Path) -> Result<IngestReport> {
    require(input)?;
    prepare_dir(out, cfg)?;
    let mut reader = load_records(input, cfg.format)?;
    let opts = IngestOptions {
        window: cfg.window,
        sample_per_week: cfg.sample_per_week,
        seed: cfg.seed,
        english_only: cfg.english_only,
    };
    let mut report = IngestReport::default();
    let kept = ingest(reader.by_ref(), &opts, &mut report)?;
    let load = reader.finish()?;
    report.lines = load.lines;
    report.malformed = load.diagnostics;
    write_jsonl(&out.join(RECORDS), &kept)?;
    write_file(&out.join(INGEST_REPORT), &report.to_string())?;
    log::info!("ingest: kept {} of {} lines", report.kept, report.lines);
    if kept.is_empty() {
        return Err(Error::EmptyCorpus(format!(
            "no record of {} survived ingest",
            input.display()
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepReport {
    pub records: usize,
    pub documents: usize,
    pub empty_documents: usize,
    pub vocabulary: usize,
    pub out_of_vocabulary_tokens: usize,
}

/// Builds the vocabulary and bag-of-words documents from `records.jsonl`.
/// Documents left with no in-vocabulary token are dropped.
pub fn run_prep(cfg: &PipelineConfig, out: &Path) -> Result<PrepReport> {
    prepare_dir(out, cfg)?;
    let records = read_records(out)?;
    let pre = preprocessor(cfg)?;
    let terms: Vec<Vec<String>> = records.par_iter().map(|r| pre.terms(&r.text)).collect();
    let vocab = build_vocabulary(&terms, cfg.min_df, cfg.max_df_ratio)?;
    let mut docs = Vec::with_capacity(records.len());
    let mut oov = 0;
    for (r, ts) in records.iter().zip(&terms) {
        let ids: Vec<u32> = ts.iter().filter_map(|t| vocab.id(t)).collect();
        oov += ts.len() - ids.len();
        if !ids.is_empty() {
            let week = crate::corpus::week_index(r.created_at, &cfg.window)?;
            docs.push(Document::from_term_ids(r.id.clone(), week, ids));
        }
    }
    let report = PrepReport {
        records: records.len(),
        documents: docs.len(),
        empty_documents: records.len() - docs.len(),
        vocabulary: vocab.len(),
        out_of_vocabulary_tokens: oov,
    };
    write_file(&out.join(VOCAB), &vocab.to_tsv())?;
    write_jsonl(&out.join(DOCS), &docs)?;
    let mut imp = String::from("term\ttfidf_sum\n");
    for t in term_importance(&vocab, &docs) {
        let _ = writeln!(imp, "{}\t{:.6}", vocab.term(t.id), t.tfidf_sum);
    }
    write_file(&out.join(TERM_IMPORTANCE), &imp)?;
    write_file(
        &out.join(PREP_REPORT),
        &format!(
            "records\t{}\ndocuments\t{}\ndropped_empty\t{}\nvocabulary\t{}\nout_of_vocabulary_tokens\t{}\nvocabulary_sha256\t{}\n",
            report.records,
            report.documents,
            report.empty_documents,
            report.vocabulary,
            report.out_of_vocabulary_tokens,
            vocab.digest()
        ),
    )?;
    log::info!("prep: {} documents over {} terms", report.documents, report.vocabulary);
    Ok(report)
}

/// Tags every record in `records.jsonl` with countries; writes `countries.tsv`.
pub fn run_geotag(cfg: &PipelineConfig, out: &Path) -> Result<BTreeMap<String, usize>> {
    prepare_dir(out, cfg)?;
    let records = read_records(out)?;
    let g = gazetteer(cfg)?;
    let tags: Vec<BTreeSet<String>> = records.par_iter().map(|r| match_locations(&r.text, &g)).collect();
    let mut tsv = String::from("id\tcountries\n");
    let mut per_country: BTreeMap<String, usize> = TARGET_COUNTRIES.iter().map(|c| (c.to_string(), 0)).collect();
    let mut untagged = 0;
    for (r, t) in records.iter().zip(&tags) {
        let _ = writeln!(tsv, "{}\t{}", r.id, t.iter().cloned().collect::<Vec<_>>().join(","));
        if t.is_empty() {
            untagged += 1;
        }
        for c in t {
            *per_country.entry(c.clone()).or_default() += 1;
        }
    }
    write_file(&out.join(COUNTRIES), &tsv)?;
    let mut report = format!(
        "records\t{}\nuntagged\t{untagged}\ngazetteer_entries\t{}\ngazetteer_sha256\t{}\n",
        records.len(),
        g.len(),
        g.digest()
    );
    for (c, n) in &per_country {
        let _ = writeln!(report, "tagged_{c}\t{n}");
    }
    write_file(&out.join(GEOTAG_REPORT), &report)?;
    log::info!(
        "geotag: {} of {} records tagged",
        records.len() - untagged,
        records.len()
    );
    Ok(per_country)
}

fn read_countries(out: &Path) -> Result<HashMap<String, BTreeSet<String>>> {
    let path = out.join(COUNTRIES);
    let content = read_file(&path)?;
    let mut map = HashMap::new();
    for (i, line) in content.lines().enumerate().skip(1) {
        let (id, cs) = line.split_once('\t').ok_or_else(|| Error::Malformed {
            path: path.clone(),
            line: i + 1,
            reason: "expected id and countries".into(),
        })?;
        let set = cs.split(',').filter(|c| !c.is_empty()).map(str::to_string).collect();
        map.insert(id.to_string(), set);
    }
    Ok(map)
}

fn loglik_tsv(trace: &[f64]) -> String {
    let mut out = String::from("sweep\tlog_likelihood\n");
    for (i, ll) in trace.iter().enumerate() {
        let _ = writeln!(out, "{}\t{ll:.6}", i + 1);
    }
    out
}

/// Trains on `docs.jsonl`. One chain writes `model.json`; several chains
/// write `model_chain{i}.json` each plus a summary, and no `model.json`.
pub fn run_train(cfg: &PipelineConfig, out: &Path, chains: usize) -> Result<()> {
    prepare_dir(out, cfg)?;
    let vocab = read_vocab(out)?;
    let docs = read_docs(out)?;
    let lda_cfg = cfg.lda();
    if chains <= 1 {
        let (model, trace) = lda::train_with_trace(&docs, &vocab, &lda_cfg)?;
        write_file(&out.join(MODEL), &serde_json::to_string(&model)?)?;
        write_file(&out.join(LOGLIK), &loglik_tsv(&trace))?;
        log::info!("train: K={} over {} documents", lda_cfg.k, docs.len());
        return Ok(());
    }
    let results = lda::train_chains(&docs, &vocab, &lda_cfg, chains)?;
    let mut summary = String::from("chain\tseed\tfinal_log_likelihood\ttraining_perplexity\n");
    for (i, (model, trace)) in results.iter().enumerate() {
        write_file(
            &out.join(format!("model_chain{i}.json")),
            &serde_json::to_string(model)?,
        )?;
        write_file(&out.join(format!("loglik_chain{i}.tsv")), &loglik_tsv(trace))?;
        let _ = writeln!(
            summary,
            "{i}\t{}\t{:.6}\t{:.6}",
            model.config.seed,
            trace.last().copied().unwrap_or(f64::NAN),
            perplexity_with_theta(&model.phi, &model.theta, &docs)
        );
    }
    write_file(&out.join(CHAINS), &summary)
}

/// Held-out perplexity for each K; writes `sweep_k.tsv` and returns its text.
pub fn run_sweep(cfg: &PipelineConfig, out: &Path, ks: &[usize]) -> Result<String> {
    prepare_dir(out, cfg)?;
    let vocab = read_vocab(out)?;
    let docs = read_docs(out)?;
    let opts = SweepOptions {
        heldout_fraction: cfg.heldout_fraction,
        alpha: cfg.alpha,
    };
    let rows = lda::sweep_k(&docs, &vocab, ks, &cfg.lda(), &opts)?;
    let tsv = lda::sweep_tsv(&rows);
    write_file(&out.join(SWEEP), &tsv)?;
    Ok(tsv)
}

/// Aggregates dominant topics into the trend tables and their renderings.
pub fn run_trends(cfg: &PipelineConfig, out: &Path) -> Result<TrendTable> {
    prepare_dir(out, cfg)?;
    let vocab = read_vocab(out)?;
    let model = read_model(&out.join(MODEL))?;
    let countries = read_countries(out)?;
    let docs: Vec<Document> = read_docs(out)?
        .into_iter()
        .map(|d| {
            let tags = countries.get(&d.source_id).cloned().unwrap_or_default();
            assign_countries(d, tags)
        })
        .collect();
    let table = trends::build_trends(&docs, &vocab.digest(), &model, cfg.window.week_count())?;

    write_file(&out.join(TOPICS), &trends::topics_csv(&model, &vocab, cfg.top_terms))?;
    write_file(&out.join(TOPIC_TOTALS), &trends::topic_totals_csv(&table))?;
    write_file(&out.join(TRENDS), &trends::trends_csv(&table))?;
    write_file(&out.join(TRENDS_COUNTRY), &trends::trends_country_csv(&table))?;
    write_file(&out.join(COUNTRY_TOP), &trends::country_top_csv(&table, cfg.top_topics))?;
    let topics = table.topics_present();
    write_file(&out.join(TRENDS_DAT), &trends::gnuplot_dat(&table, None, &topics))?;
    write_file(
        &out.join(TRENDS_SVG),
        &trends::svg_lines(&table, None, &topics, "Weekly tweets per topic, worldwide"),
    )?;
    for c in TARGET_COUNTRIES {
        let top = trends::top_n_topics(&table, c, cfg.top_topics);
        write_file(
            &out.join(format!("trends_{c}.dat")),
            &trends::gnuplot_dat(&table, Some(c), &top),
        )?;
        write_file(
            &out.join(format!("trends_{c}.svg")),
            &trends::svg_lines(&table, Some(c), &top, &format!("Weekly tweets per top topic, {c}")),
        )?;
    }
    if let Some(path) = &cfg.cases {
        let cases = trends::load_case_counts(path, &cfg.case_region, &cfg.window)?;
        write_file(
            &out.join(CASES_JOINED),
            &trends::joined_csv(&trends::join_case_counts(&table, &cases)),
        )?;
    }
    log::info!(
        "trends: {} documents over {} topics",
        table.total_documents(),
        topics.len()
    );
    Ok(table)
}

/// Writes the human-readable dump of `model.json` to `model_dump.tsv`.
pub fn run_model_dump(out: &Path) -> Result<()> {
    let model = read_model(&out.join(MODEL))?;
    let vocab = read_vocab(out).ok().filter(|v| v.digest() == model.vocab_hash);
    write_file(&out.join(MODEL_DUMP), &model.dump_tsv(vocab.as_ref()))
}

/// Digests of every dictionary and vocabulary the bundle depends on.
pub fn write_digests(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let vocab = read_vocab(out)?;
    let g = gazetteer(cfg)?;
    let stop = term_list_source(&cfg.stoplist, BUNDLED_STOPLIST)?;
    let domain = term_list_source(&cfg.domain_terms, BUNDLED_DOMAIN_TERMS)?;
    let text = format!(
        "vocabulary_sha256\t{}\ngazetteer_sha256\t{}\nstoplist_sha256\t{}\ndomain_terms_sha256\t{}\n",
        vocab.digest(),
        g.digest(),
        sha256_hex(stop.as_bytes()),
        sha256_hex(domain.as_bytes())
    );
    write_file(&out.join(DIGESTS), &text)
}

/// Every stage in order, producing the full output bundle.
pub fn run_report(cfg: &PipelineConfig, input: &Path, out: &Path) -> Result<TrendTable> {
    run_ingest(cfg, input, out)?;
    run_prep(cfg, out)?;
    run_geotag(cfg, out)?;
    run_train(cfg, out, 1)?;
    let table = run_trends(cfg, out)?;
    run_model_dump(out)?;
    write_digests(cfg, out)?;
    Ok(table)
}
