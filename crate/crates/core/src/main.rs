use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use topic_trends::config::{PipelineConfig, CONFIG_ENV};
use topic_trends::error::{Error, Result};
use topic_trends::geotag::{compile_gazetteer, gazetteer_tsv, parse_geonames, CompileOptions, TARGET_COUNTRIES};
use topic_trends::lda::parse_ks;
use topic_trends::pipeline;

#[derive(Parser, Debug)]
#[command(
    name = "topic-trends",
    version,
    about = "Weekly topic and country trends from a timestamped short-text corpus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every pipeline stage. Each maps onto a config key.
#[derive(Args, Debug, Clone)]
struct Common {
    /// key = value config file; flags given here take precedence over it
    #[arg(long, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Output directory holding every stage's files
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for the parallel stages (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Study window, START:END (inclusive dates)
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    sample_per_week: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Number of topics
    #[arg(long)]
    k: Option<String>,
    /// Document-topic prior; "auto" means 50/K
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    iterations: Option<String>,
    #[arg(long)]
    burn_in: Option<String>,
    #[arg(long)]
    min_df: Option<String>,
    #[arg(long)]
    max_df_ratio: Option<String>,
    #[arg(long)]
    stoplist: Option<String>,
    #[arg(long)]
    domain_terms: Option<String>,
    #[arg(long)]
    gazetteer: Option<String>,
    #[arg(long)]
    heldout_fraction: Option<String>,
    /// Input format: jsonl or csv
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    english_only: Option<String>,
    #[arg(long)]
    top_terms: Option<String>,
    #[arg(long)]
    top_topics: Option<String>,
    /// Case counts CSV (date,region,confirmed) joined onto the weekly series
    #[arg(long)]
    cases: Option<String>,
    #[arg(long)]
    case_region: Option<String>,
}

impl Common {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        let fields = [
            ("window", &self.window),
            ("sample_per_week", &self.sample_per_week),
            ("seed", &self.seed),
            ("k", &self.k),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("iterations", &self.iterations),
            ("burn_in", &self.burn_in),
            ("min_df", &self.min_df),
            ("max_df_ratio", &self.max_df_ratio),
            ("stoplist", &self.stoplist),
            ("domain_terms", &self.domain_terms),
            ("gazetteer", &self.gazetteer),
            ("heldout_fraction", &self.heldout_fraction),
            ("format", &self.format),
            ("english_only", &self.english_only),
            ("top_terms", &self.top_terms),
            ("top_topics", &self.top_topics),
            ("cases", &self.cases),
            ("case_region", &self.case_region),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
            .collect()
    }

    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for (key, value) in self.overrides() {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load, deduplicate, filter and sample the raw corpus
    Ingest {
        /// Raw corpus (JSONL or CSV)
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Tokenize, stem and build the vocabulary and documents
    Prep {
        #[command(flatten)]
        common: Common,
    },
    /// Tag records with countries from the gazetteer and flag emoji
    Geotag {
        #[command(flatten)]
        common: Common,
    },
    /// Train the topic model
    Train {
        /// Independent chains with seeds seed, seed+1, ...; reported separately
        #[arg(long, default_value_t = 1)]
        chains: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Held-out perplexity for a range of topic counts
    SweepK {
        /// START:END or a comma list
        #[arg(long, default_value = "5:20")]
        ks: String,
        #[command(flatten)]
        common: Common,
    },
    /// Weekly trend tables and charts from a trained model
    Trends {
        #[command(flatten)]
        common: Common,
    },
    /// Run every stage and write the full output bundle
    Report {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build a gazetteer TSV from a GeoNames export
    CompileGazetteer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "US,CN,GB,CA")]
        countries: String,
        #[arg(long, default_value_t = 100_000)]
        min_population: u64,
        /// Destination TSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Model file utilities
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
}

#[derive(Subcommand, Debug)]
enum ModelAction {
    /// Print φ and θ as TSV
    Dump {
        /// Model file (default: <out>/model.json)
        #[arg(long)]
        model: Option<PathBuf>,
        /// Directory holding the model and its vocabulary
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn set_workers(n: Option<usize>) {
    if let Some(n) = n {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("worker pool already configured: {e}");
        }
    }
}

fn compile(input: &Path, countries: &str, min_population: u64, out: &Path) -> Result<()> {
    let countries: Vec<String> = countries.split(',').map(|c| c.trim().to_uppercase()).collect();
    if let Some(c) = countries.iter().find(|c| !TARGET_COUNTRIES.contains(&c.as_str())) {
        return Err(Error::Config(format!(
            "{c} is not one of {}",
            TARGET_COUNTRIES.join(",")
        )));
    }
    let file = std::fs::File::open(input).map_err(|_| Error::MissingInput(input.to_path_buf()))?;
    let (rows, skipped) = parse_geonames(std::io::BufReader::new(file), input, &countries)?;
    let opts = CompileOptions::bundled(countries, min_population);
    let (entries, report) = compile_gazetteer(&rows, &opts);
    let source = input
        .file_name()
        .map_or_else(|| input.display().to_string(), |n| n.to_string_lossy().into_owned());
    let tsv = gazetteer_tsv(&entries, &opts, &source);
    std::fs::write(out, tsv).map_err(|e| Error::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    eprintln!(
        "{} entries from {} rows ({skipped} other-country rows, {} small cities, {} blocked, {} cross-country)",
        entries.len(),
        report.rows,
        report.small_cities,
        report.blocked,
        report.cross_country
    );
    for (c, n) in &report.per_country {
        eprintln!("  {c}\t{n}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { input, common } => {
            set_workers(common.workers);
            let report = pipeline::run_ingest(&common.resolve()?, &input, &common.out)?;
            print!("{report}");
        }
        Command::Prep { common } => {
            set_workers(common.workers);
            let r = pipeline::run_prep(&common.resolve()?, &common.out)?;
            println!("{} documents, {} terms", r.documents, r.vocabulary);
        }
        Command::Geotag { common } => {
            set_workers(common.workers);
            for (c, n) in pipeline::run_geotag(&common.resolve()?, &common.out)? {
                println!("{c}\t{n}");
            }
        }
        Command::Train { chains, common } => {
            set_workers(common.workers);
            pipeline::run_train(&common.resolve()?, &common.out, chains)?;
        }
        Command::SweepK { ks, common } => {
            set_workers(common.workers);
            let ks = parse_ks(&ks)?;
            print!("{}", pipeline::run_sweep(&common.resolve()?, &common.out, &ks)?);
        }
        Command::Trends { common } => {
            set_workers(common.workers);
            pipeline::run_trends(&common.resolve()?, &common.out)?;
        }
        Command::Report { input, common } => {
            set_workers(common.workers);
            let table = pipeline::run_report(&common.resolve()?, &input, &common.out)?;
            println!(
                "{} documents over {} topics; bundle in {}",
                table.total_documents(),
                table.topics_present().len(),
                common.out.display()
            );
        }
        Command::CompileGazetteer {
            input,
            countries,
            min_population,
            out,
        } => compile(&input, &countries, min_population, &out)?,
        Command::Model {
            action: ModelAction::Dump { model, out },
        } => {
            let path = model.unwrap_or_else(|| out.join(pipeline::MODEL));
            let m = pipeline::read_model(&path)?;
            let vocab = pipeline::read_vocab(&out).ok().filter(|v| v.digest() == m.vocab_hash);
            print!("{}", m.dump_tsv(vocab.as_ref()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
