use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use facetnav::app::{load_topics, summarizer_from_config};
use facetnav::query::{render_table, run_query};
use facetnav::{App, CliError, Config};
use facetnav_core::index::DOCUMENTS_FILE;
use facetnav_core::TopicIndex;

#[derive(Parser)]
#[command(name = "facetnav", version, about = "Faceted exploration and summarization of topical document sets")]
struct Cli {
    /// Configuration file (defaults to ./facetnav.toml when present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Form facets for a topic directory and write its index.
    Build {
        topic_dir: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write a JSONL dump of the facet tables.
        #[arg(long)]
        jsonl: Option<PathBuf>,
        /// Build even when stored mention surfaces disagree with their spans.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        cd_threshold: Option<f64>,
        #[arg(long)]
        alignment_threshold: Option<f64>,
        #[arg(long)]
        max_mentions: Option<usize>,
    },
    /// Serve the HTTP API and UI for every topic in a data directory.
    Serve {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        port: Option<u16>,
        /// Directory of static UI assets.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
    /// Print facets and summary for a selection.
    Query {
        /// Index file, or a topic directory to build in memory.
        index: PathBuf,
        /// Facet-value label or id; repeat to intersect.
        #[arg(long = "select")]
        select: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output budget of the extractive summary, in whitespace tokens.
        #[arg(long)]
        summary_tokens: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn load_index(path: &Path, config: &Config) -> Result<TopicIndex, CliError> {
    if path.is_dir() && path.join(DOCUMENTS_FILE).is_file() {
        Ok(TopicIndex::build_dir(path, &config.clustering, false)?)
    } else {
        Ok(TopicIndex::load(path)?)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Build {
            topic_dir,
            output,
            jsonl,
            force,
            cd_threshold,
            alignment_threshold,
            max_mentions,
        } => {
            let c = &mut config.clustering;
            c.cd_merge_threshold = cd_threshold.unwrap_or(c.cd_merge_threshold);
            c.alignment_threshold = alignment_threshold.unwrap_or(c.alignment_threshold);
            c.max_cluster_mentions = max_mentions.unwrap_or(c.max_cluster_mentions);
            c.validate()?;
            let index = TopicIndex::build_dir(&topic_dir, &config.clustering, force)?;
            index.save(&output)?;
            if let Some(path) = jsonl {
                let file = std::fs::File::create(&path)?;
                let mut out = std::io::BufWriter::new(file);
                index.write_jsonl(&mut out)?;
                out.flush()?;
            }
            let facets = index.facets();
            let report = serde_json::json!({
                "topic_id": index.topic_id(),
                "index": output,
                "documents": index.corpus().documents().len(),
                "sentences": index.corpus().sentence_count(),
                "concepts": facets.concepts.len(),
                "entities": facets.entities.len(),
                "statements": facets.statements.len(),
            });
            println!("{report}");
        }
        Command::Serve { data, port, ui } => {
            let data = data
                .or(config.data_dir.clone())
                .ok_or_else(|| CliError::Config("no data directory (use --data or data_dir)".into()))?;
            let topics = load_topics(&data, &config.clustering)?;
            let app = Arc::new(App::new(topics, summarizer_from_config(&config.summarizer))?);
            let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            runtime.block_on(facetnav::server::serve(app, ui.or(config.ui_dir), port.unwrap_or(config.port)))?;
        }
        Command::Query {
            index,
            select,
            format,
            summary_tokens,
        } => {
            if let Some(n) = summary_tokens {
                config.summarizer.settings.output_tokens = n;
            }
            let index = load_index(&index, &config)?;
            let summarizer = summarizer_from_config(&config.summarizer);
            let out = run_query(&index, &summarizer, &select)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&out).map_err(|e| CliError::Server(e.to_string()))?,
                Format::Table => render_table(&out),
            };
            println!("{}", text.trim_end());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
