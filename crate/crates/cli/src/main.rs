mod config;
mod error;
mod render;

use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use tgq_core::fixtures::{random_records, records_to_jsonl, FixtureParams};
use tgq_core::task::EngineConfig;
use tgq_core::TemporalGraph;
use tgq_dsl::corpus;

use config::{Config, OutputFormat};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "tgq", version, about = "Query attributes and structure of temporal graphs")]
struct Cli {
    /// Configuration file (TOML). Falls back to $TGQ_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Pattern similarity threshold, overriding the config file.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Seed for generated fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a dataset; print it in canonical form, or its statistics with --check.
    Load {
        file: PathBuf,
        #[arg(long)]
        check: bool,
    },
    /// Run one query.
    Query { file: PathBuf, query: String },
    /// Interactive query loop.
    Repl { file: PathBuf },
    /// Run every query of a corpus file, one result per query.
    Corpus {
        file: PathBuf,
        queries: PathBuf,
        /// Report elapsed_ms as 0 so runs can be diffed byte for byte.
        #[arg(long)]
        strip_timing: bool,
    },
    /// Print a random dataset as JSON lines.
    Gen {
        #[arg(long, default_value_t = 12)]
        nodes: usize,
        #[arg(long, default_value_t = 8)]
        times: usize,
    },
}

struct Session {
    config: Config,
    engine: EngineConfig,
    format: OutputFormat,
}

impl Session {
    fn new(cli: &Cli) -> Result<Session, CliError> {
        let path = cli
            .config
            .clone()
            .or_else(|| std::env::var_os("TGQ_CONFIG").filter(|v| !v.is_empty()).map(PathBuf::from));
        let mut config = match path {
            Some(p) => Config::load(&p)?,
            None => Config::default(),
        };
        if let Some(t) = cli.threshold {
            config.similarity_threshold = Some(t);
        }
        let engine = config.engine()?;
        let format = cli.format.or(config.output_format).unwrap_or_default();
        Ok(Session { config, engine, format })
    }

    fn load(&self, path: &Path) -> Result<TemporalGraph, CliError> {
        let mut g = TemporalGraph::load_path(path).map_err(CliError::Data)?;
        self.config.apply_carry_forward(&mut g);
        Ok(g)
    }

    fn run_query(&self, graph: &TemporalGraph, src: &str) -> Result<Value, CliError> {
        let env = tgq_dsl::run(src, graph, &self.engine)?;
        Ok(serde_json::to_value(env).expect("envelopes serialize"))
    }
}

fn stats(g: &TemporalGraph) -> Value {
    json!({
        "time_points": g.domain().len(),
        "nodes": g.nodes().len(),
        "edges": g.edges().len(),
        "attributes": g.attributes().len(),
        "subsets": g.subsets().count(),
        "series": g.series_names().count(),
    })
}

fn error_value(src: &str, e: &CliError) -> Value {
    json!({"query": src, "error": {"code": e.code(), "message": e.to_string()}})
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let session = Session::new(&cli)?;
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Load { file, check } => {
            let g = session.load(file)?;
            if *check {
                let s = stats(&g);
                match session.format {
                    OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&s).expect("json")),
                    OutputFormat::Table => s
                        .as_object()
                        .expect("object")
                        .iter()
                        .try_for_each(|(k, v)| writeln!(out, "{k:<12} {v}")),
                }
                ?;
            } else {
                write!(out, "{}", g.to_jsonl())?;
            }
        }
        Command::Query { file, query } => {
            let g = session.load(file)?;
            let env = session.run_query(&g, query)?;
            writeln!(out, "{}", render::render(&env, session.format).trim_end())?;
        }
        Command::Repl { file } => {
            let g = session.load(file)?;
            repl(&session, &g)?;
        }
        Command::Corpus { file, queries, strip_timing } => {
            let g = session.load(file)?;
            let text = std::fs::read_to_string(queries)
                .map_err(|e| CliError::Data(tgq_core::Error::Io(format!("{}: {e}", queries.display()))))?;
            let mut failed = 0;
            let entries = corpus::read(&text);
            for entry in &entries {
                let v = match session.run_query(&g, &entry.source) {
                    Ok(mut env) => {
                        if *strip_timing {
                            env["elapsed_ms"] = json!(0);
                        }
                        env
                    }
                    Err(e) => {
                        eprintln!("{} (line {})", e.line(), entry.line);
                        failed += 1;
                        error_value(&entry.source, &e)
                    }
                };
                match session.format {
                    OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&v).expect("json")),
                    OutputFormat::Table => writeln!(out, "{}", render::table(&v)),
                }
                ?;
            }
            if failed > 0 {
                return Err(CliError::Batch {
                    failed,
                    total: entries.len(),
                });
            }
        }
        Command::Gen { nodes, times } => {
            let params = FixtureParams {
                max_nodes: *nodes,
                max_times: *times,
                ..FixtureParams::default()
            };
            write!(out, "{}", records_to_jsonl(&random_records(cli.seed, params)))?;
        }
    }
    Ok(())
}

const REPL_HELP: &str = "\
enter a query, or one of:
  :history   list previous queries
  !N         rerun query N from the history
  :help      show this text
  :quit      leave";

fn repl(session: &Session, graph: &TemporalGraph) -> Result<(), CliError> {
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut history: Vec<String> = Vec::new();
    let mut out = std::io::stdout().lock();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            write!(out, "tgq> ").and_then(|_| out.flush())?;
        }
        let Some(line) = lines.next() else { break };
        let line = line.map_err(|e| CliError::Usage(format!("cannot read input: {e}")))?;
        let line = line.trim();
        let src = match line {
            "" => continue,
            ":quit" | ":q" => break,
            ":help" => {
                writeln!(out, "{REPL_HELP}")?;
                continue;
            }
            ":history" => {
                for (i, h) in history.iter().enumerate() {
                    writeln!(out, "{:>4}  {h}", i + 1)?;
                }
                continue;
            }
            _ => match line.strip_prefix('!') {
                Some(n) => match n.parse::<usize>().ok().and_then(|n| n.checked_sub(1)).and_then(|i| history.get(i)) {
                    Some(h) => h.clone(),
                    None => {
                        eprintln!("{}", CliError::Usage(format!("no history entry {n}")).line());
                        continue;
                    }
                },
                None => line.to_string(),
            },
        };
        history.push(src.clone());
        match session.run_query(graph, &src) {
            Ok(env) => writeln!(out, "{}", render::render(&env, session.format).trim_end())?,
            Err(e) => eprintln!("{}", e.line()),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::Usage(first).line());
            eprintln!("run `tgq --help` for usage");
            return ExitCode::from(1);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // the reader went away, e.g. `tgq ... | head`
        Err(CliError::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
