use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dirac_kit::cache::Cache;
use dirac_kit::config::ExperimentConfig;
use dirac_kit::report::{to_json_text, to_table};
use dirac_kit::run::{describe_type, run_experiment};
use dirac_kit::{exit_code, write_atomic, CliError, CONVENTION_VERSION, EXIT_CONFIG, EXIT_PASS};
use serde_json::json;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(
    name = "dirac-kit",
    version,
    about = "Exact Dirac cohomology experiments"
)]
struct Cli {
    /// Cache directory (default `.dirac-kit-cache`).
    #[arg(long, global = true, env = "DIRAC_KIT_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Disable the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for matrix assembly.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Override `caps.max_dim` from the config.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Print basic data of a Cartan type such as `A2` or `F4`.
    Describe { r#type: String },
}

fn report_paths(config: &Path, cfg: &ExperimentConfig) -> (PathBuf, PathBuf, PathBuf) {
    let dir = config.parent().unwrap_or(Path::new(""));
    let json = match &cfg.output {
        Some(p) => dir.join(p),
        None => {
            let stem = config.file_stem().unwrap_or_default().to_string_lossy();
            dir.join(format!("{stem}.report.json"))
        }
    };
    let table = json.with_extension("txt");
    let meta = json.with_extension("meta.json");
    (json, table, meta)
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn run(cli: &Cli, config: &Path) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(config).map_err(|e| CliError::Config {
        field: String::new(),
        message: format!("cannot read {}: {e}", config.display()),
    })?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(m) = cli.max_dim {
        cfg.caps.max_dim = m;
    }
    let cache = (!cli.no_cache).then(|| {
        let dir = cli
            .cache_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(".dirac-kit-cache"));
        Cache::new(dir, CONVENTION_VERSION)
    });
    let start = Instant::now();
    let out = run_experiment(&cfg, cache.as_ref())?;
    let elapsed = start.elapsed();

    let json_text = to_json_text(&out.report);
    let table_text = to_table(&out.report);
    let (json_path, table_path, meta_path) = report_paths(config, &cfg);
    write_atomic(&json_path, json_text.as_bytes()).map_err(|e| io_err(&json_path, e))?;
    write_atomic(&table_path, table_text.as_bytes()).map_err(|e| io_err(&table_path, e))?;
    let meta = json!({
        "elapsed_ms": elapsed.as_millis().to_string(),
        "cache_hits": out.cache_hits.to_string(),
        "cache_misses": out.cache_misses.to_string(),
        "report": json_path.file_name().map(|n| n.to_string_lossy().to_string()),
    });
    write_atomic(&meta_path, to_json_text(&meta).as_bytes()).map_err(|e| io_err(&meta_path, e))?;

    match cli.format {
        Format::Json => print!("{json_text}"),
        Format::Table => print!("{table_text}"),
    }
    eprintln!(
        "{}: {} in {} ms, cache hits {}, misses {}",
        cfg.command.name(),
        out.status.as_str(),
        elapsed.as_millis(),
        out.cache_hits,
        out.cache_misses
    );
    Ok(exit_code(out.status))
}

fn describe(cli: &Cli, label: &str) -> Result<i32, CliError> {
    let v = describe_type(label)?;
    match cli.format {
        Format::Json => print!("{}", to_json_text(&v)),
        Format::Table => {
            if let serde_json::Value::Object(m) = &v {
                for (k, x) in m {
                    println!("{k}: {}", x.to_string().replace('"', ""));
                }
            }
        }
    }
    Ok(EXIT_PASS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    let result = match &cli.command {
        Cmd::Run { config } => run(&cli, config),
        Cmd::Describe { r#type } => describe(&cli, r#type),
    };
    let code = match result {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
