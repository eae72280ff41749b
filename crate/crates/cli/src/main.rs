use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use archsteer_core::config::RunConfig;
use archsteer_core::fixtures;
use archsteer_core::model::{load_model, ArchitectureModel};
use archsteer_service::experiment::{
    analyze_fronts, parse_front, run_experiment, write_analysis_csv, write_report, ExperimentOptions,
    Policy, ReportStatus, Scale,
};
use archsteer_service::server::{serve, ServiceConfig};
use clap::{CommandFactory, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "archsteer", version, about = "Interactive multi-objective architecture refactoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "ARCHSTEER_DATA_DIR", default_value = "archsteer-data")]
        data_dir: PathBuf,
        /// Concurrent search jobs; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        /// Static files served under /ui.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
    /// Reference, baseline and scripted-interactive runs with a comparison report.
    Experiment {
        /// Model document, or the name of a bundled model.
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "desk")]
        scale: Scale,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "report")]
        out: PathBuf,
        /// Cluster choice at the interaction point; repeatable.
        #[arg(long = "policy")]
        policies: Vec<Policy>,
        /// Run configuration (TOML) supplying cost, detector and clustering settings.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Indicators of saved fronts against a reference front.
    Analyze {
        #[arg(long, num_args = 1.., required = true)]
        fronts: Vec<PathBuf>,
        #[arg(long)]
        reference: PathBuf,
        /// Directory for analysis.json and analysis.csv; CSV goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    let mut cmd = Cli::command();
    let err = cmd.error(clap::error::ErrorKind::ValueValidation, msg);
    let _ = err.print();
    ExitCode::from(2)
}

fn resolve_model(spec: &str) -> Result<Option<ArchitectureModel>> {
    let path = Path::new(spec);
    if path.exists() {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Some(load_model(&bytes)?));
    }
    match fixtures::load(spec) {
        Some(m) => Ok(Some(m?)),
        None => Ok(None),
    }
}

fn experiment(
    model: &ArchitectureModel,
    scale: Scale,
    seed: u64,
    out: &Path,
    policies: Vec<Policy>,
    config: Option<RunConfig>,
) -> Result<ReportStatus> {
    let mut options = ExperimentOptions::new(scale, seed);
    if !policies.is_empty() {
        options.policies = policies;
    }
    if let Some(cfg) = config {
        options.settings = cfg.eval_settings();
        options.clustering = cfg.clustering;
    }
    let report = run_experiment(model, &options)?;
    write_report(&report, out)?;
    for f in &report.failures {
        eprintln!("run failed: {} #{}: {}", f.experiment, f.run, f.error);
    }
    eprintln!("wrote {}", out.join("report.json").display());
    Ok(report.status)
}

fn analyze(fronts: &[PathBuf], reference: &Path, out: Option<&Path>) -> Result<()> {
    let read = |p: &Path| -> Result<Vec<_>> {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        parse_front(&text).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))
    };
    let reference = read(reference)?;
    let mut named = Vec::new();
    for p in fronts {
        let name = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
        named.push((name, read(p)?));
    }
    let report = analyze_fronts(&named, &reference)?;
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let mut json = serde_json::to_string_pretty(&report)?;
            json.push('\n');
            std::fs::write(dir.join("analysis.json"), json)?;
            write_analysis_csv(&report, std::fs::File::create(dir.join("analysis.csv"))?)?;
        }
        None => write_analysis_csv(&report, std::io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();

    let result = match Cli::parse().command {
        Command::Serve {
            port,
            data_dir,
            workers,
            ui_dir,
        } => {
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(2, |n| n.get()));
            let config = ServiceConfig {
                data_dir,
                workers,
                ui_dir,
            };
            tokio::runtime::Runtime::new()
                .map_err(anyhow::Error::from)
                .and_then(|rt| Ok(rt.block_on(serve(config, port))?))
        }
        Command::Experiment {
            model,
            scale,
            seed,
            out,
            policies,
            config,
        } => {
            let m = match resolve_model(&model) {
                Ok(Some(m)) => m,
                Ok(None) => return usage_error(format!("model '{model}' is neither a file nor a bundled model")),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            let cfg = match config.map(|p| {
                std::fs::read_to_string(&p)
                    .with_context(|| format!("reading {}", p.display()))
                    .and_then(|t| Ok(RunConfig::from_toml(&t)?))
            }) {
                None => None,
                Some(Ok(c)) => Some(c),
                Some(Err(e)) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            match experiment(&m, scale, seed, &out, policies, cfg) {
                Ok(ReportStatus::Complete) => Ok(()),
                Ok(ReportStatus::Partial) => {
                    eprintln!("report is partial");
                    return ExitCode::from(1);
                }
                Err(e) => Err(e),
            }
        }
        Command::Analyze {
            fronts,
            reference,
            out,
        } => analyze(&fronts, &reference, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
