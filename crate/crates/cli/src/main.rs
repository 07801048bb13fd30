//! `trotterlab` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a self-test or simulation fails,
//! 2 on configuration errors (bad flags or config, unknown figure id,
//! unwritable output path).

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trotterlab::figures::{self, FigureRecipe, ResultSet, SeriesResult};
use trotterlab::model::GateFamily;
use trotterlab::output::{render_csv, render_json, write_outputs, Format};
use trotterlab::sweep::{Engine, ExperimentKind, Grid};
use trotterlab::{verify, Error, Result};

use config::{parse_grid, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "trotterlab", version, about = "Trotter-circuit simulations of XY spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resonance sweep (discrete circuit or continuous chain).
    Resonance(Common),
    /// Disorder ensemble: IPR and tail probability.
    Localization(Common),
    /// Trotter error against the exact chain evolution.
    Convergence(Common),
    /// Controlled-Rx resonance or localization run.
    Crx(Common),
    /// Closed-form and backend-equivalence self-tests.
    Verify(Common),
    /// Bundled recipe for one panel.
    Figure {
        /// One of 2a4 2b4 2c4 2d4 3b 3c 3d 4a 4b 4c 4d.
        id: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when absent.
    #[arg(long, value_name = "csv|json")]
    format: Option<String>,
    /// Worker threads; 1 gives the sequential reference mode.
    #[arg(long, value_name = "INT", env = "TROTTERLAB_THREADS")]
    threads: Option<usize>,
    /// Override of the swept grid, e.g. "-pi:pi:101".
    #[arg(long, value_name = "START:STOP:COUNT", allow_hyphen_values = true)]
    grid: Option<String>,
}

/// Command failure with its exit code.
enum Failure {
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Config(e.to_string()),
            e if e.is_configuration() => Failure::Config(e.to_string()),
            e => Failure::Run(e.to_string()),
        }
    }
}

struct Resolved {
    config: RunConfig,
    engine: Engine,
    out: Option<PathBuf>,
    format: Format,
    grid: Option<Grid>,
}

fn resolve(common: &Common) -> Result<Resolved> {
    let config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out = common.out.clone().or_else(|| config.output.path.clone());
    let format = match (&common.format, config.output.format) {
        (Some(text), _) => text.parse()?,
        (None, Some(f)) => f,
        (None, None) => match out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext == "json" => Format::Json,
            _ => Format::Csv,
        },
    };
    let threads = if config.engine.verification {
        Some(1)
    } else {
        common.threads.or(config.engine.threads)
    };
    if threads == Some(0) {
        return Err(Error::config("--threads must be at least 1"));
    }
    let grid = common.grid.as_deref().map(parse_grid).transpose()?;
    Ok(Resolved {
        engine: Engine {
            backend: config.engine.backend,
            threads,
        },
        config,
        out,
        format,
        grid,
    })
}

fn emit(set: &ResultSet, r: &Resolved) -> Result<()> {
    if let Some(path) = &r.out {
        for written in write_outputs(set, path, r.format)? {
            eprintln!("wrote {}", written.display());
        }
        return Ok(());
    }
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| Error::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    };
    match r.format {
        Format::Json => stdout.write_all(render_json(set)?.as_bytes()).map_err(io)?,
        Format::Csv => {
            let files = render_csv(set)?;
            stdout.write_all(files[0].contents.as_bytes()).map_err(io)?;
            if files.len() > 1 {
                eprintln!("note: per-step and profile tables are written only with --out");
            }
        }
    }
    Ok(())
}

/// Experiment kinds each sweep subcommand accepts.
fn accepts(command: &str, kind: ExperimentKind, family: Option<GateFamily>) -> bool {
    use ExperimentKind::*;
    match command {
        "resonance" => matches!(kind, ResonanceDiscrete | ResonanceContinuous),
        "localization" => kind == Localization,
        "convergence" => kind == Convergence,
        "crx" => kind == CrxResonance || (kind == Localization && family != Some(GateFamily::Xy)),
        _ => false,
    }
}

fn run_experiment(command: &str, common: &Common) -> std::result::Result<(), Failure> {
    if common.config.is_none() {
        return Err(Failure::Config(format!("`{command}` needs --config PATH")));
    }
    let r = resolve(common)?;
    let experiment = r
        .config
        .experiment
        .as_ref()
        .ok_or_else(|| Failure::Config("config has no `experiment` section".into()))?;
    if !accepts(command, experiment.kind, experiment.gate_family) {
        return Err(Failure::Config(format!(
            "experiment kind `{}` cannot run under `{command}`",
            experiment.kind.name()
        )));
    }
    let mut specs = experiment.specs(r.grid.as_ref())?;
    for (_, spec) in &mut specs {
        if command == "crx" && spec.kind == ExperimentKind::Localization {
            spec.gate_family = Some(GateFamily::Crx);
        }
        if let Some(seed) = common.seed {
            spec.master_seed = seed;
        }
    }
    let series = specs
        .into_iter()
        .map(|(id, spec)| {
            Ok(SeriesResult {
                id,
                result: trotterlab::sweep::run_sweep_with(&spec, &r.engine)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let set = ResultSet {
        label: experiment.label.clone().unwrap_or_else(|| command.to_owned()),
        kind: experiment.kind,
        series,
    };
    emit(&set, &r)?;
    Ok(())
}

fn run_figure(id: &str, common: &Common) -> std::result::Result<(), Failure> {
    let r = resolve(common)?;
    let mut recipe: FigureRecipe = figures::recipe(id)?;
    if let Some(seed) = common.seed {
        recipe = recipe.with_seed(seed);
    }
    if let Some(grid) = &r.grid {
        for s in &mut recipe.series {
            s.spec.swept.grid = grid.clone();
            s.spec.validate()?;
        }
    }
    let set = recipe.run(&r.engine)?;
    emit(&set, &r)?;
    Ok(())
}

fn run_verify(common: &Common) -> std::result::Result<(), Failure> {
    let r = resolve(common)?;
    let reports = verify::run_all(common.seed.unwrap_or(0));
    let failed = reports.iter().filter(|s| !s.passed()).count();
    for s in &reports {
        let status = if s.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {}: {}/{} checks passed (worst {:.3e})",
            s.name,
            s.checks - s.failures,
            s.checks,
            s.worst
        );
    }
    println!("{} of {} suites passed", reports.len() - failed, reports.len());
    if let Some(path) = &r.out {
        let text = serde_json::to_string_pretty(&reports)
            .map_err(|e| Failure::Run(format!("cannot serialize report: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|e| {
            Failure::from(Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        })?;
    }
    if failed > 0 {
        return Err(Failure::Run(format!("{failed} verification suite(s) failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Resonance(c) => run_experiment("resonance", c),
        Command::Localization(c) => run_experiment("localization", c),
        Command::Convergence(c) => run_experiment("convergence", c),
        Command::Crx(c) => run_experiment("crx", c),
        Command::Verify(c) => run_verify(c),
        Command::Figure { id, common } => run_figure(id, common),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
