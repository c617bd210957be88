//! `dicke-stark`: sweep data and verification runs.
//!
//! Every subcommand reads its shipped defaults (see `configs/`), overlays the
//! optional `--config` file and writes one file per table into `--out`, plus a
//! `<command>.meta.json` sidecar with run metadata.
//!
//! Exit codes: 0 success, 2 config or input error, 3 numerical failure,
//! 1 output I/O failure.

mod commands;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use dicke_stark::{Error, Execution, Result};
use serde_json::json;

use output::{write_sidecar, write_tables, Format, Table};
use settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "dicke-stark", version, about = "Two-photon Dicke-Stark model workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file of `key = value` lines overriding the defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads (0 = one per core)
    #[arg(long, global = true, env = "DICKE_STARK_THREADS")]
    threads: Option<usize>,

    /// Reserved; no command draws random numbers
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
enum Command {
    /// Phase labels over (U, g) and the boundaries g_t(U), g_c(U)
    PhaseDiagram,
    /// Mean-field order parameter beta(g) for several U
    OrderParameter,
    /// Mean-field energy E_G(beta) at fixed g
    Landscape,
    /// Squeezing parameters and collective-spin moments vs g
    Squeezing,
    /// Exact-diagonalization observables vs U or g
    Ed,
    /// Ground energy along a ladder of Fock cutoffs
    Collapse,
    /// Trapped-ion mapping tables and approximation diagnostics
    Ion,
    /// Full sideband drive vs effective model dynamics
    Verify,
    /// Print the default config of a command
    Defaults {
        #[arg(value_enum)]
        of: Kind,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    PhaseDiagram,
    OrderParameter,
    Landscape,
    Squeezing,
    Ed,
    Collapse,
    Ion,
    Verify,
}

type Runner = fn(&Settings, Execution) -> Result<Vec<Table>>;

impl Command {
    fn kind(&self) -> Kind {
        match self {
            Command::PhaseDiagram => Kind::PhaseDiagram,
            Command::OrderParameter => Kind::OrderParameter,
            Command::Landscape => Kind::Landscape,
            Command::Squeezing => Kind::Squeezing,
            Command::Ed => Kind::Ed,
            Command::Collapse => Kind::Collapse,
            Command::Ion => Kind::Ion,
            Command::Verify => Kind::Verify,
            Command::Defaults { of } => *of,
        }
    }
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::PhaseDiagram => "phase-diagram",
            Kind::OrderParameter => "order-parameter",
            Kind::Landscape => "landscape",
            Kind::Squeezing => "squeezing",
            Kind::Ed => "ed",
            Kind::Collapse => "collapse",
            Kind::Ion => "ion",
            Kind::Verify => "verify",
        }
    }

    fn defaults(self) -> &'static str {
        match self {
            Kind::PhaseDiagram => include_str!("../configs/phase-diagram.conf"),
            Kind::OrderParameter => include_str!("../configs/order-parameter.conf"),
            Kind::Landscape => include_str!("../configs/landscape.conf"),
            Kind::Squeezing => include_str!("../configs/squeezing.conf"),
            Kind::Ed => include_str!("../configs/ed.conf"),
            Kind::Collapse => include_str!("../configs/collapse.conf"),
            Kind::Ion => include_str!("../configs/ion.conf"),
            Kind::Verify => include_str!("../configs/verify.conf"),
        }
    }

    fn runner(self) -> Runner {
        match self {
            Kind::PhaseDiagram => commands::phase_diagram_cmd,
            Kind::OrderParameter => commands::order_parameter_cmd,
            Kind::Landscape => commands::landscape_cmd,
            Kind::Squeezing => commands::squeezing_cmd,
            Kind::Ed => commands::ed_cmd,
            Kind::Collapse => commands::collapse_cmd,
            Kind::Ion => commands::ion_cmd,
            Kind::Verify => commands::verify_cmd,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_numerical() => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    let kind = cli.command.kind();
    if let Command::Defaults { .. } = cli.command {
        print!("{}", kind.defaults());
        return Ok(());
    }
    let user = match &cli.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| Error::Config {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?),
        None => None,
    };
    let settings = Settings::load(kind.defaults(), user.as_deref())?;

    let threads = cli.threads.unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;

    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let tables = kind.runner()(&settings, Execution::Parallel)?;
    let elapsed = clock.elapsed().as_secs_f64();

    let name = kind.name();
    let mut meta = vec![("command".to_string(), name.to_string())];
    meta.extend(settings.effective());
    let paths = write_tables(&cli.out, cli.format, &tables, &meta)?;

    let sidecar = json!({
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "format": cli.format.extension(),
        "config_path": cli.config.as_ref().map(|p| p.display().to_string()),
        "settings": meta.iter().skip(1).map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "threads": rayon::current_num_threads(),
        "parallel_build": Execution::parallel_available(),
        "seed": cli.seed,
        "started_unix_s": started,
        "elapsed_s": elapsed,
        "outputs": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    write_sidecar(&cli.out.join(format!("{name}.meta.json")), &sidecar)?;
    for p in &paths {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_defaults_parse() {
        for &c in Kind::value_variants() {
            let s = Settings::load(c.defaults(), None).unwrap_or_else(|e| panic!("{}: {e}", c.name()));
            assert!(!s.effective().is_empty());
        }
    }

    #[test]
    fn canonical_point_in_defaults() {
        for c in [Kind::PhaseDiagram, Kind::OrderParameter, Kind::Squeezing, Kind::Ed] {
            let s = Settings::load(c.defaults(), None).unwrap();
            assert_eq!(s.f64("omega_q_over_wc").unwrap(), 0.015);
            assert_eq!(s.usize("n_spins").unwrap(), 50);
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config { line: 1, message: String::new() }), 2);
        assert_eq!(exit_code(&Error::NoConvergence { iterations: 1, residual: 1.0 }), 3);
        assert_eq!(exit_code(&Error::Unstable { two_lambda: 1.0, omega: 1.0 }), 3);
        assert_eq!(exit_code(&Error::Io(String::new())), 1);
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
