use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use homogen_experiments::table::emit;
use homogen_experiments::{catalog, ensure_checks, output_path, run_scenario, run_sweep, Result, ResultTable, ScenarioConfig};

#[derive(Parser)]
#[command(name = "homogen", version, about = "Collisional-model scenarios to CSV")]
struct Cli {
    /// Directory for CSV files and plot scripts.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// `plot-script` also writes a gnuplot script next to each CSV.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Sweep worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    PlotScript,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config without a sweep.
    Run { config: PathBuf },
    /// Run every point of the config's sweep.
    Sweep { config: PathBuf },
    /// Print the scenario catalog with parameters and defaults.
    ListScenarios,
    /// Check a config, including every sweep point, without computing.
    Validate { config: PathBuf },
}

fn write(cli: &Cli, table: &ResultTable, index: Option<usize>) -> Result<()> {
    let path = output_path(&cli.output_dir, table, index);
    let hint = (cli.format == Format::PlotScript).then(|| &catalog::find(&table.metadata.scenario).expect("scenario ran").plot);
    for written in emit(table, &path, hint)? {
        println!("wrote {}", written.display());
    }
    Ok(())
}

fn run(cli: &Cli, config: &Path) -> Result<()> {
    let config = ScenarioConfig::from_path(config)?;
    let table = run_scenario(&config)?;
    write(cli, &table, None)?;
    ensure_checks(&table)
}

fn sweep(cli: &Cli, config: &Path) -> Result<i32> {
    let config = ScenarioConfig::from_path(config)?;
    let report = run_sweep(&config, cli.workers.map(usize::from))?;
    let indexed = config.has_sweep();
    for outcome in &report.outcomes {
        if let Ok(table) = &outcome.result {
            write(cli, table, indexed.then_some(outcome.index))?;
        }
    }
    println!("{}", report.summary());
    Ok(report.exit_code())
}

fn list() {
    for s in catalog::all() {
        println!("{} [{}]\n  {}", s.name, s.model, s.target);
        for p in &s.params {
            let default = p.default.as_ref().map_or("-".to_string(), |v| v.to_string());
            println!("    {:<16} {:<24} {}", p.name, default, p.help);
        }
    }
}

fn validate(config: &Path) -> Result<()> {
    let config = ScenarioConfig::from_path(config)?;
    let points = config.resolve_all()?;
    println!("{}: valid, {} point(s)", config.scenario, points.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { config } => run(&cli, config).map(|_| 0),
        Command::Sweep { config } => sweep(&cli, config),
        Command::ListScenarios => {
            list();
            Ok(0)
        }
        Command::Validate { config } => validate(config).map(|_| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
