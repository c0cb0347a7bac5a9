use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cesaro_hull::config::ExperimentConfig;
use cesaro_hull::decomposition::Mode;
use cesaro_hull::runner::{
    run_oracle, run_partition, run_slln, run_suite, Overrides, RunReport, SuiteStatus,
};

/// Boundedness partitions, equivalent-measure certificates, and Cesàro limit
/// profiles on atomic probability spaces.
#[derive(Parser)]
#[command(name = "cesaro-hull", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Exact,
    Heuristic,
}

impl From<CliMode> for Mode {
    fn from(mode: CliMode) -> Self {
        match mode {
            CliMode::Exact => Mode::Exact,
            CliMode::Heuristic => Mode::Heuristic,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config (JSON); for `suite`, a directory of configs.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for reports and plot data.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config mode.
    #[arg(long, value_enum)]
    mode: Option<CliMode>,
    /// Override the epsilon grid, e.g. `0.5,0.1,0.01`.
    #[arg(long, value_delimiter = ',')]
    eps_grid: Option<Vec<f64>>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            mode: self.mode.map(Into::into),
            out_dir: self.out.clone(),
            eps_grid: self.eps_grid.clone(),
        }
    }

    fn load(&self) -> cesaro_hull::Result<(ExperimentConfig, PathBuf)> {
        let mut config = ExperimentConfig::load(&self.config)?;
        self.overrides().apply(&mut config);
        let base_dir = self
            .config
            .parent()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((config, base_dir))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Partition pipeline: window, atom partition, certifying measure, L1
    /// certificate, limit profile, three-set identity.
    Partition(CommonArgs),
    /// Sampling pipeline: generate trajectories, regime equivalences, and
    /// the variance condition where declared.
    Slln(CommonArgs),
    /// Run every config in a directory.
    Suite {
        #[command(flatten)]
        common: CommonArgs,
        /// Run up to this many configs concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run the brute-force boundedness oracle standalone.
    Oracle(CommonArgs),
}

fn print_report(report: &RunReport) {
    for line in &report.narrative {
        println!("{line}");
    }
    println!("verdict: {}", if report.all_pass { "PASS" } else { "FAIL" });
}

fn execute() -> cesaro_hull::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Partition(args) => {
            let (config, base_dir) = args.load()?;
            let report = run_partition(&config, &base_dir)?;
            print_report(&report);
            Ok(report.all_pass)
        }
        Command::Slln(args) => {
            let (config, _) = args.load()?;
            let report = run_slln(&config)?;
            print_report(&report);
            Ok(report.all_pass)
        }
        Command::Oracle(args) => {
            let (config, base_dir) = args.load()?;
            let report = run_oracle(&config, &base_dir)?;
            print_report(&report);
            Ok(report.all_pass)
        }
        Command::Suite { common, jobs } => {
            let report = run_suite(
                &common.config,
                jobs,
                &common.overrides(),
                common.out.as_deref(),
            )?;
            if let Some(warning) = &report.warning {
                eprintln!("warning: {warning}");
            }
            for item in &report.items {
                let status = match &item.outcome {
                    SuiteStatus::Pass => "PASS".to_string(),
                    SuiteStatus::Fail => "FAIL".to_string(),
                    SuiteStatus::Error { message } => format!("ERROR ({message})"),
                };
                println!("{}: {status}", item.file);
            }
            Ok(report.all_pass)
        }
    }
}

fn main() -> ExitCode {
    match execute() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(2)
        }
    }
}
