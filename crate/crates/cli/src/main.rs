use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use onecorr_cli::config::{parse_direction, parse_state, ExperimentConfig, Variant};
use onecorr_cli::error::Result;
use onecorr_cli::report::write_scan_csv;
use onecorr_cli::runner::{demo_contradiction, run_experiment, scan_angles};
use onecorr_core::quantum::qm_correlation;

/// Quantum versus time-local hidden-variable correlations for one
/// entangled pair.
#[derive(Parser)]
#[command(name = "onecorr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact quantum correlation for a state and two directions.
    Qm(QmArgs),
    /// Run one experiment from a config file and/or flags.
    Run(RunArgs),
    /// Sweep the angle between the axes and write a CSV curve.
    Scan(ScanArgs),
    /// Run the canonical contradiction demonstration.
    Demo(DemoArgs),
}

#[derive(Args)]
struct SharedArgs {
    /// Model name: bell_sphere, time_drift, paper_constrained,
    /// cheating_nonlocal, or constant.
    #[arg(long)]
    model: Option<String>,

    /// Initial state: `singlet`, `product_up`, or 8 comma-separated reals.
    #[arg(long)]
    state: Option<String>,

    /// Station-1 measurement direction.
    #[arg(long, value_name = "X,Y,Z")]
    a: Option<String>,

    /// Station-2 measurement direction.
    #[arg(long, value_name = "X,Y,Z")]
    b: Option<String>,

    /// Number of measurement times per station grid.
    #[arg(long)]
    n_times: Option<usize>,

    /// Time horizon; measurement times are drawn from [0, horizon].
    #[arg(long)]
    horizon: Option<f64>,

    /// Number of hidden-variable samples.
    #[arg(long)]
    m_lambda: Option<usize>,

    /// Master seed for all random streams.
    #[arg(long)]
    seed: Option<u64>,

    /// Estimator variant.
    #[arg(long, value_enum)]
    variant: Option<Variant>,

    /// Output path for the report or curve.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SharedArgs {
    fn apply(&self, config: &mut ExperimentConfig) -> Result<()> {
        if let Some(model) = &self.model {
            config.model_name = model.clone();
        }
        if let Some(state) = &self.state {
            config.state = parse_state(state)?;
        }
        if let Some(a) = &self.a {
            config.a = parse_direction(a)?;
        }
        if let Some(b) = &self.b {
            config.b = parse_direction(b)?;
        }
        if let Some(n) = self.n_times {
            config.n_times = n;
        }
        if let Some(h) = self.horizon {
            config.horizon = h;
        }
        if let Some(m) = self.m_lambda {
            config.m_lambda = m;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(v) = self.variant {
            config.variant = v;
        }
        Ok(())
    }
}

#[derive(Args)]
struct QmArgs {
    /// Initial state: `singlet`, `product_up`, or 8 comma-separated reals.
    #[arg(long, default_value = "singlet")]
    state: String,

    /// Station-1 measurement direction.
    #[arg(long, value_name = "X,Y,Z", default_value = "0,0,1")]
    a: String,

    /// Station-2 measurement direction.
    #[arg(long, value_name = "X,Y,Z", default_value = "0,0,1")]
    b: String,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (JSON); flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Number of angles between 0 and pi inclusive.
    #[arg(long, default_value_t = 9)]
    steps: usize,

    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Args)]
struct DemoArgs {
    /// Master seed for the canonical run.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Swap in a different model for the canonical configuration.
    #[arg(long)]
    model: Option<String>,

    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_qm(args: &QmArgs) -> Result<()> {
    let spec = parse_state(&args.state)?;
    let (psi, warning) = spec.build()?;
    if let Some(warning) = warning {
        eprintln!("warning: {warning}");
    }
    let a = parse_direction(&args.a)?;
    let b = parse_direction(&args.b)?;
    println!("{}", qm_correlation(&psi, a, b));
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    args.shared.apply(&mut config)?;
    let report = run_experiment(&config)?;
    let json = report.to_json();
    if let Some(path) = &args.shared.out {
        fs::write(path, &json)?;
    }
    println!("{json}");
    Ok(())
}

fn cmd_scan(args: &ScanArgs) -> Result<()> {
    let mut config = ExperimentConfig::default();
    args.shared.apply(&mut config)?;
    let rows = scan_angles(&config, args.steps)?;
    match &args.shared.out {
        Some(path) => {
            let file = fs::File::create(path)?;
            write_scan_csv(&rows, file)?;
        }
        None => write_scan_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_demo(args: &DemoArgs) -> Result<()> {
    let (report, verdict) = demo_contradiction(args.seed, args.model.as_deref())?;
    if let Some(path) = &args.out {
        fs::write(path, report.to_json())?;
    }
    println!("{verdict}");
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Qm(args) => cmd_qm(args),
        Command::Run(args) => cmd_run(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Demo(args) => cmd_demo(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
