//! Runs a pricing experiment and writes the comparison table as CSV.
//!
//! Exit status: 0 when every cell priced, 2 when some cells failed, 1 on
//! invalid input (usage errors included, so 2 always means failed cells).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hhw_expansion::expansion::Method;
use hhw_expansion::experiment::{run_experiment, ExperimentSpec, Sweep, SweepVariable};
use hhw_expansion::mc_qe::{simulate_hhw_strikes, McConfig};
use hhw_expansion::{ModelParams, OptionKind, Result};

#[derive(Debug, Parser)]
#[command(
    name = "hhw",
    version,
    about = "Expansion, ChF and QE Monte-Carlo prices of FX puts under Heston-Hull-White"
)]
struct Cli {
    /// Model parameters (JSON); defaults to the base FX setting.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment grid (JSON); defaults to 5 maturities x 7 strikes, all methods.
    #[arg(long)]
    experiment: Option<PathBuf>,
    /// Comma-separated subset of exp, expchf, chf, mc, heston-exp.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    /// Monte-Carlo paths.
    #[arg(long)]
    paths: Option<usize>,
    /// Monte-Carlo time step in years.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of independent RNG streams the paths are split into.
    #[arg(long)]
    batches: Option<usize>,
    #[arg(long)]
    antithetic: bool,
    /// Output CSV; timings go next to it as <stem>.timing.csv. Stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parameter to sweep: gamma, eta_d or eta_f.
    #[arg(long, requires = "values")]
    sweep: Option<SweepVariable>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',', requires = "sweep", allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
    /// Dump per-step path averages of the longest-maturity MC run to this CSV.
    #[arg(long)]
    path_stats: Option<PathBuf>,
}

fn build_spec(cli: &Cli) -> Result<ExperimentSpec> {
    let mut spec = match &cli.experiment {
        Some(path) => ExperimentSpec::from_file(path)?,
        None => ExperimentSpec::default(),
    };
    if let Some(m) = &cli.methods {
        spec.methods = m.clone();
    }
    let mc: &mut McConfig = &mut spec.mc;
    if let Some(n) = cli.paths {
        mc.n_paths = n;
    }
    if let Some(dt) = cli.dt {
        mc.dt = dt;
    }
    if let Some(seed) = cli.seed {
        mc.seed = seed;
    }
    if let Some(b) = cli.batches {
        mc.n_batches = b;
    }
    mc.antithetic |= cli.antithetic;
    if let (Some(variable), Some(values)) = (cli.sweep, &cli.values) {
        spec.sweep = Some(Sweep {
            variable,
            values: values.clone(),
        });
    }
    if cli.out.is_some() {
        spec.output = cli.out.clone();
    }
    spec.validate()?;
    Ok(spec)
}

fn run(cli: &Cli) -> Result<bool> {
    let params = match &cli.config {
        Some(path) => ModelParams::from_file(path)?,
        None => ModelParams::base(),
    };
    let spec = build_spec(cli)?;
    let out = run_experiment(&spec, &params)?;
    match &spec.output {
        Some(path) => {
            let timing = out.write(path)?;
            eprintln!("wrote {} and {}", path.display(), timing.display());
        }
        None => print!("{}", out.to_csv()),
    }
    for t in &out.timings {
        eprintln!("{:>10} {:>4} options {:>10.4} s", t.method.name(), t.options, t.seconds);
    }
    if let Some(path) = &cli.path_stats {
        let t = spec.maturities.iter().cloned().fold(f64::MIN, f64::max);
        let cfg = McConfig {
            path_stats: true,
            ..spec.mc
        };
        let run = simulate_hhw_strikes(&params, t, &[params.forward(t)], OptionKind::Put, &cfg)?;
        if let Some(stats) = run.path_stats {
            stats.write_csv(path)?;
        }
    }
    let failures = out.failures();
    if failures > 0 {
        eprintln!("{failures} of {} cells failed", out.rows.len());
    }
    Ok(failures == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
