//! Runs the 5 x 7 strike/maturity grid for the fast methods and prints the
//! CSV the `hhw` binary would write.

use hhw_expansion::expansion::Method;
use hhw_expansion::{run_experiment, strike_grid, ExperimentSpec, ModelParams};

fn main() -> hhw_expansion::Result<()> {
    println!("strikes at T=4: {:?}", strike_grid(100.0, 4.0));
    let spec = ExperimentSpec {
        methods: vec![Method::Exp, Method::ExpChF, Method::ChF],
        ..ExperimentSpec::default()
    };
    let out = run_experiment(&spec, &ModelParams::base())?;
    print!("{}", out.to_csv());
    for t in &out.timings {
        eprintln!(
            "{:>7}: {} options in {:.2} ms",
            t.method.name(),
            t.options,
            t.seconds * 1e3
        );
    }
    Ok(())
}
