//! Sweeps the domestic short-rate volatility: how it moves the forward
//! variance and the expansion's at-the-money implied vol.

use hhw_expansion::expansion::Method;
use hhw_expansion::experiment::{Sweep, SweepVariable};
use hhw_expansion::{run_experiment, y0_hhw, ExperimentSpec, ModelParams};

fn main() -> hhw_expansion::Result<()> {
    let base = ModelParams::base();
    let etas = vec![0.005, 0.01, 0.02, 0.04];
    for &eta in &etas {
        let p = SweepVariable::EtaD.apply(&base, eta);
        println!(
            "eta_d {eta:<6} y0(T=5) {:.8}  (v0 T = {})",
            y0_hhw(&p, 5.0),
            p.heston.v0 * 5.0
        );
    }
    let spec = ExperimentSpec {
        maturities: vec![5.0],
        strike_deltas: vec![0.0],
        methods: vec![Method::HestonExp, Method::Exp, Method::ExpChF],
        sweep: Some(Sweep {
            variable: SweepVariable::EtaD,
            values: etas,
        }),
        ..ExperimentSpec::default()
    };
    print!("{}", run_experiment(&spec, &base)?.to_csv());
    Ok(())
}
