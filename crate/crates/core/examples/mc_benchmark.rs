//! QE Monte Carlo of the full model against the expansion, with standard
//! errors carried over into implied-vol units.

use hhw_expansion::expansion::implied_vol_of;
use hhw_expansion::mc_qe::simulate_hhw_strikes;
use hhw_expansion::{price_hhw_exp, McConfig, ModelParams, OptionKind, OptionSpec};

fn main() -> hhw_expansion::Result<()> {
    let params = ModelParams::base();
    let paths = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let cfg = McConfig {
        n_paths: paths,
        ..McConfig::default()
    };
    println!(
        "{:>4} {:>9} {:>10} {:>10} {:>8} {:>9} {:>8}",
        "T", "K", "exp", "mc", "se", "gap_bp", "se_bp"
    );
    for t in [1.0, 3.0, 5.0] {
        let f0 = params.forward(t);
        let strikes: Vec<f64> = [-1.0, -0.5, 0.0, 0.5, 1.0]
            .iter()
            .map(|d| f0 * (0.1 * d * f64::sqrt(t)).exp())
            .collect();
        let run = simulate_hhw_strikes(&params, t, &strikes, OptionKind::Put, &cfg)?;
        for (k, mc) in strikes.iter().zip(&run.estimates) {
            let opt = OptionSpec::put(*k, t, &params)?;
            let exp = price_hhw_exp(&params, &opt)?;
            let iv_mc = implied_vol_of(mc.price, &opt).unwrap_or(f64::NAN);
            let iv_up = implied_vol_of(mc.price + mc.std_error, &opt).unwrap_or(f64::NAN);
            let iv_exp = exp.implied_vol.unwrap_or(f64::NAN);
            println!(
                "{t:>4} {k:>9.4} {:>10.5} {:>10.5} {:>8.5} {:>9.2} {:>8.2}",
                exp.price,
                mc.price,
                mc.std_error,
                (iv_exp - iv_mc) * 1e4,
                (iv_up - iv_mc) * 1e4
            );
        }
        println!("  {:.2}s", run.estimates[0].elapsed);
    }
    Ok(())
}
