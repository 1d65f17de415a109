//! As vol-of-vol grows the pure expansion drifts from the Monte-Carlo price;
//! the hybrid keeps the exact Heston part and only expands the rate effect.
//!
//! Pass a path count as the first argument (default 100000).

use hhw_expansion::expansion::implied_vol_of;
use hhw_expansion::{price_hhw_exp, price_hybrid_expchf, simulate_hhw, McConfig, ModelParams, OptionSpec};

fn main() -> hhw_expansion::Result<()> {
    let paths = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let cfg = McConfig {
        n_paths: paths,
        antithetic: true,
        ..McConfig::default()
    };
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>12} {:>12}",
        "gamma", "iv_mc", "iv_exp", "iv_hybrid", "exp-mc bp", "hyb-mc bp"
    );
    for gamma in [0.3, 0.4, 0.5, 0.6] {
        let mut params = ModelParams::base();
        params.heston.gamma = gamma;
        let opt = OptionSpec::put(params.forward(1.0), 1.0, &params)?;
        let mc = simulate_hhw(&params, &opt, &cfg)?;
        let iv_mc = implied_vol_of(mc.price, &opt).unwrap_or(f64::NAN);
        let iv_exp = price_hhw_exp(&params, &opt)?.implied_vol.unwrap_or(f64::NAN);
        let iv_hyb = price_hybrid_expchf(&params, &opt)?.implied_vol.unwrap_or(f64::NAN);
        println!(
            "{gamma:>6} {iv_mc:>10.6} {iv_exp:>10.6} {iv_hyb:>10.6} {:>12.2} {:>12.2}",
            (iv_exp - iv_mc) * 1e4,
            (iv_hyb - iv_mc) * 1e4
        );
    }
    Ok(())
}
