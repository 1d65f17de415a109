//! Implied-vol gap between the deterministic-rate expansion and the exact
//! Heston price over the standard strike/maturity grid.

use hhw_expansion::{price_heston_chf, price_heston_exp, ModelParams, OptionSpec};

fn main() -> hhw_expansion::Result<()> {
    let params = ModelParams::base().with_deterministic_rates();
    println!(
        "{:>5} {:>10} {:>12} {:>12} {:>9}",
        "T", "K", "iv_exp", "iv_chf", "gap_bp"
    );
    for t in [1.0, 3.0, 5.0, 7.0, 10.0] {
        let f0 = params.forward(t);
        for delta in [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5] {
            let k = f0 * (0.1 * delta * f64::sqrt(t)).exp();
            let opt = OptionSpec::put(k, t, &params)?;
            let exp = price_heston_exp(&params, &opt)?;
            let chf = price_heston_chf(&params, &opt)?;
            let (a, b) = (exp.implied_vol.unwrap_or(f64::NAN), chf.implied_vol.unwrap_or(f64::NAN));
            println!("{t:>5} {k:>10.4} {a:>12.6} {b:>12.6} {:>9.2}", (a - b) * 1e4);
        }
    }
    Ok(())
}
