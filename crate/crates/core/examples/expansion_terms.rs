//! Term-by-term expansion of an at-the-money put with and without
//! stochastic rates, and the rate increment between them.

use hhw_expansion::{delta_stochastic_rates, price_heston_exp, price_hhw_exp, ModelParams, OptionSpec};

fn main() -> hhw_expansion::Result<()> {
    let params = ModelParams::base();
    println!(
        "{:>4} {:>8} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "T", "model", "BS", "dxdy", "dx2dy", "dy2", "dx2dy2", "dy", "total"
    );
    for t in [1.0, 5.0, 10.0] {
        let opt = OptionSpec::put(params.forward(t), t, &params)?;
        for (name, r) in [
            ("Heston", price_heston_exp(&params, &opt)?),
            ("HHW", price_hhw_exp(&params, &opt)?),
        ] {
            let b = r.breakdown.expect("expansion pricers attach a breakdown");
            println!(
                "{t:>4} {name:>8} {:>11.6} {:>+11.6} {:>+11.6} {:>+11.6} {:>+11.6} {:>+11.6} {:>11.6}",
                b.bs, b.dxdy, b.dx2dy, b.dy2, b.dx2dy2, b.dy, b.total
            );
        }
        println!("{:>13} {:+.6}", "rate effect", delta_stochastic_rates(&params, &opt)?);
    }
    Ok(())
}
