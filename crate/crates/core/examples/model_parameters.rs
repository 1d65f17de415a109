//! Parameter files: the JSON layout, curve-implied forwards, and the
//! validation the pricers run before anything else.

use hhw_expansion::{validate, validate_for_expansion, ModelParams, ZeroCurve};

fn main() -> hhw_expansion::Result<()> {
    let mut params = ModelParams::base();
    params.hw_dom.zero_curve = ZeroCurve::new(&[(1.0, 0.02), (5.0, 0.025), (10.0, 0.03)])?;
    params.hw_for.zero_curve = ZeroCurve::flat(0.01);
    let json = params.to_json();
    println!("{json}");

    let back = ModelParams::from_json(&json)?;
    for t in [0.0, 1.0, 5.0, 10.0] {
        println!("F0({t:>4}) = {:.6}", back.forward(t));
    }
    println!("Feller satisfied: {}", validate(&back)?.feller_satisfied);

    let mut off = back.clone();
    off.heston.theta_v = 0.06;
    println!("theta != v0: {}", validate_for_expansion(&off).unwrap_err());
    off.corr.rho_sv = 1.2;
    println!("rho_sv = 1.2: {}", validate(&off).unwrap_err());
    Ok(())
}
