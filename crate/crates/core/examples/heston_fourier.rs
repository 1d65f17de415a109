//! Heston puts and calls from the characteristic function, with the
//! normalisation and parity checks that hold for any parameters.

use hhw_expansion::{
    charfn, price_call_chf, price_put_chf, strike_grid, ChfParams, Complex64, ModelParams, OptionSpec,
};

fn main() -> hhw_expansion::Result<()> {
    let params = ModelParams::base();
    for t in [1.0, 10.0] {
        let p = ChfParams::from_model(&params, &OptionSpec::put(100.0, t, &params)?);
        let one = charfn(Complex64::new(0.0, -1.0), &p);
        println!("T={t}: phi(-i) = {:.3e}{:+.3e}i", one.re, one.im);
        for k in strike_grid(p.forward, t) {
            let put = price_put_chf(&p, k)?;
            let call = price_call_chf(&p, k)?;
            let parity = call - put - p.discount * (p.forward - k);
            println!("  K {k:>9.4}  put {put:>12.8}  call {call:>12.8}  parity {parity:+.1e}");
        }
    }
    Ok(())
}
