//! The put in (log-forward, total-variance) coordinates, the partials the
//! expansion uses, and the implied-vol inversion.

use hhw_expansion::{bs_partial, bs_put, implied_vol, BsPoint};

fn main() -> hhw_expansion::Result<()> {
    let p = BsPoint::new(100f64.ln(), 0.05, 100.0, 1.0);
    println!("put            {:.10}", bs_put(&p)?);
    for (i, j) in [(1, 0), (0, 1), (1, 1), (0, 2), (2, 1), (2, 2), (2, 0), (4, 0)] {
        println!("d^{i}x d^{j}y BS  {:+.10}", bs_partial(&p, i, j)?);
    }
    // d_y BS = (d_x^2 BS - d_x BS) / 2
    let lhs = bs_partial(&p, 0, 1)?;
    let rhs = 0.5 * (bs_partial(&p, 2, 0)? - bs_partial(&p, 1, 0)?);
    println!("heat identity gap {:.1e}", lhs - rhs);

    for k in [80.0, 100.0, 125.0] {
        let price = bs_put(&BsPoint::new(100f64.ln(), 0.2 * 0.2 * 2.0, k, 0.97))?;
        let iv = implied_vol(price, 100.0, k, 2.0, 0.97)?;
        println!("K {k:>5}: price {price:.8} -> vol {iv:.12}");
    }
    Ok(())
}
