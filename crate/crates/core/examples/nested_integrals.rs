//! The rate adjustment `alpha(t)`, the nested exponential integrals built on
//! it, and the forward variance `y0`, each beside a brute-force quadrature.

use hhw_expansion::integrals::{alpha_coeffs, i1, i1_2k, i2, i3, i4, y0_hhw};
use hhw_expansion::quad::{nested_quad, quad, Tolerance};
use hhw_expansion::ModelParams;

fn main() -> hhw_expansion::Result<()> {
    let params = ModelParams::base();
    let t = 5.0;
    let adj = alpha_coeffs(&params, t);
    let a = adj.alpha;
    println!(
        "alpha(t) = {:+.6} {:+.6} e^(k_d t) {:+.6} e^(k_f t),  alpha(T) = {:.1e}",
        a.c0,
        a.cd,
        a.cf,
        a.eval(t)
    );

    let c = adj.one_plus_alpha();
    let kv = c.k_v;
    let tol = Tolerance::default();
    let w_up = |s: f64| (kv * s).exp();
    let w_down = |s: f64| (-kv * s).exp() * c.eval(s);
    let brute_i1 = nested_quad(&[&w_up, &w_down], t, tol)?.value;
    println!("I1(1+alpha)     {:.15}  quadrature {:.15}", i1(&c), brute_i1);
    println!("I1_2k(alpha)    {:.15}", i1_2k(&a));
    println!("I2(1+alpha)     {:.15}", i2(&c));
    println!("I3(1+alpha)     {:.15}", i3(&c, &c));
    println!("I4(alpha)       {:.15}", i4(&a));

    let y0 = y0_hhw(&params, t);
    let var = |s: f64| hhw_expansion::integrals::forward_variance(&params, s, t, params.heston.v0);
    let brute_y0 = quad(var, 0.0, t, Tolerance::new(1e-13, 1e-16))?.value;
    println!(
        "y0              {:.15}  quadrature {:.15}  (v0 T = {})",
        y0,
        brute_y0,
        params.heston.v0 * t
    );
    Ok(())
}
