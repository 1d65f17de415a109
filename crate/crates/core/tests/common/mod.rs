//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use hhw_expansion::integrals::ExpCoeffs;
use hhw_expansion::quad::{quad, Tolerance};
use hhw_expansion::{normal, BsPoint, ModelParams};
use rand::Rng;

pub const MATURITIES: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 10.0];

fn c_at(c: &ExpCoeffs, t: f64) -> f64 {
    c.c0 + c.cd * (c.k_d * t).exp() + c.cf * (c.k_f * t).exp()
}

fn tol(level: i32) -> Tolerance {
    Tolerance::new(1e-11 * 0.1f64.powi(level).max(1e-2), 1e-15 * 0.1f64.powi(level))
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, level: i32) -> f64 {
    quad(f, a, b, tol(level)).unwrap().value
}

// The kernels are regrouped so every exponent is non-positive, e.g.
// `e^{k t} e^{-k u} = e^{-k (u - t)}`, which keeps each level O(1). Splitting
// them as separate weights puts factors near e^{2 k_v T} outside inner
// integrals near e^{-2 k_v T}, and any absolute tolerance inside is magnified.

pub fn oracle_i1_speed(c: &ExpCoeffs, kv: f64) -> f64 {
    let t_end = c.maturity;
    integrate(
        |t| integrate(|u| (-kv * (u - t)).exp() * c_at(c, u), t, t_end, 1),
        0.0,
        t_end,
        0,
    )
}

pub fn oracle_i1(c: &ExpCoeffs) -> f64 {
    oracle_i1_speed(c, c.k_v)
}

pub fn oracle_i1_2k(c: &ExpCoeffs) -> f64 {
    oracle_i1_speed(c, 2.0 * c.k_v)
}

pub fn oracle_i2(c: &ExpCoeffs) -> f64 {
    let (kv, t_end) = (c.k_v, c.maturity);
    let inner = |t: f64, u: f64| integrate(|s| (-kv * (s - t)).exp() * c_at(c, s), u, t_end, 2);
    integrate(|t| integrate(|u| inner(t, u), t, t_end, 1), 0.0, t_end, 0)
}

/// `e^{2k t - k u - k s} = e^{-2k (u - t)} e^{-k (s - u)}`.
pub fn oracle_i3(c1: &ExpCoeffs, c2: &ExpCoeffs) -> f64 {
    let (kv, t_end) = (c1.k_v, c1.maturity);
    let inner = |u: f64| integrate(|s| (-kv * (s - u)).exp() * c_at(c2, s), u, t_end, 2);
    let middle = |t: f64| integrate(|u| (-2.0 * kv * (u - t)).exp() * c_at(c1, u) * inner(u), t, t_end, 1);
    integrate(middle, 0.0, t_end, 0)
}

/// `e^{k t + k u - 2k s} = e^{-k (u - t)} e^{-2k (s - u)}`.
pub fn oracle_i4(c: &ExpCoeffs) -> f64 {
    let (kv, t_end) = (c.k_v, c.maturity);
    let inner = |u: f64| integrate(|s| (-2.0 * kv * (s - u)).exp() * c_at(c, s), u, t_end, 2);
    integrate(
        |t| integrate(|u| (-kv * (u - t)).exp() * inner(u), t, t_end, 1),
        0.0,
        t_end,
        0,
    )
}

/// `int_0^T sigma_F(t, v0)^2 dt` from the forward-rate volatility written out
/// here independently of the library.
pub fn oracle_y0(p: &ModelParams, maturity: f64) -> f64 {
    let b = |k: f64, t: f64| ((-k * (maturity - t)).exp() - 1.0) / k;
    let (ed, ef) = (p.hw_dom.eta, p.hw_for.eta);
    let (kd, kf) = (p.hw_dom.k, p.hw_for.k);
    let c = &p.corr;
    let sv = p.heston.v0.sqrt();
    let var = |t: f64| {
        let (bd, bf) = (b(kd, t), b(kf, t));
        // |sqrt(v) e_S - eta_d B_d e_d + eta_f B_f e_f|^2 expanded
        sv * sv + ed * ed * bd * bd + ef * ef * bf * bf - 2.0 * c.rho_sd * sv * ed * bd + 2.0 * c.rho_sf * sv * ef * bf
            - 2.0 * c.rho_df * ed * ef * bd * bf
    };
    quad(var, 0.0, maturity, Tolerance::new(1e-13, 1e-16)).unwrap().value
}

pub fn close(got: f64, want: f64, rel: f64, abs: f64) -> bool {
    (got - want).abs() <= abs.max(rel * want.abs())
}

pub fn random_coeffs<R: Rng>(rng: &mut R, k_d: f64, k_f: f64, k_v: f64, t: f64) -> ExpCoeffs {
    ExpCoeffs::new(
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
        k_d,
        k_f,
        k_v,
        t,
    )
}

/// Speeds and maturity drawn from the test ranges.
pub fn random_speeds<R: Rng>(rng: &mut R) -> (f64, f64, f64, f64) {
    let k_v = rng.random_range(0.1..5.0);
    let k_d = rng.random_range(0.005..2.0);
    let k_f = rng.random_range(0.005..2.0);
    let t = MATURITIES[rng.random_range(0..MATURITIES.len())];
    (k_d, k_f, k_v, t)
}

/// Base parameters with the rate block and correlations redrawn.
pub fn random_model<R: Rng>(rng: &mut R) -> ModelParams {
    let mut p = ModelParams::base();
    let v = rng.random_range(0.01..0.2);
    p.heston.v0 = v;
    p.heston.theta_v = v;
    p.heston.k_v = rng.random_range(0.1..5.0);
    p.hw_dom.k = rng.random_range(0.005..2.0);
    p.hw_for.k = rng.random_range(0.005..2.0);
    p.hw_dom.eta = rng.random_range(0.0..0.05);
    p.hw_for.eta = rng.random_range(0.0..0.05);
    p.corr.rho_sd = rng.random_range(-0.5..0.5);
    p.corr.rho_sf = rng.random_range(-0.5..0.5);
    p.corr.rho_df = rng.random_range(-0.5..0.5);
    p
}

pub fn random_point<R: Rng>(rng: &mut R) -> BsPoint {
    let strike: f64 = rng.random_range(50.0..200.0);
    let y = rng.random_range(0.005..2.0);
    let d = rng.random_range(-3.0..3.0);
    let x = strike.ln() + d * f64::sqrt(y);
    BsPoint::new(x, y, strike, rng.random_range(0.5..1.0))
}

/// Delta and gamma in `x`, differentiated by hand from `-Dd e^x Phi(-d1)`.
pub fn dx_dx2(p: &BsPoint) -> (f64, f64) {
    let d1 = p.d1();
    let ex = p.x.exp();
    let dx = -p.discount * ex * normal::cdf(-d1);
    (dx, dx + p.discount * ex * normal::pdf(d1) / p.y.sqrt())
}

/// Central difference with one Richardson step.
pub fn richardson(f: impl Fn(f64) -> f64, at: f64, h: f64) -> f64 {
    let d = |h: f64| (f(at + h) - f(at - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

pub fn richardson2(f: impl Fn(f64) -> f64, at: f64, h: f64) -> f64 {
    let d = |h: f64| (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Each analytic partial next to a finite difference of the put or of a
/// lower partial, with the allowed error.
pub fn fd_partials(p: &BsPoint) -> Vec<(&'static str, f64, f64, f64)> {
    use hhw_expansion::{bs_partial, bs_put};
    let at = |x: f64, y: f64| BsPoint { x, y, ..*p };
    let part = |q: BsPoint, i, j| bs_partial(&q, i, j).unwrap();
    let put = |q: BsPoint| bs_put(&q).unwrap();
    let hy = 1e-3 * p.y;
    let hx = 1e-3 * p.y.sqrt();
    let cases = [
        ("dx", part(*p, 1, 0), richardson(|x| put(at(x, p.y)), p.x, hx)),
        ("dy", part(*p, 0, 1), richardson(|y| put(at(p.x, y)), p.y, hy)),
        ("dxdy", part(*p, 1, 1), richardson(|x| part(at(x, p.y), 0, 1), p.x, hx)),
        ("dy2", part(*p, 0, 2), richardson(|y| part(at(p.x, y), 0, 1), p.y, hy)),
        (
            "dx2dy",
            part(*p, 2, 1),
            richardson2(|x| part(at(x, p.y), 0, 1), p.x, 10.0 * hx),
        ),
        (
            "dx2dy2",
            part(*p, 2, 2),
            richardson(|y| part(at(p.x, y), 2, 1), p.y, hy),
        ),
        ("dx2", part(*p, 2, 0), richardson2(|x| put(at(x, p.y)), p.x, 10.0 * hx)),
        (
            "dx4",
            part(*p, 4, 0),
            richardson2(|x| part(at(x, p.y), 2, 0), p.x, 10.0 * hx),
        ),
    ];
    // Partials pass through zero, so relative error is floored by the size
    // of the density factor at this point.
    let floor = p.discount * p.strike * normal::pdf(p.d2()) * 1e-3 / p.y.powi(2);
    cases
        .into_iter()
        .map(|(name, exact, fd)| (name, exact, fd, 1e-6 * exact.abs().max(floor)))
        .collect()
}
