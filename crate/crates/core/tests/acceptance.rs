//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.
//!
//! Monte-Carlo criteria share one configuration fixed before any of them
//! was run: 1e5 antithetic paths, dt 0.05, seed 42, 32 batches.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use common::*;
use hhw_expansion::expansion::implied_vol_of;
use hhw_expansion::integrals::{i1, i1_2k, i2, i3, i4, y0_hhw, ExpCoeffs};
use hhw_expansion::mc_qe::simulate_hhw_strikes;
use hhw_expansion::quad::{quad, Tolerance};
use hhw_expansion::{
    bs_partial, bs_put, price_heston_chf, price_heston_exp, price_hhw_exp, price_hybrid_expchf, strike_grid, BsPoint,
    McConfig, ModelParams, OptionKind, OptionSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BP: f64 = 1e4;

fn mc_config() -> McConfig {
    McConfig {
        n_paths: 100_000,
        dt: 0.05,
        seed: 42,
        n_batches: 32,
        antithetic: true,
        path_stats: false,
    }
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn puts(p: &ModelParams, t: f64) -> Vec<OptionSpec> {
    strike_grid(p.forward(t), t)
        .into_iter()
        .map(|k| OptionSpec::put(k, t, p).unwrap())
        .collect()
}

/// Monte-Carlo standard error carried into Black volatility through vega.
fn se_in_vol(opt: &OptionSpec, iv: f64, se: f64) -> f64 {
    let t = opt.maturity;
    let dy = bs_partial(
        &BsPoint::new(opt.forward.ln(), iv * iv * t, opt.strike, opt.discount),
        0,
        1,
    )
    .unwrap();
    se / (dy * 2.0 * iv * t)
}

/// Relative error with the 1e-12 absolute floor folded in, so that a value
/// of at most 1e-9 means "within 1e-9 relative or 1e-12 absolute".
fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-3)
}

fn ac1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = (0.0f64, "");
    let mut note = |name: &'static str, got: f64, want: f64| {
        let e = rel_err(got, want);
        if e > worst.0 {
            worst = (e, name);
        }
    };
    let mut check = |c: &ExpCoeffs, c2: &ExpCoeffs| {
        note("I1", i1(c), oracle_i1(c));
        note("I1_2k", i1_2k(c), oracle_i1_2k(c));
        note("I2", i2(c), oracle_i2(c));
        note("I3", i3(c, c), oracle_i3(c, c));
        note("I3(c1,c2)", i3(c, c2), oracle_i3(c, c2));
        note("I4", i4(c), oracle_i4(c));
    };
    let mut draws = 0;
    for _ in 0..1000 {
        let (kd, kf, kv, t) = random_speeds(&mut rng);
        let c = random_coeffs(&mut rng, kd, kf, kv, t);
        let c2 = random_coeffs(&mut rng, kd, kf, kv, t);
        check(&c, &c2);
        draws += 1;
    }
    for _ in 0..100 {
        let (_, _, kv, t) = random_speeds(&mut rng);
        let near = 1.0 + 1e-5;
        let c = random_coeffs(&mut rng, kv * near, 2.0 * kv * near, kv, t);
        let c2 = random_coeffs(&mut rng, kv * near, 2.0 * kv * near, kv, t);
        check(&c, &c2);
        draws += 1;
    }
    let mut y0_worst = 0.0f64;
    for _ in 0..1000 {
        let m = random_model(&mut rng);
        let t = MATURITIES[rng.random_range(0..5)];
        y0_worst = y0_worst.max(rel_err(y0_hhw(&m, t), oracle_y0(&m, t)));
    }
    for _ in 0..100 {
        let mut m = random_model(&mut rng);
        m.hw_dom.k = m.heston.k_v * (1.0 + 1e-5);
        m.hw_for.k = 2.0 * m.heston.k_v * (1.0 + 1e-5);
        let t = MATURITIES[rng.random_range(0..5)];
        y0_worst = y0_worst.max(rel_err(y0_hhw(&m, t), oracle_y0(&m, t)));
    }
    verdict(
        worst.0 <= 1e-9 && y0_worst <= 1e-9,
        format!(
            "{draws} coefficient draws, worst {:.1e} ({}); 1100 y0 draws, worst {y0_worst:.1e}",
            worst.0, worst.1
        ),
    )
}

fn ac2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut identity = 0.0f64;
    for _ in 0..10_000 {
        let p = random_point(&mut rng);
        let dy = bs_partial(&p, 0, 1).unwrap();
        let (dx, dx2) = dx_dx2(&p);
        identity = identity.max((dy - 0.5 * (dx2 - dx)).abs() / (1.0 + dy.abs()));
    }
    let (mut fd_ratio, mut points) = (0.0f64, 0);
    while points < 2_000 {
        let p = random_point(&mut rng);
        if p.d2().abs() > 8.0 {
            continue;
        }
        points += 1;
        for (_, exact, fd, tol) in fd_partials(&p) {
            fd_ratio = fd_ratio.max((exact - fd).abs() / tol);
        }
    }
    verdict(
        identity <= 1e-10 && fd_ratio <= 1.0,
        format!(
            "identity worst {identity:.1e} on 1e4 points; partials vs differences worst {:.1e} relative on {points} points",
            fd_ratio * 1e-6
        ),
    )
}

fn ac3() -> Verdict {
    let base = ModelParams::base();
    let (mut a, mut b, mut c) = (0.0f64, 0.0f64, 0.0f64);
    for t in MATURITIES {
        let det = base.with_deterministic_rates();
        for opt in puts(&det, t) {
            let hhw = price_hhw_exp(&det, &opt).unwrap().price;
            a = a.max((hhw - price_heston_exp(&det, &opt).unwrap().price).abs());
            let hybrid = price_hybrid_expchf(&det, &opt).unwrap().price;
            c = c.max((hybrid - price_heston_chf(&det, &opt).unwrap().price).abs());
        }
        let mut flat = base.clone();
        flat.heston.gamma = 0.0;
        let y0 = y0_hhw(&flat, t);
        for opt in puts(&flat, t) {
            let bs = bs_put(&BsPoint::new(opt.forward.ln(), y0, opt.strike, opt.discount)).unwrap();
            b = b.max((price_hhw_exp(&flat, &opt).unwrap().price - bs).abs());
        }
    }
    verdict(
        a <= 1e-12 && b == 0.0 && c <= 1e-12,
        format!("(a) {a:.1e}  (b) {b:.1e}  (c) {c:.1e}"),
    )
}

fn ac4() -> Verdict {
    let start = Instant::now();
    let p = ModelParams::base().with_deterministic_rates();
    let (mut short, mut all) = (0.0f64, 0.0f64);
    for t in MATURITIES {
        for opt in puts(&p, t) {
            let exp = price_heston_exp(&p, &opt).unwrap().implied_vol.unwrap();
            let chf = price_heston_chf(&p, &opt).unwrap().implied_vol.unwrap();
            let gap = (exp - chf).abs() * BP;
            all = all.max(gap);
            if t <= 3.0 {
                short = short.max(gap);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        all <= 15.0 && short <= 10.0 && secs < 1.0,
        format!("max gap {all:.2} bp (T <= 3: {short:.2} bp) in {secs:.3} s"),
    )
}

fn ac5() -> Verdict {
    let start = Instant::now();
    let p = ModelParams::base();
    let (mut iv_excess, mut worst_bp, mut worst_se) = (0.0f64, 0.0f64, 0.0f64);
    for t in [1.0, 3.0, 5.0] {
        let opts: Vec<_> = puts(&p, t)[1..6].to_vec();
        let strikes: Vec<f64> = opts.iter().map(|o| o.strike).collect();
        let run = simulate_hhw_strikes(&p, t, &strikes, OptionKind::Put, &mc_config()).unwrap();
        for (opt, est) in opts.iter().zip(&run.estimates) {
            let exp = price_hhw_exp(&p, opt).unwrap();
            let iv_exp = exp.implied_vol.unwrap();
            let iv_mc = implied_vol_of(est.price, opt).unwrap();
            let gap = (iv_exp - iv_mc).abs();
            let allowed = (10.0 / BP).max(3.0 * se_in_vol(opt, iv_mc, est.std_error));
            iv_excess = iv_excess.max(gap / allowed);
            worst_bp = worst_bp.max(gap * BP);
            worst_se = worst_se.max((exp.price - est.price).abs() / est.std_error);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        iv_excess <= 1.0 && worst_se <= 3.0 && secs < 180.0,
        format!(
            "max IV gap {worst_bp:.2} bp (at most {:.2} of max(10 bp, 3 s.e.)), max price gap {worst_se:.2} s.e. in {secs:.1} s",
            iv_excess
        ),
    )
}

fn ac6() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for gamma in [0.5, 0.6] {
        let mut p = ModelParams::base();
        p.heston.gamma = gamma;
        let opt = OptionSpec::put(p.forward(1.0), 1.0, &p).unwrap();
        let est = simulate_hhw_strikes(&p, 1.0, &[opt.strike], OptionKind::Put, &mc_config())
            .unwrap()
            .estimates[0];
        let mc = implied_vol_of(est.price, &opt).unwrap();
        let hybrid = (price_hybrid_expchf(&p, &opt).unwrap().implied_vol.unwrap() - mc) * BP;
        let exp = (price_hhw_exp(&p, &opt).unwrap().implied_vol.unwrap() - mc) * BP;
        pass &= hybrid.abs() <= exp.abs() + 2.0;
        detail.push(format!(
            "gamma {gamma}: ExpChF-MC {hybrid:+.2} bp, Exp-MC {exp:+.2} bp (s.e. {:.2} bp)",
            se_in_vol(&opt, mc, est.std_error) * BP
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(pass && secs < 60.0, format!("{} in {secs:.1} s", detail.join("; ")))
}

/// Linear and quadratic coefficients of `y0` in one rate volatility, from the
/// forward variance written out term by term.
fn y0_eta_coefficients(p: &ModelParams, t: f64, domestic: bool) -> (f64, f64) {
    let b = |k: f64, s: f64| ((-k * (t - s)).exp() - 1.0) / k;
    let (kd, kf) = (p.hw_dom.k, p.hw_for.k);
    let sv = p.heston.v0.sqrt();
    let c = &p.corr;
    let tol = Tolerance::new(1e-13, 1e-16);
    let int = |f: &dyn Fn(f64) -> f64| quad(f, 0.0, t, tol).unwrap().value;
    if domestic {
        let lin = int(&|s| -2.0 * c.rho_sd * sv * b(kd, s) - 2.0 * c.rho_df * p.hw_for.eta * b(kd, s) * b(kf, s));
        (lin, int(&|s| b(kd, s).powi(2)))
    } else {
        let lin = int(&|s| 2.0 * c.rho_sf * sv * b(kf, s) - 2.0 * c.rho_df * p.hw_dom.eta * b(kd, s) * b(kf, s));
        (lin, int(&|s| b(kf, s).powi(2)))
    }
}

fn ac7() -> Verdict {
    let start = Instant::now();
    let base = ModelParams::base();
    let mut direction = true;
    for domestic in [true, false] {
        for t in MATURITIES {
            let mut q = base.clone();
            let eta = if domestic { &mut q.hw_dom.eta } else { &mut q.hw_for.eta };
            let e = *eta;
            *eta *= 2.0;
            let (lin, quadratic) = y0_eta_coefficients(&base, t, domestic);
            let predicted = lin * e + quadratic * 3.0 * e * e;
            let moved = y0_hhw(&q, t) - y0_hhw(&base, t);
            direction &= moved.signum() == predicted.signum() && (moved - predicted).abs() <= 1e-9 * predicted.abs();
        }
    }

    let cfg = McConfig {
        n_paths: 1_000_000,
        ..mc_config()
    };
    let t = 5.0;
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for (name, domestic) in [("eta_d", true), ("eta_f", false)] {
        for eta in [0.01, 0.02] {
            let mut p = base.clone();
            if domestic {
                p.hw_dom.eta = eta;
            } else {
                p.hw_for.eta = eta;
            }
            let opt = OptionSpec::put(p.forward(t), t, &p).unwrap();
            let est = simulate_hhw_strikes(&p, t, &[opt.strike], OptionKind::Put, &cfg)
                .unwrap()
                .estimates[0];
            let mc = implied_vol_of(est.price, &opt).unwrap();
            let gap = (price_hhw_exp(&p, &opt).unwrap().implied_vol.unwrap() - mc) * BP;
            worst = worst.max(gap.abs());
            detail.push(format!("{name}={eta}: {gap:+.2} bp"));
        }
    }
    verdict(
        direction && worst <= 10.0,
        format!(
            "y0 moves as predicted: {direction}; ATM T=5, 1e6 paths: {} ({:.0} s)",
            detail.join(", "),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn ac8() -> Verdict {
    let p = ModelParams::base();
    let grid: Vec<OptionSpec> = MATURITIES.iter().flat_map(|&t| puts(&p, t)).collect();
    let time = |f: &dyn Fn(&OptionSpec) -> f64| {
        let start = Instant::now();
        let total: f64 = grid.iter().map(f).sum();
        assert!(total.is_finite());
        start.elapsed().as_secs_f64()
    };
    let exp = time(&|o| price_hhw_exp(&p, o).unwrap().price);
    let chf = time(&|o| price_heston_chf(&p, o).unwrap().price);
    let hybrid = time(&|o| price_hybrid_expchf(&p, o).unwrap().price);
    verdict(
        grid.len() == 35 && exp < 0.05 && chf < 5.0 && hybrid < 5.0,
        format!(
            "35 options: Exp {:.2} ms, ChF {:.1} ms, ExpChF {:.1} ms",
            exp * 1e3,
            chf * 1e3,
            hybrid * 1e3
        ),
    )
}

fn ac9() -> Verdict {
    let mut p = ModelParams::base().with_deterministic_rates();
    p.heston.gamma = 0.0;
    let t = 1.0;
    let opts = puts(&p, t);
    let strikes: Vec<f64> = opts.iter().map(|o| o.strike).collect();
    let run = simulate_hhw_strikes(&p, t, &strikes, OptionKind::Put, &mc_config()).unwrap();
    let mut worst = 0.0f64;
    for (opt, est) in opts.iter().zip(&run.estimates) {
        let bs = bs_put(&BsPoint::new(
            opt.forward.ln(),
            p.heston.v0 * t,
            opt.strike,
            opt.discount,
        ))
        .unwrap();
        worst = worst.max((est.price - bs).abs() / est.std_error);
    }

    // The engine asserts v >= 0 after every step; a run that returns has
    // kept every path non-negative. High vol-of-vol breaks Feller here.
    let mut wild = ModelParams::base();
    wild.heston.gamma = 1.0;
    let stats_cfg = McConfig {
        path_stats: true,
        ..mc_config()
    };
    let positive = simulate_hhw_strikes(&wild, 5.0, &[100.0], OptionKind::Put, &stats_cfg)
        .map(|r| r.path_stats.unwrap().mean_v.iter().all(|&v| v >= 0.0))
        .unwrap_or(false);
    verdict(
        worst <= 3.0 && positive,
        format!("max |MC - BS| {worst:.2} s.e. over 7 strikes; variance non-negative at gamma = 1: {positive}"),
    )
}

fn ac10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hhw"))
            .args([
                "--methods",
                "exp,expchf,chf,mc",
                "--paths",
                "100000",
                "--dt",
                "0.05",
                "--seed",
                "42",
            ])
            .args(["--batches", "32", "--antithetic", "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        (status.success(), std::fs::read(out).unwrap_or_default())
    };
    let (ok_a, a) = run("first.csv");
    let (ok_b, b) = run("second.csv");
    verdict(
        ok_a && ok_b && !a.is_empty() && a == b,
        format!("two full-grid runs, {} bytes each, identical: {}", a.len(), a == b),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 closed-form integrals vs quadrature", ac1),
        ("AC2 Black-Scholes kernel", ac2),
        ("AC3 reduction identities", ac3),
        ("AC4 Heston expansion vs ChF", ac4),
        ("AC5 expansion vs Monte Carlo", ac5),
        ("AC6 hybrid at high vol-of-vol", ac6),
        ("AC7 rate-vol sweep", ac7),
        ("AC8 grid timing", ac8),
        ("AC9 Monte-Carlo degeneracy", ac9),
        ("AC10 byte-identical CSV", ac10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let v = run();
        failed += usize::from(!v.pass);
        println!(
            "{} {name}: {} [{:.1} s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
