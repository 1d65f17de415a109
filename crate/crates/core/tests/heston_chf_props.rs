mod common;

use hhw_expansion::heston_chf::{price_chf_truncated, truncation_bound};
use hhw_expansion::{price_call_chf, price_put_chf, strike_grid, ChfParams, ModelParams, OptionSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chf(p: &ModelParams, t: f64) -> ChfParams {
    ChfParams::from_model(p, &OptionSpec::put(100.0, t, p).unwrap())
}

fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    let mut p = ModelParams::base();
    p.heston.v0 = rng.random_range(0.01..0.2);
    p.heston.theta_v = rng.random_range(0.01..0.2);
    p.heston.k_v = rng.random_range(0.1..5.0);
    p.heston.gamma = rng.random_range(0.0..1.0);
    p.corr.rho_sv = rng.random_range(-0.9..0.9);
    p
}

#[test]
fn put_increases_along_the_strike_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..30 {
        let p = random_params(&mut rng);
        for t in common::MATURITIES {
            let c = chf(&p, t);
            let prices: Vec<f64> = strike_grid(c.forward, t)
                .iter()
                .map(|&k| price_put_chf(&c, k).unwrap())
                .collect();
            assert!(prices.windows(2).all(|w| w[1] >= w[0]), "{prices:?}");
        }
    }
}

#[test]
fn parity_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let p = random_params(&mut rng);
        for t in common::MATURITIES {
            let c = chf(&p, t);
            for k in strike_grid(c.forward, t) {
                let put = price_put_chf(&c, k).unwrap();
                let call = price_call_chf(&c, k).unwrap();
                assert!(
                    (call - put - c.discount * (c.forward - k)).abs() <= 1e-9,
                    "{p:?} T={t} K={k}"
                );
                let intrinsic = c.discount * (k - c.forward).max(0.0);
                assert!(put > intrinsic - 1e-12 && put < c.discount * k);
            }
        }
    }
}

#[test]
fn doubling_truncation_changes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        for t in common::MATURITIES {
            let c = chf(&p, t);
            let u = truncation_bound(&c);
            for k in strike_grid(c.forward, t) {
                let a = price_chf_truncated(&c, hhw_expansion::OptionKind::Put, k, u).unwrap();
                let b = price_chf_truncated(&c, hhw_expansion::OptionKind::Put, k, 2.0 * u).unwrap();
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }
}

#[test]
fn deep_out_of_the_money_put() {
    let c = chf(&ModelParams::base(), 1.0);
    let deep = price_put_chf(&c, 40.0).unwrap();
    assert!(deep >= 0.0 && deep <= price_put_chf(&c, 100.0).unwrap());
}
