//! Monte-Carlo benchmark for the full Heston-Hull-White FX model under the
//! domestic risk-neutral measure:
//!
//! ```text
//! dS/S  = (r_d - r_f) dt + sqrt(v) dW_S
//! dv    = k_v (theta_v - v) dt + gamma sqrt(v) dW_v
//! dr_d  = (theta_d(t) - k_d r_d) dt + eta_d dW_d
//! dr_f  = (theta_f(t) - k_f r_f - eta_f rho_sf sqrt(v)) dt + eta_f dW_f
//! ```
//!
//! Variance steps use Andersen's QE scheme (switch at `psi = 1.5`) with the
//! martingale-corrected log-spot update. Short rates are `r = x + phi(t)`
//! with `x` an Ornstein-Uhlenbeck process stepped exactly; `phi` is fitted to
//! the zero curve so bonds reprice. The quanto drift of the foreign rate uses
//! the step average of `sqrt(v)`. Rate integrals in the spot drift and the
//! discount factor are trapezoidal in `x` and exact in `phi`.
//!
//! Given the variance draw, the spot noise orthogonal to `W_v` and the two
//! rate shocks are Gaussian with covariance
//! `[[1 - rho_sv^2, rho_sd, rho_sf], [rho_sd, 1, rho_df], [rho_sf, rho_df, 1]]`
//! (this needs `rho_vd = rho_vf = 0`).
//!
//! Paths are split into batches. Each batch owns a ChaCha8 stream selected by
//! its index, batches run in parallel and are merged in index order, so a
//! given `(seed, n_batches, dt, n_paths)` always returns the same numbers.

use std::path::Path;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cholesky, validate, HullWhiteParams, ModelParams, OptionKind, OptionSpec};
use crate::normal::inv_cdf;

/// QE switching level between the quadratic and exponential branches.
pub const PSI_CRITICAL: f64 = 1.5;
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    /// Total number of paths, antithetic partners included.
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub n_batches: usize,
    pub antithetic: bool,
    /// Collect per-step averages of `v`, `r_d`, `r_f`.
    pub path_stats: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            dt: 0.05,
            seed: 42,
            n_batches: 32,
            antithetic: false,
            path_stats: false,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be at least 1".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt {} must be positive", self.dt)));
        }
        if self.n_batches == 0 {
            return Err(Error::InvalidConfig("n_batches must be at least 1".into()));
        }
        if self.antithetic && self.n_paths % 2 == 1 {
            return Err(Error::InvalidConfig("antithetic sampling needs an even n_paths".into()));
        }
        Ok(())
    }

    /// Number of steps to `maturity`, which must sit on the `dt` grid.
    pub fn steps(&self, maturity: f64) -> Result<usize> {
        let ratio = maturity / self.dt;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > GRID_TOL * n {
            return Err(Error::InvalidConfig(format!(
                "maturity {maturity} is not a multiple of dt {}",
                self.dt
            )));
        }
        Ok(n as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub seed: u64,
    /// Wall-clock seconds of the whole simulation this estimate came from.
    pub elapsed: f64,
}

/// Cross-path averages at each grid time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathStats {
    pub time: Vec<f64>,
    pub mean_v: Vec<f64>,
    pub mean_rd: Vec<f64>,
    pub mean_rf: Vec<f64>,
}

impl PathStats {
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        w.write_record(["step", "time", "mean_v", "mean_rd", "mean_rf"])
            .map_err(csv_error)?;
        for i in 0..self.time.len() {
            w.write_record([
                i.to_string(),
                format!("{:.16e}", self.time[i]),
                format!("{:.16e}", self.mean_v[i]),
                format!("{:.16e}", self.mean_rd[i]),
                format!("{:.16e}", self.mean_rf[i]),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// Result of one simulation priced at several strikes.
#[derive(Debug, Clone, PartialEq)]
pub struct McRun {
    pub estimates: Vec<McEstimate>,
    pub path_stats: Option<PathStats>,
}

/// Per-step constants of one short rate `r = x + phi`.
#[derive(Debug, Clone)]
struct RateGrid {
    decay: f64,
    /// `eta sqrt((1 - e^{-2k dt}) / (2k))`.
    vol: f64,
    /// `(1 - e^{-k dt}) / k`, multiplies a constant drift over a step.
    drift_factor: f64,
    /// `phi(t_i)` on the grid.
    phi: Vec<f64>,
    /// `int_{t_i}^{t_{i+1}} phi`.
    phi_integral: Vec<f64>,
}

impl RateGrid {
    fn new(hw: &HullWhiteParams, dt: f64, steps: usize) -> Self {
        let (k, eta) = (hw.k, hw.eta);
        let decay = (-k * dt).exp();
        let vol = eta * (-(-2.0 * k * dt).exp_m1() / (2.0 * k)).sqrt();
        let drift_factor = -(-k * dt).exp_m1() / k;
        let curve = &hw.zero_curve;
        // phi(t) = f(0, t) + eta^2 / (2 k^2) (1 - e^{-k t})^2
        let convexity = |t: f64| {
            let b = -(-k * t).exp_m1() / k;
            0.5 * eta * eta * b * b
        };
        let convexity_integral = |a: f64, b: f64| {
            // int_a^b (1 - e^{-ks})^2 ds * eta^2 / (2 k^2)
            let e1 = ((-k * b).exp() - (-k * a).exp()) / k;
            let e2 = ((-2.0 * k * b).exp() - (-2.0 * k * a).exp()) / (2.0 * k);
            0.5 * eta * eta / (k * k) * ((b - a) + 2.0 * e1 - e2)
        };
        let h = 1e-6;
        let inst_forward = |t: f64| {
            let lo = (t - h).max(0.0);
            (curve.discount(lo) / curve.discount(t + h)).ln() / (t + h - lo)
        };
        let mut phi = Vec::with_capacity(steps + 1);
        let mut phi_integral = Vec::with_capacity(steps);
        for i in 0..=steps {
            let t = i as f64 * dt;
            phi.push(inst_forward(t) + convexity(t));
            if i < steps {
                let t1 = (i + 1) as f64 * dt;
                phi_integral.push((curve.discount(t) / curve.discount(t1)).ln() + convexity_integral(t, t1));
            }
        }
        Self {
            decay,
            vol,
            drift_factor,
            phi,
            phi_integral,
        }
    }
}

/// Everything a batch needs, shared read-only.
struct Engine {
    steps: usize,
    dt: f64,
    kappa: f64,
    theta: f64,
    gamma: f64,
    rho_sv: f64,
    v0: f64,
    rho_sf_eta_f: f64,
    log_spot: f64,
    dom: RateGrid,
    fgn: RateGrid,
    /// Lower-triangular factor of the conditional covariance.
    chol: [[f64; 3]; 3],
    /// `e^{-k_v dt}`.
    ekdt: f64,
    // QE log-spot coefficients
    k1: f64,
    k2: f64,
    strikes: Vec<f64>,
    kind: OptionKind,
}

#[derive(Clone)]
struct BatchSums {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    samples: usize,
    stats: Vec<[f64; 3]>,
}

impl BatchSums {
    fn new(strikes: usize, stat_rows: usize) -> Self {
        Self {
            sum: vec![0.0; strikes],
            sum_sq: vec![0.0; strikes],
            samples: 0,
            stats: vec![[0.0; 3]; stat_rows],
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    // 53 random bits, centred so that 0 and 1 are never produced
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

impl Engine {
    fn new(params: &ModelParams, maturity: f64, strikes: &[f64], kind: OptionKind, cfg: &McConfig) -> Result<Self> {
        validate(params)?;
        cfg.validate()?;
        let c = &params.corr;
        if c.rho_vd != 0.0 || c.rho_vf != 0.0 {
            return Err(Error::UnsupportedCorrelation {
                rho_vd: c.rho_vd,
                rho_vf: c.rho_vf,
            });
        }
        if let Some(&k) = strikes.iter().find(|&&k| !(k > 0.0)) {
            return Err(Error::InvalidOption(format!("strike {k} must be positive")));
        }
        let steps = cfg.steps(maturity)?;
        let dt = cfg.dt;
        let h = &params.heston;
        let rho = c.rho_sv;
        let cov = [
            [1.0 - rho * rho, c.rho_sd, c.rho_sf],
            [c.rho_sd, 1.0, c.rho_df],
            [c.rho_sf, c.rho_df, 1.0],
        ];
        let chol = cholesky(&cov)?;
        let (k1, k2) = if h.gamma > 0.0 {
            let a = h.k_v * rho / h.gamma - 0.5;
            (0.5 * dt * a - rho / h.gamma, 0.5 * dt * a + rho / h.gamma)
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            steps,
            dt,
            kappa: h.k_v,
            theta: h.theta_v,
            gamma: h.gamma,
            rho_sv: rho,
            v0: h.v0,
            rho_sf_eta_f: c.rho_sf * params.hw_for.eta,
            log_spot: params.spot.ln(),
            dom: RateGrid::new(&params.hw_dom, dt, steps),
            fgn: RateGrid::new(&params.hw_for, dt, steps),
            chol,
            ekdt: (-h.k_v * dt).exp(),
            k1,
            k2,
            strikes: strikes.to_vec(),
            kind,
        })
    }

    /// Next variance from a uniform draw, QE scheme.
    fn qe_step(&self, v: f64, u: f64) -> (f64, QeBranch) {
        let (e, th, k, g) = (self.ekdt, self.theta, self.kappa, self.gamma);
        let m = th + (v - th) * e;
        let s2 = v * g * g * e * (1.0 - e) / k + th * g * g * (1.0 - e) * (1.0 - e) / (2.0 * k);
        let psi = s2 / (m * m);
        if psi <= PSI_CRITICAL {
            let inv = 2.0 / psi;
            let b2 = inv - 1.0 + (inv * (inv - 1.0)).sqrt();
            let a = m / (1.0 + b2);
            let b = b2.sqrt();
            let z = inv_cdf(u);
            let w = b + z;
            (a * w * w, QeBranch::Quadratic { a, b2 })
        } else {
            let p = (psi - 1.0) / (psi + 1.0);
            let beta = (1.0 - p) / m;
            let next = if u <= p {
                0.0
            } else {
                ((1.0 - p) / (1.0 - u)).ln() / beta
            };
            (next, QeBranch::Exponential { p, beta })
        }
    }

    /// Martingale-corrected drift constant `K0*` for the log spot.
    fn k0_star(&self, v: f64, branch: QeBranch) -> f64 {
        let rho = self.rho_sv;
        let half_k3 = 0.25 * self.dt * (1.0 - rho * rho);
        let a = self.k2 + half_k3;
        let base = -(self.k1 + half_k3) * v;
        match branch {
            QeBranch::Quadratic { a: qa, b2 } => {
                let q = 1.0 - 2.0 * a * qa;
                -a * b2 * qa / q + 0.5 * q.ln() + base
            }
            QeBranch::Exponential { p, beta } => -(p + beta * (1.0 - p) / (beta - a)).ln() + base,
        }
    }

    fn run_batch(&self, seed: u64, batch: usize, n_paths: usize, antithetic: bool, stats: bool) -> BatchSums {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch as u64);
        let stat_rows = if stats { self.steps + 1 } else { 0 };
        let mut acc = BatchSums::new(self.strikes.len(), stat_rows);
        let n_draws = if antithetic { n_paths / 2 } else { n_paths };
        let mut draws = vec![[0.0f64; 4]; self.steps];
        let mut payoffs = vec![0.0; self.strikes.len()];
        let mut pair = vec![0.0; self.strikes.len()];
        for _ in 0..n_draws {
            for d in draws.iter_mut() {
                *d = [
                    uniform(&mut rng),
                    uniform(&mut rng),
                    uniform(&mut rng),
                    uniform(&mut rng),
                ];
            }
            if antithetic {
                self.path(&draws, false, &mut payoffs, &mut acc.stats);
                pair.copy_from_slice(&payoffs);
                self.path(&draws, true, &mut payoffs, &mut acc.stats);
                for (j, p) in payoffs.iter().enumerate() {
                    let mean = 0.5 * (pair[j] + p);
                    acc.sum[j] += mean;
                    acc.sum_sq[j] += mean * mean;
                }
            } else {
                self.path(&draws, false, &mut payoffs, &mut acc.stats);
                for (j, p) in payoffs.iter().enumerate() {
                    acc.sum[j] += p;
                    acc.sum_sq[j] += p * p;
                }
            }
            acc.samples += 1;
        }
        acc
    }

    /// One path; writes discounted payoffs per strike.
    fn path(&self, draws: &[[f64; 4]], mirror: bool, payoffs: &mut [f64], stats: &mut [[f64; 3]]) {
        let flip = |u: f64| if mirror { 1.0 - u } else { u };
        let (l, dt) = (&self.chol, self.dt);
        let mut v = self.v0;
        let mut xd = 0.0;
        let mut xf = 0.0;
        let mut log_s = self.log_spot;
        let mut int_rd = 0.0;
        if !stats.is_empty() {
            stats[0][0] += v;
            stats[0][1] += self.dom.phi[0];
            stats[0][2] += self.fgn.phi[0];
        }
        for (i, d) in draws.iter().enumerate() {
            let (v_next, sqrt_int, heston_drift) = if self.gamma > 0.0 {
                let (vn, branch) = self.qe_step(v, flip(d[0]));
                let k0 = self.k0_star(v, branch);
                let drift = k0 + self.k1 * v + self.k2 * vn;
                (vn, (0.5 * (v + vn) * dt).sqrt(), drift)
            } else {
                // deterministic variance: exact integral, W_v still drives S
                let vn = self.theta + (v - self.theta) * self.ekdt;
                let int_v = self.theta * dt + (v - self.theta) * (1.0 - self.ekdt) / self.kappa;
                let zv = inv_cdf(flip(d[0]));
                (vn, int_v.sqrt(), -0.5 * int_v + self.rho_sv * int_v.sqrt() * zv)
            };
            assert!(v_next >= 0.0, "QE produced a negative variance");
            let z = [inv_cdf(flip(d[1])), inv_cdf(flip(d[2])), inv_cdf(flip(d[3]))];
            let a = l[0][0] * z[0];
            let zd = l[1][0] * z[0] + l[1][1] * z[1];
            let zf = l[2][0] * z[0] + l[2][1] * z[1] + l[2][2] * z[2];

            let sqrt_v_avg = 0.5 * (v.sqrt() + v_next.sqrt());
            let xd_next = xd * self.dom.decay + self.dom.vol * zd;
            let xf_next =
                xf * self.fgn.decay - self.rho_sf_eta_f * sqrt_v_avg * self.fgn.drift_factor + self.fgn.vol * zf;
            let step_rd = 0.5 * (xd + xd_next) * dt + self.dom.phi_integral[i];
            let step_rf = 0.5 * (xf + xf_next) * dt + self.fgn.phi_integral[i];

            log_s += step_rd - step_rf + heston_drift + sqrt_int * a;
            int_rd += step_rd;
            v = v_next;
            xd = xd_next;
            xf = xf_next;
            if !stats.is_empty() {
                let row = &mut stats[i + 1];
                row[0] += v;
                row[1] += xd + self.dom.phi[i + 1];
                row[2] += xf + self.fgn.phi[i + 1];
            }
        }
        let spot = log_s.exp();
        let discount = (-int_rd).exp();
        for (p, &k) in payoffs.iter_mut().zip(&self.strikes) {
            let intrinsic = match self.kind {
                OptionKind::Put => k - spot,
                OptionKind::Call => spot - k,
            };
            *p = discount * intrinsic.max(0.0);
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum QeBranch {
    Quadratic { a: f64, b2: f64 },
    Exponential { p: f64, beta: f64 },
}

/// Splits `n` items into `batches` near-equal parts (first ones get the
/// remainder), in units of `unit` paths.
fn batch_sizes(n: usize, batches: usize, unit: usize) -> Vec<usize> {
    let units = n / unit;
    let batches = batches.min(units).max(1);
    (0..batches)
        .map(|b| (units / batches + usize::from(b < units % batches)) * unit)
        .collect()
}

/// Simulates the full model once and prices every strike on the same paths.
pub fn simulate_hhw_strikes(
    params: &ModelParams,
    maturity: f64,
    strikes: &[f64],
    kind: OptionKind,
    cfg: &McConfig,
) -> Result<McRun> {
    let start = Instant::now();
    let engine = Engine::new(params, maturity, strikes, kind, cfg)?;
    let unit = if cfg.antithetic { 2 } else { 1 };
    let sizes = batch_sizes(cfg.n_paths, cfg.n_batches, unit);
    let batches: Vec<BatchSums> = sizes
        .par_iter()
        .enumerate()
        .map(|(b, &n)| engine.run_batch(cfg.seed, b, n, cfg.antithetic, cfg.path_stats))
        .collect();

    let mut total = BatchSums::new(strikes.len(), if cfg.path_stats { engine.steps + 1 } else { 0 });
    for b in &batches {
        total.samples += b.samples;
        for j in 0..strikes.len() {
            total.sum[j] += b.sum[j];
            total.sum_sq[j] += b.sum_sq[j];
        }
        for (row, brow) in total.stats.iter_mut().zip(&b.stats) {
            for c in 0..3 {
                row[c] += brow[c];
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let n = total.samples as f64;
    let estimates = (0..strikes.len())
        .map(|j| {
            let mean = total.sum[j] / n;
            let var = if total.samples > 1 {
                ((total.sum_sq[j] - n * mean * mean) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            McEstimate {
                price: mean,
                std_error: (var / n).sqrt(),
                n_paths: cfg.n_paths,
                seed: cfg.seed,
                elapsed,
            }
        })
        .collect();
    let path_stats = cfg.path_stats.then(|| {
        let paths = cfg.n_paths as f64;
        let mut s = PathStats::default();
        for (i, row) in total.stats.iter().enumerate() {
            s.time.push(i as f64 * cfg.dt);
            s.mean_v.push(row[0] / paths);
            s.mean_rd.push(row[1] / paths);
            s.mean_rf.push(row[2] / paths);
        }
        s
    });
    Ok(McRun { estimates, path_stats })
}

/// The same simulation with deterministic rates.
pub fn simulate_heston_strikes(
    params: &ModelParams,
    maturity: f64,
    strikes: &[f64],
    kind: OptionKind,
    cfg: &McConfig,
) -> Result<McRun> {
    simulate_hhw_strikes(&params.with_deterministic_rates(), maturity, strikes, kind, cfg)
}

pub fn simulate_hhw(params: &ModelParams, opt: &OptionSpec, cfg: &McConfig) -> Result<McEstimate> {
    opt.validate()?;
    let run = simulate_hhw_strikes(params, opt.maturity, &[opt.strike], opt.kind, cfg)?;
    Ok(run.estimates[0])
}

pub fn simulate_heston(params: &ModelParams, opt: &OptionSpec, cfg: &McConfig) -> Result<McEstimate> {
    simulate_hhw(&params.with_deterministic_rates(), opt, cfg)
}
