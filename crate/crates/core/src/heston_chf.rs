//! Heston prices from the characteristic function of `log(F_T / F_0)`.
//!
//! The transform is the "little trap" form, written so that every ratio
//! stays finite as the vol-of-vol goes to zero. Prices come from Lewis'
//! single integral along `Im u = -1/2`:
//!
//! `C = Dd F - Dd sqrt(F K) / pi * int_0^inf Re[e^{iuk} phi(u - i/2)] / (u^2 + 1/4) du`,
//! `k = log(F / K)`, and the put by the same integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelParams, OptionKind, OptionSpec};
use crate::quad::{quad, Tolerance};

/// Integrand magnitude below which the tail is dropped.
pub const TRUNCATION_LEVEL: f64 = 1e-14;
const MAX_TRUNCATION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChfParams {
    pub k_v: f64,
    pub theta_v: f64,
    pub gamma: f64,
    pub rho_sv: f64,
    pub v0: f64,
    pub forward: f64,
    pub maturity: f64,
    pub discount: f64,
}

impl ChfParams {
    /// Heston part of `params` for the option's forward, maturity and discount.
    pub fn from_model(params: &ModelParams, opt: &OptionSpec) -> Self {
        let h = &params.heston;
        Self {
            k_v: h.k_v,
            theta_v: h.theta_v,
            gamma: h.gamma,
            rho_sv: params.corr.rho_sv,
            v0: h.v0,
            forward: opt.forward,
            maturity: opt.maturity,
            discount: opt.discount,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k_v", self.k_v),
            ("theta_v", self.theta_v),
            ("v0", self.v0),
            ("forward", self.forward),
            ("maturity", self.maturity),
            ("discount", self.discount),
        ];
        for (name, value) in positive {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositive { name, value });
            }
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::Negative {
                name: "gamma",
                value: self.gamma,
            });
        }
        if !(self.rho_sv.abs() < 1.0) {
            return Err(Error::CorrelationOutOfRange {
                name: "rho_sv",
                value: self.rho_sv,
            });
        }
        Ok(())
    }
}

/// `log(1 + z) / z`, exact at `z = 0`.
fn ln1p_ratio(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        Complex64::new(1.0, 0.0) - z / 2.0 + z * z / 3.0 - z * z * z / 4.0
    } else {
        (Complex64::new(1.0, 0.0) + z).ln() / z
    }
}

/// `E[exp(i u log(F_T / F_0))]` for complex `u`.
pub fn charfn(u: Complex64, p: &ChfParams) -> Complex64 {
    let i = Complex64::i();
    let (kappa, sigma, rho, t) = (p.k_v, p.gamma, p.rho_sv, p.maturity);
    let s2 = sigma * sigma;
    let a = i * u + u * u;
    let b = kappa - rho * sigma * i * u;
    let d = (b * b + s2 * a).sqrt();
    let bpd = b + d;
    // (b - d) / sigma^2 without the cancellation
    let beta = -a / bpd;
    let g = s2 * beta / bpd;
    let e = (-d * t).exp();
    let one = Complex64::new(1.0, 0.0);
    let dcoef = beta * (one - e) / (one - g * e);
    // (2 / sigma^2) log((1 - g e) / (1 - g)) = 2 beta (1 - e) / ((b + d)(1 - g)) * ln1p(z) / z
    let z = g * (one - e) / (one - g);
    let log_term = 2.0 * beta * (one - e) / (bpd * (one - g)) * ln1p_ratio(z);
    let ccoef = kappa * p.theta_v * (beta * t - log_term);
    (ccoef + dcoef * p.v0).exp()
}

fn lewis_integrand(p: &ChfParams, strike: f64) -> impl Fn(f64) -> f64 + '_ {
    let k = (p.forward / strike).ln();
    move |u: f64| {
        let phi = charfn(Complex64::new(u, -0.5), p);
        let rotated = phi * Complex64::new(0.0, u * k).exp();
        rotated.re / (u * u + 0.25)
    }
}

/// Upper limit beyond which the Lewis integrand stays below
/// [`TRUNCATION_LEVEL`].
pub fn truncation_bound(p: &ChfParams) -> f64 {
    // the envelope |phi(u - i/2)| / (u^2 + 1/4) is monotone far out, so it
    // suffices to look at a few points per doubling window
    let envelope = |u: f64| charfn(Complex64::new(u, -0.5), p).norm() / (u * u + 0.25);
    let mut upper = 8.0;
    while upper < MAX_TRUNCATION {
        let tail = (0..=8)
            .map(|j| envelope(upper * (1.0 + j as f64 / 8.0)))
            .fold(0.0, f64::max);
        if tail < TRUNCATION_LEVEL {
            break;
        }
        upper *= 2.0;
    }
    upper
}

/// `int_0^upper Re[e^{iuk} phi(u - i/2)] / (u^2 + 1/4) du`.
fn lewis_integral(p: &ChfParams, strike: f64, upper: f64) -> Result<f64> {
    let f = lewis_integrand(p, strike);
    let tol = Tolerance::new(1e-13, 1e-15);
    // unit panels keep the oscillation per adaptive call mild
    let panels = upper.ceil() as usize;
    let width = upper / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let a = j as f64 * width;
        total += quad(&f, a, a + width, tol)?.value;
    }
    Ok(total)
}

fn price_with_bound(p: &ChfParams, kind: OptionKind, strike: f64, upper: f64) -> Result<f64> {
    p.validate()?;
    if !(strike > 0.0) {
        return Err(Error::InvalidOption(format!("strike {strike} must be positive")));
    }
    let integral = lewis_integral(p, strike, upper)?;
    let scaled = p.discount * (p.forward * strike).sqrt() / PI * integral;
    Ok(match kind {
        OptionKind::Put => p.discount * strike - scaled,
        OptionKind::Call => p.discount * p.forward - scaled,
    })
}

pub fn price_put_chf(p: &ChfParams, strike: f64) -> Result<f64> {
    price_with_bound(p, OptionKind::Put, strike, truncation_bound(p))
}

pub fn price_call_chf(p: &ChfParams, strike: f64) -> Result<f64> {
    price_with_bound(p, OptionKind::Call, strike, truncation_bound(p))
}

/// Price with an explicit truncation of the Fourier integral.
pub fn price_chf_truncated(p: &ChfParams, kind: OptionKind, strike: f64, upper: f64) -> Result<f64> {
    price_with_bound(p, kind, strike, upper)
}

/// Heston price of `opt` using the Heston block of `params`.
pub fn price_chf(params: &ModelParams, opt: &OptionSpec) -> Result<f64> {
    opt.validate()?;
    let p = ChfParams::from_model(params, opt);
    let upper = truncation_bound(&p);
    price_with_bound(&p, opt.kind, opt.strike, upper)
}
