//! Black-Scholes put in log-forward / total-variance coordinates.
//!
//! `BS(x, y) = Dd (K Phi(-d2) - e^x Phi(-d1))` with
//! `d1 = (x - log K + y/2) / sqrt(y)` and `d2 = d1 - sqrt(y)`. The kernel
//! satisfies the heat-type identity `dBS/dy = (d2BS/dx2 - dBS/dx) / 2`,
//! which is how pure `x` partials beyond first order are produced here.

use crate::error::{Error, Result};
use crate::normal;

/// Beyond this `|d2|` the Gaussian density underflows and every partial that
/// carries `phi(d2)` is returned as an exact zero.
pub const D2_CUTOFF: f64 = 37.0;

/// Bracket for the implied-volatility solver.
pub const IV_LOWER: f64 = 1e-6;
pub const IV_UPPER: f64 = 5.0;
const IV_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsPoint {
    /// Log forward.
    pub x: f64,
    /// Total variance.
    pub y: f64,
    pub strike: f64,
    /// Domestic discount factor.
    pub discount: f64,
}

/// `phi(d2)`-based partials of the put at one point, sharing one density
/// evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsPartials {
    pub dx: f64,
    pub dy: f64,
    pub dxdy: f64,
    pub dy2: f64,
    pub dx2dy: f64,
    pub dx2dy2: f64,
}

impl BsPoint {
    pub fn new(x: f64, y: f64, strike: f64, discount: f64) -> Self {
        Self { x, y, strike, discount }
    }

    pub fn d1(&self) -> f64 {
        (self.x - self.strike.ln() + 0.5 * self.y) / self.y.sqrt()
    }

    pub fn d2(&self) -> f64 {
        self.d1() - self.y.sqrt()
    }

    fn check(&self) -> Result<()> {
        if !(self.y > 0.0) {
            return Err(Error::DegenerateVariance(self.y));
        }
        if !(self.strike > 0.0) {
            return Err(Error::InvalidOption(format!("strike {} must be positive", self.strike)));
        }
        Ok(())
    }

    /// All partials the expansion needs.
    pub fn partials(&self) -> Result<BsPartials> {
        self.check()?;
        let sy = self.y.sqrt();
        let d1 = self.d1();
        let d2 = d1 - sy;
        let dx = -self.discount * self.x.exp() * normal::cdf(-d1);
        if d2.abs() > D2_CUTOFF {
            return Ok(BsPartials {
                dx,
                dy: 0.0,
                dxdy: 0.0,
                dy2: 0.0,
                dx2dy: 0.0,
                dx2dy2: 0.0,
            });
        }
        let n = self.discount * self.strike * normal::pdf(d2);
        let y = self.y;
        let y32 = y * sy;
        Ok(BsPartials {
            dx,
            dy: n / (2.0 * sy),
            dxdy: -n * d2 / (2.0 * y),
            dy2: n * (d1 * d2 - 1.0) / (4.0 * y32),
            dx2dy: n * (d2 * d2 - 1.0) / (2.0 * y32),
            dx2dy2: n * (d1 * d2.powi(3) - 3.0 * (d1 * d2 + d2 * d2 - 1.0)) / (4.0 * y32 * y),
        })
    }
}

pub fn bs_put(p: &BsPoint) -> Result<f64> {
    p.check()?;
    let sy = p.y.sqrt();
    let d1 = p.d1();
    let d2 = d1 - sy;
    let value = p.discount * (p.strike * normal::cdf(-d2) - p.x.exp() * normal::cdf(-d1));
    Ok(value.max(0.0))
}

/// Call by put-call parity on the forward.
pub fn bs_call(p: &BsPoint) -> Result<f64> {
    Ok(bs_put(p)? + p.discount * (p.x.exp() - p.strike))
}

/// Analytic partial `d^(i+j) BS / dx^i dy^j`.
///
/// Supported orders: `(0,0)`, `(1,0)`, `(2,0)`, `(3,0)`, `(4,0)`, `(0,1)`,
/// `(1,1)`, `(0,2)`, `(2,1)`, `(2,2)`.
pub fn bs_partial(p: &BsPoint, i: u32, j: u32) -> Result<f64> {
    let g = p.partials()?;
    // d_x^2 = 2 d_y + d_x, applied repeatedly
    let dx2 = 2.0 * g.dy + g.dx;
    let dx3 = 2.0 * g.dxdy + dx2;
    Ok(match (i, j) {
        (0, 0) => bs_put(p)?,
        (1, 0) => g.dx,
        (2, 0) => dx2,
        (3, 0) => dx3,
        (4, 0) => 2.0 * g.dx2dy + dx3,
        (0, 1) => g.dy,
        (1, 1) => g.dxdy,
        (0, 2) => g.dy2,
        (2, 1) => g.dx2dy,
        (2, 2) => g.dx2dy2,
        _ => return Err(Error::UnsupportedPartial(i, j)),
    })
}

/// Black-Scholes volatility reproducing a put price.
///
/// Newton steps in `sigma` safeguarded by a bisection bracket on
/// `[IV_LOWER, IV_UPPER]`.
pub fn implied_vol(price: f64, forward: f64, strike: f64, maturity: f64, discount: f64) -> Result<f64> {
    if !(maturity > 0.0) || !(strike > 0.0) || !(forward > 0.0) {
        return Err(Error::InvalidOption("implied vol needs positive F, K, T".into()));
    }
    let lower = (discount * (strike - forward)).max(0.0);
    let upper = discount * strike;
    if !(price > lower && price < upper) {
        return Err(Error::ArbitrageBounds { price, lower, upper });
    }
    let x = forward.ln();
    let put = |sigma: f64| {
        let p = BsPoint::new(x, sigma * sigma * maturity, strike, discount);
        bs_put(&p).map(|v| (v - price, p))
    };

    let (mut lo, mut hi) = (IV_LOWER, IV_UPPER);
    let (f_lo, _) = put(lo)?;
    let (f_hi, _) = put(hi)?;
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::ArbitrageBounds { price, lower, upper });
    }

    // start from the Brenner-Subrahmanyam ATM guess
    let mut sigma = (price / (discount * forward) * (2.0 * std::f64::consts::PI / maturity).sqrt()).clamp(0.05, 1.0);
    let tol = 1e-14 * price.max(1e-3);
    for _ in 0..IV_MAX_ITER {
        let (f, point) = put(sigma)?;
        if f.abs() <= tol {
            return Ok(sigma);
        }
        if f > 0.0 {
            hi = sigma;
        } else {
            lo = sigma;
        }
        if hi - lo <= 1e-15 * hi {
            return Ok(sigma);
        }
        // dP/dsigma = dP/dy * 2 sigma T
        let vega = point.partials()?.dy * 2.0 * sigma * maturity;
        let newton = sigma - f / vega;
        sigma = if vega > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence {
        iterations: IV_MAX_ITER,
    })
}
