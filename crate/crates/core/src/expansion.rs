//! Second-order vol-of-vol expansion of the FX put under Heston and
//! Heston-Hull-White, and the hybrid that uses the exact Heston price as a
//! control variate.
//!
//! With `x0 = log F0`, `rho = rho_sv`, `c = 1 + alpha`:
//!
//! ```text
//! P_HHW = BS(x0, y0)
//!       + rho v0 gamma                 I1(c)               d_x d_y BS
//!       + rho^2 v0 gamma^2            (I2(c) - I4(alpha)/2) d_x^2 d_y BS
//!       + v0 gamma^2                   I3(c, c)            d_y^2 BS
//!       + rho^2 v0^2 gamma^2 / 2       I1(c)^2             d_x^2 d_y^2 BS
//!       - gamma^2 / 4                  I1_2k(alpha)        d_y BS
//! ```
//!
//! The pure Heston formula is the same with `alpha = 0` and `y0 = v0 T`.

use serde::{Deserialize, Serialize};

use crate::black_scholes::{bs_put, implied_vol, BsPoint};
use crate::error::{Error, Result};
use crate::heston_chf::price_chf;
use crate::integrals::{alpha_coeffs, i1, i1_2k, i2, i3, i4, y0_hhw, ExpCoeffs};
use crate::model::{validate_for_expansion, ModelParams, OptionKind, OptionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Expansion with deterministic rates.
    #[serde(alias = "hestonexp", alias = "heston-exp")]
    HestonExp,
    /// Expansion with Hull-White rates.
    #[serde(alias = "exp")]
    Exp,
    /// Heston characteristic function plus the rate increment of the expansion.
    #[serde(alias = "expchf", alias = "exp-chf")]
    ExpChF,
    /// Heston characteristic function alone.
    #[serde(alias = "chf")]
    ChF,
    /// QE Monte Carlo of the full model.
    #[serde(rename = "MC", alias = "mc")]
    Mc,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::HestonExp => "HestonExp",
            Method::Exp => "Exp",
            Method::ExpChF => "ExpChF",
            Method::ChF => "ChF",
            Method::Mc => "MC",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hestonexp" | "heston-exp" => Ok(Method::HestonExp),
            "exp" => Ok(Method::Exp),
            "expchf" | "exp-chf" => Ok(Method::ExpChF),
            "chf" => Ok(Method::ChF),
            "mc" => Ok(Method::Mc),
            other => Err(Error::InvalidExperiment(format!("unknown method '{other}'"))),
        }
    }
}

/// Put price split by expansion term.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpansionBreakdown {
    pub bs: f64,
    pub dxdy: f64,
    pub dx2dy: f64,
    pub dy2: f64,
    pub dx2dy2: f64,
    /// The `-gamma^2/4 I1_2k(alpha) d_y BS` rate term.
    pub dy: f64,
    pub total: f64,
}

impl ExpansionBreakdown {
    fn summed(mut self) -> Self {
        self.total = self.bs + self.dxdy + self.dx2dy + self.dy2 + self.dx2dy2 + self.dy;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceResult {
    pub price: f64,
    /// Black volatility of the price, `None` when outside the no-arbitrage band.
    pub implied_vol: Option<f64>,
    pub method: Method,
    pub breakdown: Option<ExpansionBreakdown>,
}

/// Inputs of the expansion at one option: base point and integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionInputs {
    pub x0: f64,
    pub y0: f64,
    pub i1: f64,
    /// `I2(c) - I4(alpha) / 2`.
    pub i2_net: f64,
    pub i3: f64,
    pub i1_2k: f64,
}

impl ExpansionInputs {
    /// Deterministic rates: `alpha = 0`, `y0 = v0 T`.
    pub fn heston(params: &ModelParams, opt: &OptionSpec) -> Self {
        let h = &params.heston;
        let t = opt.maturity;
        let one = ExpCoeffs::constant(1.0, params.hw_dom.k, params.hw_for.k, h.k_v, t);
        Self {
            x0: opt.forward.ln(),
            y0: h.v0 * t,
            i1: i1(&one),
            i2_net: i2(&one),
            i3: i3(&one, &one),
            i1_2k: 0.0,
        }
    }

    pub fn hhw(params: &ModelParams, opt: &OptionSpec) -> Self {
        let t = opt.maturity;
        let adj = alpha_coeffs(params, t);
        let c = adj.one_plus_alpha();
        Self {
            x0: opt.forward.ln(),
            y0: y0_hhw(params, t),
            i1: i1(&c),
            i2_net: i2(&c) - 0.5 * i4(&adj.alpha),
            i3: i3(&c, &c),
            i1_2k: i1_2k(&adj.alpha),
        }
    }

    /// Evaluates the put expansion for the Heston block of `params`.
    pub fn evaluate(&self, params: &ModelParams, opt: &OptionSpec) -> Result<ExpansionBreakdown> {
        let v0 = params.heston.v0;
        let g = params.heston.gamma;
        let rho = params.corr.rho_sv;
        let point = BsPoint::new(self.x0, self.y0, opt.strike, opt.discount);
        let bs = bs_put(&point)?;
        let d = point.partials()?;
        Ok(ExpansionBreakdown {
            bs,
            dxdy: rho * v0 * g * self.i1 * d.dxdy,
            dx2dy: rho * rho * v0 * g * g * self.i2_net * d.dx2dy,
            dy2: v0 * g * g * self.i3 * d.dy2,
            dx2dy2: 0.5 * rho * rho * v0 * v0 * g * g * self.i1 * self.i1 * d.dx2dy2,
            dy: -0.25 * g * g * self.i1_2k * d.dy,
            total: 0.0,
        }
        .summed())
    }
}

fn check_rate_correlation(params: &ModelParams) -> Result<()> {
    let (rho_vd, rho_vf) = (params.corr.rho_vd, params.corr.rho_vf);
    if rho_vd != 0.0 || rho_vf != 0.0 {
        return Err(Error::UnsupportedCorrelation { rho_vd, rho_vf });
    }
    Ok(())
}

/// Converts a put price to the option's kind.
fn from_put(put: f64, opt: &OptionSpec) -> f64 {
    match opt.kind {
        OptionKind::Put => put,
        OptionKind::Call => put + opt.discount * (opt.forward - opt.strike),
    }
}

/// Black volatility of a price of `opt`, `None` outside the arbitrage band.
pub fn implied_vol_of(price: f64, opt: &OptionSpec) -> Option<f64> {
    let put = match opt.kind {
        OptionKind::Put => price,
        OptionKind::Call => price - opt.discount * (opt.forward - opt.strike),
    };
    implied_vol(put, opt.forward, opt.strike, opt.maturity, opt.discount).ok()
}

fn result(put: f64, opt: &OptionSpec, method: Method, breakdown: Option<ExpansionBreakdown>) -> PriceResult {
    let price = from_put(put, opt);
    PriceResult {
        price,
        implied_vol: implied_vol_of(price, opt),
        method,
        breakdown,
    }
}

/// Put breakdown of the deterministic-rate expansion.
pub fn heston_breakdown(params: &ModelParams, opt: &OptionSpec) -> Result<ExpansionBreakdown> {
    validate_for_expansion(params)?;
    opt.validate()?;
    ExpansionInputs::heston(params, opt).evaluate(params, opt)
}

/// Put breakdown of the Hull-White-rate expansion.
pub fn hhw_breakdown(params: &ModelParams, opt: &OptionSpec) -> Result<ExpansionBreakdown> {
    validate_for_expansion(params)?;
    check_rate_correlation(params)?;
    opt.validate()?;
    ExpansionInputs::hhw(params, opt).evaluate(params, opt)
}

pub fn price_heston_exp(params: &ModelParams, opt: &OptionSpec) -> Result<PriceResult> {
    let b = heston_breakdown(params, opt)?;
    Ok(result(b.total, opt, Method::HestonExp, Some(b)))
}

pub fn price_hhw_exp(params: &ModelParams, opt: &OptionSpec) -> Result<PriceResult> {
    let b = hhw_breakdown(params, opt)?;
    Ok(result(b.total, opt, Method::Exp, Some(b)))
}

/// `P_HHW - P_H`, the part of the expansion due to stochastic rates.
pub fn delta_stochastic_rates(params: &ModelParams, opt: &OptionSpec) -> Result<f64> {
    let hhw = hhw_breakdown(params, opt)?;
    let heston = heston_breakdown(params, opt)?;
    Ok(hhw.total - heston.total)
}

/// Characteristic-function Heston price as a [`PriceResult`].
pub fn price_heston_chf(params: &ModelParams, opt: &OptionSpec) -> Result<PriceResult> {
    crate::model::validate(params)?;
    let price = price_chf(params, opt)?;
    Ok(PriceResult {
        price,
        implied_vol: implied_vol_of(price, opt),
        method: Method::ChF,
        breakdown: None,
    })
}

/// `P_ChF + P_HHW - P_H`. The breakdown is the Hull-White one.
pub fn price_hybrid_expchf(params: &ModelParams, opt: &OptionSpec) -> Result<PriceResult> {
    let hhw = hhw_breakdown(params, opt)?;
    let heston = heston_breakdown(params, opt)?;
    let put_opt = OptionSpec {
        kind: OptionKind::Put,
        ..*opt
    };
    let chf = price_chf(params, &put_opt)?;
    let put = chf + (hhw.total - heston.total);
    Ok(result(put, opt, Method::ExpChF, Some(hhw)))
}
