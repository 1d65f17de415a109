//! Model parameters shared by every pricer: the Heston FX variance, the two
//! Hull-White short rates, the 4x4 correlation over (S, v, d, f), and the
//! initial zero curves.
//!
//! Parameter files use the JSON layout
//!
//! ```json
//! {
//!   "heston": {"v0": 0.05, "theta_v": 0.05, "k_v": 3.0, "gamma": 0.3},
//!   "hw_dom": {"k": 0.01, "eta": 0.007, "curve": [[1.0, 0.0]]},
//!   "hw_for": {"k": 0.05, "eta": 0.012, "curve": [[1.0, 0.0]]},
//!   "corr": {"sv": -0.4, "sd": -0.15, "sf": -0.15, "vd": 0.0, "vf": 0.0, "df": 0.25},
//!   "spot": 100.0
//! }
//! ```
//!
//! Times are in years, rates continuously compounded.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivot tolerance of the correlation Cholesky factorisation.
pub const CHOLESKY_TOL: f64 = 1e-12;

/// Relative tolerance on `v0 = theta_v` required by the expansion pricers.
pub const VARIANCE_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HestonParams {
    /// Initial variance.
    pub v0: f64,
    /// Long-run variance.
    pub theta_v: f64,
    /// Mean-reversion speed of the variance.
    pub k_v: f64,
    /// Vol-of-vol.
    pub gamma: f64,
}

impl HestonParams {
    pub fn validate(&self) -> Result<()> {
        positive("v0", self.v0)?;
        positive("theta_v", self.theta_v)?;
        positive("k_v", self.k_v)?;
        non_negative("gamma", self.gamma)
    }

    /// `2 k_v theta_v >= gamma^2`. Reported only; nothing here requires it.
    pub fn feller_satisfied(&self) -> bool {
        2.0 * self.k_v * self.theta_v >= self.gamma * self.gamma
    }
}

/// Initial zero curve: continuously-compounded zero rates at tenor nodes.
///
/// Between nodes `r(t) t` is interpolated linearly (flat instantaneous
/// forwards); outside the node range the nearest zero rate is held flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ZeroCurve {
    tenors: Vec<f64>,
    rates: Vec<f64>,
}

impl ZeroCurve {
    pub fn new(nodes: &[(f64, f64)]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidCurve("curve has no nodes".into()));
        }
        let mut tenors = Vec::with_capacity(nodes.len());
        let mut rates = Vec::with_capacity(nodes.len());
        for &(t, r) in nodes {
            if !t.is_finite() || !r.is_finite() {
                return Err(Error::InvalidCurve(format!("non-finite node ({t}, {r})")));
            }
            if t <= 0.0 {
                return Err(Error::InvalidCurve(format!("tenor {t} must be positive")));
            }
            if let Some(&last) = tenors.last() {
                if t <= last {
                    return Err(Error::InvalidCurve("tenors must be strictly increasing".into()));
                }
            }
            tenors.push(t);
            rates.push(r);
        }
        Ok(Self { tenors, rates })
    }

    pub fn flat(rate: f64) -> Self {
        Self {
            tenors: vec![1.0],
            rates: vec![rate],
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.tenors.iter().copied().zip(self.rates.iter().copied())
    }

    /// Continuously-compounded zero rate to `t`.
    pub fn zero_rate(&self, t: f64) -> f64 {
        let n = self.tenors.len();
        if t <= self.tenors[0] {
            return self.rates[0];
        }
        if t >= self.tenors[n - 1] {
            return self.rates[n - 1];
        }
        let i = self.tenors.partition_point(|&s| s <= t);
        let (t0, t1) = (self.tenors[i - 1], self.tenors[i]);
        let (y0, y1) = (self.rates[i - 1] * t0, self.rates[i] * t1);
        (y0 + (y1 - y0) * (t - t0) / (t1 - t0)) / t
    }

    /// `P(0, t)`.
    pub fn discount(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        (-self.zero_rate(t) * t).exp()
    }
}

impl TryFrom<Vec<[f64; 2]>> for ZeroCurve {
    type Error = Error;

    fn try_from(nodes: Vec<[f64; 2]>) -> Result<Self> {
        let nodes: Vec<(f64, f64)> = nodes.into_iter().map(|[t, r]| (t, r)).collect();
        ZeroCurve::new(&nodes)
    }
}

impl From<ZeroCurve> for Vec<[f64; 2]> {
    fn from(curve: ZeroCurve) -> Self {
        curve.nodes().map(|(t, r)| [t, r]).collect()
    }
}

/// Hull-White short-rate parameters of one currency. The drift is fitted to
/// `zero_curve`, so only the speed and volatility are free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullWhiteParams {
    pub k: f64,
    pub eta: f64,
    #[serde(rename = "curve")]
    pub zero_curve: ZeroCurve,
}

impl HullWhiteParams {
    pub fn new(k: f64, eta: f64, zero_curve: ZeroCurve) -> Self {
        Self { k, eta, zero_curve }
    }

    pub fn validate(&self, prefix: &'static str) -> Result<()> {
        positive(prefix, self.k)?;
        non_negative("eta", self.eta)
    }

    /// Bond-volatility factor `B(t, T) = (exp(-k (T - t)) - 1) / k`.
    pub fn bond_factor(&self, t: f64, maturity: f64) -> f64 {
        (-self.k * (maturity - t)).exp_m1() / self.k
    }
}

/// Correlations over the factor ordering (S, v, d, f).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrMatrix {
    #[serde(rename = "sv")]
    pub rho_sv: f64,
    #[serde(rename = "sd")]
    pub rho_sd: f64,
    #[serde(rename = "sf")]
    pub rho_sf: f64,
    #[serde(rename = "vd")]
    pub rho_vd: f64,
    #[serde(rename = "vf")]
    pub rho_vf: f64,
    #[serde(rename = "df")]
    pub rho_df: f64,
}

impl CorrMatrix {
    pub const S: usize = 0;
    pub const V: usize = 1;
    pub const D: usize = 2;
    pub const F: usize = 3;

    pub fn identity() -> Self {
        Self {
            rho_sv: 0.0,
            rho_sd: 0.0,
            rho_sf: 0.0,
            rho_vd: 0.0,
            rho_vf: 0.0,
            rho_df: 0.0,
        }
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let Self {
            rho_sv: sv,
            rho_sd: sd,
            rho_sf: sf,
            rho_vd: vd,
            rho_vf: vf,
            rho_df: df,
        } = *self;
        [
            [1.0, sv, sd, sf],
            [sv, 1.0, vd, vf],
            [sd, vd, 1.0, df],
            [sf, vf, df, 1.0],
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rho_sv", self.rho_sv),
            ("rho_sd", self.rho_sd),
            ("rho_sf", self.rho_sf),
            ("rho_vd", self.rho_vd),
            ("rho_vf", self.rho_vf),
            ("rho_df", self.rho_df),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::CorrelationOutOfRange { name, value });
            }
        }
        self.cholesky().map(|_| ())
    }

    /// Lower-triangular factor `L` with `L L^T = C`.
    pub fn cholesky(&self) -> Result<[[f64; 4]; 4]> {
        cholesky(&self.to_matrix())
    }
}

/// Cholesky factorisation of a symmetric positive-semidefinite matrix.
///
/// Pivots within [`CHOLESKY_TOL`] of zero are treated as exact zeros and
/// their column is left empty; a pivot below `-CHOLESKY_TOL` is rejected.
pub fn cholesky<const N: usize>(a: &[[f64; N]; N]) -> Result<[[f64; N]; N]> {
    let mut l = [[0.0; N]; N];
    for j in 0..N {
        let pivot = a[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if pivot < -CHOLESKY_TOL {
            return Err(Error::CorrelationNotPsd { row: j, pivot });
        }
        if pivot <= CHOLESKY_TOL {
            for i in j + 1..N {
                let off = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
                if off.abs() > 1e-9 {
                    return Err(Error::CorrelationNotPsd { row: j, pivot });
                }
            }
            continue;
        }
        let d = pivot.sqrt();
        l[j][j] = d;
        for i in j + 1..N {
            let off = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = off / d;
        }
    }
    Ok(l)
}

/// Complete Heston-Hull-White parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub heston: HestonParams,
    pub hw_dom: HullWhiteParams,
    pub hw_for: HullWhiteParams,
    pub corr: CorrMatrix,
    pub spot: f64,
}

/// Outcome of a successful validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validation {
    pub feller_satisfied: bool,
}

impl ModelParams {
    /// The FX setting used throughout the numerical study: flat 0% curves,
    /// `F0 = S0 = 100`.
    pub fn base() -> Self {
        Self {
            heston: HestonParams {
                v0: 0.05,
                theta_v: 0.05,
                k_v: 3.0,
                gamma: 0.3,
            },
            hw_dom: HullWhiteParams::new(0.01, 0.007, ZeroCurve::flat(0.0)),
            hw_for: HullWhiteParams::new(0.05, 0.012, ZeroCurve::flat(0.0)),
            corr: CorrMatrix {
                rho_sv: -0.4,
                rho_sd: -0.15,
                rho_sf: -0.15,
                rho_vd: 0.0,
                rho_vf: 0.0,
                rho_df: 0.25,
            },
            spot: 100.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let params: Self = serde_json::from_str(text)?;
        Ok(params)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model parameters serialise")
    }

    /// Same parameters with the short-rate volatilities switched off.
    pub fn with_deterministic_rates(&self) -> Self {
        let mut p = self.clone();
        p.hw_dom.eta = 0.0;
        p.hw_for.eta = 0.0;
        p
    }

    pub fn forward(&self, maturity: f64) -> f64 {
        forward(self.spot, &self.hw_dom.zero_curve, &self.hw_for.zero_curve, maturity)
    }
}

/// Checks every type invariant. Feller is reported, not enforced.
pub fn validate(params: &ModelParams) -> Result<Validation> {
    params.heston.validate()?;
    params.hw_dom.validate("k_d")?;
    params.hw_for.validate("k_f")?;
    params.corr.validate()?;
    positive("spot", params.spot)?;
    Ok(Validation {
        feller_satisfied: params.heston.feller_satisfied(),
    })
}

/// [`validate`] plus the `v0 = theta_v` restriction of the expansion pricers.
pub fn validate_for_expansion(params: &ModelParams) -> Result<Validation> {
    let report = validate(params)?;
    let HestonParams { v0, theta_v, .. } = params.heston;
    if (v0 - theta_v).abs() > VARIANCE_MATCH_TOL * v0.abs().max(theta_v.abs()) {
        return Err(Error::VarianceMismatch { v0, theta_v });
    }
    Ok(report)
}

/// FX forward `S0 P_f(0, T) / P_d(0, T)`.
pub fn forward(spot: f64, domestic: &ZeroCurve, foreign: &ZeroCurve, maturity: f64) -> f64 {
    spot * foreign.discount(maturity) / domestic.discount(maturity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Put,
    Call,
}

/// European option on one unit of foreign currency, paid in domestic currency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub kind: OptionKind,
    pub strike: f64,
    pub maturity: f64,
    /// Initial forward to `maturity`.
    pub forward: f64,
    pub spot: f64,
    /// Domestic discount factor to `maturity`.
    pub discount: f64,
}

impl OptionSpec {
    /// Option with the forward implied by the model's curves.
    pub fn new(kind: OptionKind, strike: f64, maturity: f64, params: &ModelParams) -> Result<Self> {
        let spec = Self {
            kind,
            strike,
            maturity,
            forward: params.forward(maturity),
            spot: params.spot,
            discount: params.hw_dom.zero_curve.discount(maturity),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn put(strike: f64, maturity: f64, params: &ModelParams) -> Result<Self> {
        Self::new(OptionKind::Put, strike, maturity, params)
    }

    /// Replaces the curve-implied forward.
    pub fn with_forward(mut self, forward: f64) -> Self {
        self.forward = forward;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0) {
            return Err(Error::InvalidOption(format!("strike {} must be positive", self.strike)));
        }
        if !(self.maturity > 0.0) {
            return Err(Error::InvalidOption(format!(
                "maturity {} must be positive",
                self.maturity
            )));
        }
        if !(self.forward > 0.0) || !(self.discount > 0.0) {
            return Err(Error::InvalidOption("forward and discount must be positive".into()));
        }
        Ok(())
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    if value <= 0.0 {
        return Err(Error::NonPositive { name, value });
    }
    Ok(())
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    if value < 0.0 {
        return Err(Error::Negative { name, value });
    }
    Ok(())
}
