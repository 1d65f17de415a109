//! Closed forms of the nested exponential integrals that carry the
//! stochastic-rate adjustment into the expansion, and of the forward-rate
//! variance integral `y0`.
//!
//! All integrands are built from `c(t) = c0 + cd e^{kd t} + cf e^{kf t}`:
//!
//! | name     | integral                                                                 |
//! |----------|--------------------------------------------------------------------------|
//! | `i1`     | `int_0^T dt e^{kv t} int_t^T du e^{-kv u} c(u)`                           |
//! | `i1_2k`  | `i1` with `kv -> 2 kv`                                                    |
//! | `i2`     | `int_0^T dt e^{kv t} int_t^T du int_u^T ds e^{-kv s} c(s)`                |
//! | `i3`     | `int_0^T dt e^{2kv t} int_t^T du e^{-kv u} c1(u) int_u^T ds e^{-kv s} c2(s)` |
//! | `i4`     | `int_0^T dt e^{kv t} int_t^T du e^{kv u} int_u^T ds e^{-2kv s} c(s)`      |
//!
//! The coefficient-by-coefficient closed forms are written with the `phi`
//! functions of [`crate::expfn`], which folds every `(k - kv)`, `(k - 2kv)`
//! denominator into a removable singularity: the same expression is exact at
//! `kd = kv`, `kf = 2 kv` and anywhere near them. The [`simplex`] submodule
//! evaluates the same integrals as divided differences of `exp`, an
//! independent algebraic route used for `i3` with two different coefficient
//! functions.

use crate::expfn::{exp_divdiff, phi1, phi2, phi3};
use crate::model::ModelParams;

/// `c(t) = c0 + cd e^{kd t} + cf e^{kf t}` on `[0, T]` with the speeds of the
/// variance and the two short rates, plus cached `e^{kT}` factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpCoeffs {
    pub c0: f64,
    pub cd: f64,
    pub cf: f64,
    pub k_d: f64,
    pub k_f: f64,
    pub k_v: f64,
    pub maturity: f64,
    pub x_d: f64,
    pub x_f: f64,
    pub x_v: f64,
}

impl ExpCoeffs {
    pub fn new(c0: f64, cd: f64, cf: f64, k_d: f64, k_f: f64, k_v: f64, maturity: f64) -> Self {
        Self {
            c0,
            cd,
            cf,
            k_d,
            k_f,
            k_v,
            maturity,
            x_d: (k_d * maturity).exp(),
            x_f: (k_f * maturity).exp(),
            x_v: (k_v * maturity).exp(),
        }
    }

    /// `c(t) = value` for all `t`.
    pub fn constant(value: f64, k_d: f64, k_f: f64, k_v: f64, maturity: f64) -> Self {
        Self::new(value, 0.0, 0.0, k_d, k_f, k_v, maturity)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.c0 + self.cd * (self.k_d * t).exp() + self.cf * (self.k_f * t).exp()
    }

    /// `c(t) + shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            c0: self.c0 + shift,
            ..*self
        }
    }

    pub fn same_function(&self, other: &Self) -> bool {
        self.c0 == other.c0
            && self.cd == other.cd
            && self.cf == other.cf
            && self.k_d == other.k_d
            && self.k_f == other.k_f
            && self.k_v == other.k_v
            && self.maturity == other.maturity
    }

    /// `(coefficient, rate)` pairs of the exponential sum.
    pub fn terms(&self) -> [(f64, f64); 3] {
        [(self.c0, 0.0), (self.cd, self.k_d), (self.cf, self.k_f)]
    }

    fn rate_terms(&self) -> [(f64, f64); 2] {
        [(self.cd, self.k_d), (self.cf, self.k_f)]
    }
}

/// The rate adjustment `alpha(t)` with `alpha(T) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateAdjustment {
    pub alpha: ExpCoeffs,
}

impl RateAdjustment {
    /// `1 + alpha(t)`.
    pub fn one_plus_alpha(&self) -> ExpCoeffs {
        self.alpha.shifted(1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.c0 == 0.0 && self.alpha.cd == 0.0 && self.alpha.cf == 0.0
    }
}

/// Exponential-sum coefficients of
/// `alpha(t) = (rho_sd eta_d (1 - e^{-kd (T-t)}) / kd - rho_sf eta_f (1 - e^{-kf (T-t)}) / kf) / sqrt(v0)`.
pub fn alpha_coeffs(params: &ModelParams, maturity: f64) -> RateAdjustment {
    let sqrt_v0 = params.heston.v0.sqrt();
    let (k_d, k_f) = (params.hw_dom.k, params.hw_for.k);
    let a_d = params.corr.rho_sd * params.hw_dom.eta / k_d;
    let a_f = params.corr.rho_sf * params.hw_for.eta / k_f;
    let c0 = (a_d - a_f) / sqrt_v0;
    // -a / (sqrt(v0) x) written with e^{-kT} to stay finite for long maturities
    let cd = -a_d * (-k_d * maturity).exp() / sqrt_v0;
    let cf = a_f * (-k_f * maturity).exp() / sqrt_v0;
    RateAdjustment {
        alpha: ExpCoeffs::new(c0 + 0.0, cd + 0.0, cf + 0.0, k_d, k_f, params.heston.k_v, maturity),
    }
}

fn i1_with_speed(c: &ExpCoeffs, kv: f64) -> f64 {
    let t = c.maturity;
    let mut value = c.c0 * t * t * phi2(-kv * t);
    for (ck, k) in c.rate_terms() {
        if ck != 0.0 {
            value += ck * t * (phi1(k * t) - phi1((k - kv) * t)) / kv;
        }
    }
    value
}

pub fn i1(c: &ExpCoeffs) -> f64 {
    i1_with_speed(c, c.k_v)
}

pub fn i1_2k(c: &ExpCoeffs) -> f64 {
    i1_with_speed(c, 2.0 * c.k_v)
}

pub fn i2(c: &ExpCoeffs) -> f64 {
    let (t, kv) = (c.maturity, c.k_v);
    let z = kv * t;
    let mut value = -c.c0 * t.powi(3) * (2.0 * phi3(-z) - phi2(-z));
    for (ck, k) in c.rate_terms() {
        if ck != 0.0 {
            let zd = (k - kv) * t;
            // (1 - (1 - z) e^z) / z^2 = e^z phi2(-z)
            let g = zd.exp() * phi2(-zd);
            value += ck * (t * (phi1(k * t) - phi1(zd)) / (kv * kv) - t * t * g / kv);
        }
    }
    value
}

/// Coefficient of `c0` (and `c0^2`) shared by `i3` and `i4`.
fn double_speed_constant(t: f64, kv: f64) -> f64 {
    let z = kv * t;
    -t.powi(3) * (phi3(-z) - 2.0 * phi3(-2.0 * z))
}

pub fn i4(c: &ExpCoeffs) -> f64 {
    let (t, kv) = (c.maturity, c.k_v);
    let mut value = c.c0 * double_speed_constant(t, kv);
    for (ck, k) in c.rate_terms() {
        if ck != 0.0 {
            value += ck * t * (phi1(k * t) - 2.0 * phi1((k - kv) * t) + phi1((k - 2.0 * kv) * t)) / (2.0 * kv * kv);
        }
    }
    value
}

/// `i3(c, c)` grouped by coefficient products `c0^2`, `ck^2`, `c0 ck`, `cd cf`.
fn i3_symmetric(c: &ExpCoeffs) -> f64 {
    let (t, kv) = (c.maturity, c.k_v);
    let mut value = c.c0 * c.c0 * double_speed_constant(t, kv);
    for (ck, k) in c.rate_terms() {
        if ck == 0.0 {
            continue;
        }
        let zd = (k - kv) * t;
        let kp = k + kv;
        // (phi1(2z) - phi1(z)) / z
        let h = 2.0 * phi2(2.0 * zd) - phi2(zd);
        let square = t * (phi1(2.0 * k * t) - phi1(2.0 * zd) - 2.0 * kv * t * h) / (2.0 * kv * kp);
        let cross = (k + 2.0 * kv) * t * phi1(k * t) / (2.0 * kv * kv * kp) + t * phi1(zd) / (2.0 * kv * kv * c.x_v)
            - t * phi1(-kv * t) / (2.0 * kv * kp)
            - t * phi1(zd) / (kv * kv);
        value += ck * ck * square + c.c0 * ck * cross;
    }
    if c.cd != 0.0 && c.cf != 0.0 {
        let (kd, kf) = (c.k_d, c.k_f);
        let zd = (kd - kv) * t;
        let zf = (kf - kv) * t;
        let mixed = -t * phi1(zd) / (2.0 * kv * (kf + kv))
            - t * phi1(zf) * (2.0 * kv * t * phi1(zd) + zd.exp()) / (2.0 * kv * (kd + kv))
            + (1.0 / (kd + kv) + 1.0 / (kf + kv)) * t * phi1((kd + kf) * t) / (2.0 * kv);
        value += c.cd * c.cf * mixed;
    }
    value
}

/// `int_0^T dt e^{2kv t} int_t^T du e^{-kv u} c1(u) int_u^T ds e^{-kv s} c2(s)`.
pub fn i3(c1: &ExpCoeffs, c2: &ExpCoeffs) -> f64 {
    if c1.same_function(c2) {
        i3_symmetric(c1)
    } else {
        simplex::i3(c1, c2)
    }
}

/// Square of `int_0^T dt e^{kv t} int_t^T du e^{-kv u} c(u)`.
pub fn i1_squared(c: &ExpCoeffs) -> f64 {
    let v = i1(c);
    v * v
}

/// The same integrals as ordered-simplex integrals of exponentials, i.e.
/// divided differences of `exp` at cumulative exponent sums.
pub mod simplex {
    use super::*;

    fn double(a: f64, b: f64, t: f64) -> f64 {
        // int_{0<s1<s2<T} e^{a s1 + b s2}
        t * t * exp_divdiff(&[0.0, b * t, (a + b) * t])
    }

    fn triple(a: f64, b: f64, g: f64, t: f64) -> f64 {
        t.powi(3) * exp_divdiff(&[0.0, g * t, (b + g) * t, (a + b + g) * t])
    }

    pub fn i1(c: &ExpCoeffs) -> f64 {
        let kv = c.k_v;
        c.terms()
            .iter()
            .map(|&(ck, k)| ck * double(kv, k - kv, c.maturity))
            .sum()
    }

    pub fn i1_2k(c: &ExpCoeffs) -> f64 {
        let kv = 2.0 * c.k_v;
        c.terms()
            .iter()
            .map(|&(ck, k)| ck * double(kv, k - kv, c.maturity))
            .sum()
    }

    pub fn i2(c: &ExpCoeffs) -> f64 {
        let kv = c.k_v;
        c.terms()
            .iter()
            .map(|&(ck, k)| ck * triple(kv, 0.0, k - kv, c.maturity))
            .sum()
    }

    pub fn i3(c1: &ExpCoeffs, c2: &ExpCoeffs) -> f64 {
        let kv = c1.k_v;
        let mut value = 0.0;
        for (a, ka) in c1.terms() {
            for (b, kb) in c2.terms() {
                if a != 0.0 && b != 0.0 {
                    value += a * b * triple(2.0 * kv, ka - kv, kb - kv, c1.maturity);
                }
            }
        }
        value
    }

    pub fn i4(c: &ExpCoeffs) -> f64 {
        let kv = c.k_v;
        c.terms()
            .iter()
            .map(|&(ck, k)| ck * triple(kv, kv, k - 2.0 * kv, c.maturity))
            .sum()
    }
}

/// Integrals over `[0, T]` of the Hull-White bond factors
/// `B(t, T) = (e^{-k (T - t)} - 1) / k`.
fn bond_factor_integral(k: f64, t: f64) -> f64 {
    -t * t * phi2(-k * t)
}

fn bond_factor_square_integral(k: f64, t: f64) -> f64 {
    let w = -k * t;
    2.0 * t.powi(3) * (2.0 * phi3(2.0 * w) - phi3(w))
}

fn bond_factor_cross_integral(k_d: f64, k_f: f64, t: f64) -> f64 {
    let (wd, wf) = (-k_d * t, -k_f * t);
    t.powi(3) * (exp_divdiff(&[0.0, 0.0, wd, wd + wf]) + exp_divdiff(&[0.0, 0.0, wf, wd + wf]))
}

/// Total variance of the log forward at `v = v0`:
/// `int_0^T sigma_F(t, v0)^2 dt`, with
/// `sigma_F^2 = v + eta_d^2 B_d^2 + eta_f^2 B_f^2 - 2 rho_sd eta_d B_d sqrt(v)
///  + 2 rho_sf eta_f B_f sqrt(v) - 2 rho_df eta_d eta_f B_d B_f`.
pub fn y0_hhw(params: &ModelParams, maturity: f64) -> f64 {
    if maturity <= 0.0 {
        return 0.0;
    }
    let t = maturity;
    let v0 = params.heston.v0;
    let sqrt_v0 = v0.sqrt();
    let (k_d, eta_d) = (params.hw_dom.k, params.hw_dom.eta);
    let (k_f, eta_f) = (params.hw_for.k, params.hw_for.eta);
    let c = &params.corr;
    v0 * t + eta_d * eta_d * bond_factor_square_integral(k_d, t) + eta_f * eta_f * bond_factor_square_integral(k_f, t)
        - 2.0 * sqrt_v0 * c.rho_sd * eta_d * bond_factor_integral(k_d, t)
        + 2.0 * sqrt_v0 * c.rho_sf * eta_f * bond_factor_integral(k_f, t)
        - 2.0 * c.rho_df * eta_d * eta_f * bond_factor_cross_integral(k_d, k_f, t)
}

/// `sigma_F(t, v)^2`, the instantaneous variance of the log forward to `T`.
pub fn forward_variance(params: &ModelParams, t: f64, maturity: f64, v: f64) -> f64 {
    let bd = params.hw_dom.bond_factor(t, maturity);
    let bf = params.hw_for.bond_factor(t, maturity);
    let (eta_d, eta_f) = (params.hw_dom.eta, params.hw_for.eta);
    let c = &params.corr;
    let sv = v.sqrt();
    v + eta_d * eta_d * bd * bd + eta_f * eta_f * bf * bf - 2.0 * c.rho_sd * eta_d * bd * sv
        + 2.0 * c.rho_sf * eta_f * bf * sv
        - 2.0 * c.rho_df * eta_d * eta_f * bd * bf
}
