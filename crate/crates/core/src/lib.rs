//! Second-order vol-of-vol expansion pricing of FX options under the
//! Heston and Heston-Hull-White models.
//!
//! The pricers live in [`expansion`]; [`heston_chf`] and [`mc_qe`] provide the
//! Fourier and Monte-Carlo benchmarks they are checked against, and
//! [`experiment`] runs strike/maturity grids of all of them.

// `!(x > 0.0)` is how inputs are checked throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod black_scholes;
pub mod error;
pub mod expansion;
pub mod experiment;
pub mod expfn;
pub mod heston_chf;
pub mod integrals;
pub mod mc_qe;
pub mod model;
pub mod normal;
pub mod quad;

pub use black_scholes::{bs_call, bs_partial, bs_put, implied_vol, BsPartials, BsPoint};
pub use error::{Error, Result};
pub use expansion::{
    delta_stochastic_rates, price_heston_chf, price_heston_exp, price_hhw_exp, price_hybrid_expchf, ExpansionBreakdown,
    Method, PriceResult,
};
pub use experiment::{run_experiment, strike_grid, ExperimentSpec};
pub use heston_chf::{charfn, price_call_chf, price_put_chf, ChfParams};
pub use integrals::{alpha_coeffs, i1, i1_2k, i2, i3, i4, y0_hhw, ExpCoeffs, RateAdjustment};
pub use mc_qe::{simulate_heston, simulate_hhw, McConfig, McEstimate};
pub use model::{
    forward, validate, validate_for_expansion, CorrMatrix, HestonParams, HullWhiteParams, ModelParams, OptionKind,
    OptionSpec, ZeroCurve,
};
pub use num_complex::Complex64;
