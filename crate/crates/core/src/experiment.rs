//! Strike/maturity grids priced by several methods, written as CSV.
//!
//! Strikes follow `K = F0(T) exp(0.1 delta sqrt(T))`. A grid may be repeated
//! over a sweep of the vol-of-vol or one of the short-rate volatilities.
//!
//! The main CSV holds only reproducible numbers, so identical inputs give a
//! byte-identical file. Wall-clock timings go to a separate summary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{
    implied_vol_of, price_heston_chf, price_heston_exp, price_hhw_exp, price_hybrid_expchf, Method,
};
use crate::mc_qe::{simulate_hhw_strikes, McConfig};
use crate::model::{validate, ModelParams, OptionKind, OptionSpec};

pub const DEFAULT_MATURITIES: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 10.0];
pub const DEFAULT_DELTAS: [f64; 7] = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Gamma,
    EtaD,
    EtaF,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Gamma => "gamma",
            SweepVariable::EtaD => "eta_d",
            SweepVariable::EtaF => "eta_f",
        }
    }

    pub fn apply(self, params: &ModelParams, value: f64) -> ModelParams {
        let mut p = params.clone();
        match self {
            SweepVariable::Gamma => p.heston.gamma = value,
            SweepVariable::EtaD => p.hw_dom.eta = value,
            SweepVariable::EtaF => p.hw_for.eta = value,
        }
        p
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(SweepVariable::Gamma),
            "eta_d" => Ok(SweepVariable::EtaD),
            "eta_f" => Ok(SweepVariable::EtaF),
            other => Err(Error::InvalidExperiment(format!(
                "unknown sweep variable '{other}' (gamma, eta_d, eta_f)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSpec {
    pub maturities: Vec<f64>,
    pub strike_deltas: Vec<f64>,
    pub methods: Vec<Method>,
    pub sweep: Option<Sweep>,
    pub mc: McConfig,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            maturities: DEFAULT_MATURITIES.to_vec(),
            strike_deltas: DEFAULT_DELTAS.to_vec(),
            methods: vec![Method::Exp, Method::ExpChF, Method::ChF, Method::Mc],
            sweep: None,
            mc: McConfig::default(),
            output: None,
        }
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidExperiment("no methods selected".into()));
        }
        if self.maturities.is_empty() || self.strike_deltas.is_empty() {
            return Err(Error::InvalidExperiment("empty maturity or strike list".into()));
        }
        if let Some(&t) = self.maturities.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::InvalidExperiment(format!("maturity {t} must be positive")));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(Error::InvalidExperiment("sweep without values".into()));
            }
            if let Some(&v) = s.values.iter().find(|&&v| !(v > 0.0)) {
                return Err(Error::InvalidExperiment(format!("sweep value {v} must be positive")));
            }
        }
        if self.methods.contains(&Method::Mc) {
            self.mc.validate()?;
        }
        Ok(())
    }
}

/// Seven strikes around the forward, widening with `sqrt(T)`.
pub fn strike_grid(forward: f64, maturity: f64) -> Vec<f64> {
    strikes_for(forward, maturity, &DEFAULT_DELTAS)
}

pub fn strikes_for(forward: f64, maturity: f64, deltas: &[f64]) -> Vec<f64> {
    deltas
        .iter()
        .map(|d| forward * (0.1 * d * maturity.sqrt()).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Value of the swept parameter, if any.
    pub sweep_value: Option<f64>,
    pub maturity: f64,
    pub strike: f64,
    pub method: Method,
    pub price: Option<f64>,
    pub implied_vol: Option<f64>,
    /// `(iv - iv_MC) * 1e4` when an MC row exists for the same cell.
    pub diff_bp: Option<f64>,
    pub mc_se: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub sweep_value: Option<f64>,
    pub method: Method,
    pub options: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub sweep: Option<SweepVariable>,
    pub rows: Vec<Row>,
    pub timings: Vec<Timing>,
}

impl ExperimentOutput {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut header = Vec::new();
        if let Some(v) = self.sweep {
            header.push(v.name());
        }
        header.extend([
            "maturity", "strike", "method", "price", "iv", "diff_bp", "mc_se", "status",
        ]);
        let records = self.rows.iter().map(|r| {
            let mut rec = Vec::with_capacity(header.len());
            if self.sweep.is_some() {
                rec.push(num(r.sweep_value));
            }
            rec.extend([
                num(Some(r.maturity)),
                num(Some(r.strike)),
                r.method.to_string(),
                num(r.price),
                num(r.implied_vol),
                num(r.diff_bp),
                num(r.mc_se),
                match &r.error {
                    None => "ok".to_string(),
                    Some(e) => format!("error: {e}"),
                },
            ]);
            rec
        });
        write_records(&header, records)
    }

    pub fn timing_csv(&self) -> String {
        let mut header = Vec::new();
        if let Some(v) = self.sweep {
            header.push(v.name());
        }
        header.extend(["method", "options", "wall_time_s"]);
        let records = self.timings.iter().map(|t| {
            let mut rec = Vec::new();
            if self.sweep.is_some() {
                rec.push(num(t.sweep_value));
            }
            rec.extend([t.method.to_string(), t.options.to_string(), format!("{:.6}", t.seconds)]);
            rec
        });
        write_records(&header, records)
    }

    /// Writes the grid to `path` and timings to `<path stem>.timing.csv`.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<PathBuf> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv())?;
        let timing = timing_path(path);
        std::fs::write(&timing, self.timing_csv())?;
        Ok(timing)
    }
}

pub fn timing_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.timing.csv"))
}

fn write_records(header: &[&str], records: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for rec in records {
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// 17 significant digits, empty when absent.
fn num(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

fn option_for(params: &ModelParams, strike: f64, maturity: f64) -> Result<OptionSpec> {
    OptionSpec::new(OptionKind::Put, strike, maturity, params)
}

fn price_cell(method: Method, params: &ModelParams, strike: f64, maturity: f64) -> Result<(f64, Option<f64>)> {
    let opt = option_for(params, strike, maturity)?;
    let r = match method {
        Method::HestonExp => price_heston_exp(params, &opt)?,
        Method::Exp => price_hhw_exp(params, &opt)?,
        Method::ExpChF => price_hybrid_expchf(params, &opt)?,
        Method::ChF => price_heston_chf(params, &opt)?,
        Method::Mc => unreachable!("MC cells are simulated per maturity"),
    };
    Ok((r.price, r.implied_vol))
}

fn error_row(sweep_value: Option<f64>, maturity: f64, strike: f64, method: Method, e: &Error) -> Row {
    Row {
        sweep_value,
        maturity,
        strike,
        method,
        price: None,
        implied_vol: None,
        diff_bp: None,
        mc_se: None,
        error: Some(e.to_string()),
    }
}

fn run_grid(spec: &ExperimentSpec, params: &ModelParams, sweep_value: Option<f64>, out: &mut ExperimentOutput) {
    let first_row = out.rows.len();
    for &method in &spec.methods {
        let start = Instant::now();
        let mut options = 0;
        for &t in &spec.maturities {
            let strikes = strikes_for(params.forward(t), t, &spec.strike_deltas);
            options += strikes.len();
            if method == Method::Mc {
                match simulate_hhw_strikes(params, t, &strikes, OptionKind::Put, &spec.mc) {
                    Ok(run) => {
                        for (&k, est) in strikes.iter().zip(&run.estimates) {
                            let iv = option_for(params, k, t)
                                .ok()
                                .and_then(|o| implied_vol_of(est.price, &o));
                            out.rows.push(Row {
                                sweep_value,
                                maturity: t,
                                strike: k,
                                method,
                                price: Some(est.price),
                                implied_vol: iv,
                                diff_bp: None,
                                mc_se: Some(est.std_error),
                                error: None,
                            });
                        }
                    }
                    Err(e) => {
                        for &k in &strikes {
                            out.rows.push(error_row(sweep_value, t, k, method, &e));
                        }
                    }
                }
                continue;
            }
            for &k in &strikes {
                out.rows.push(match price_cell(method, params, k, t) {
                    Ok((price, iv)) => Row {
                        sweep_value,
                        maturity: t,
                        strike: k,
                        method,
                        price: Some(price),
                        implied_vol: iv,
                        diff_bp: None,
                        mc_se: None,
                        error: None,
                    },
                    Err(e) => error_row(sweep_value, t, k, method, &e),
                });
            }
        }
        out.timings.push(Timing {
            sweep_value,
            method,
            options,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    // differences against MC on the same cell
    let rows = &mut out.rows[first_row..];
    let mc: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| r.method == Method::Mc)
        .filter_map(|r| r.implied_vol.map(|iv| (r.maturity, r.strike, iv)))
        .collect();
    for r in rows.iter_mut().filter(|r| r.method != Method::Mc) {
        if let (Some(iv), Some(&(_, _, iv_mc))) = (
            r.implied_vol,
            mc.iter().find(|(t, k, _)| *t == r.maturity && *k == r.strike),
        ) {
            r.diff_bp = Some((iv - iv_mc) * 1e4);
        }
    }
}

/// Prices the whole grid (for every sweep value) with every method. Cell
/// failures become rows with an error status; only invalid inputs fail the
/// run.
pub fn run_experiment(spec: &ExperimentSpec, params: &ModelParams) -> Result<ExperimentOutput> {
    spec.validate()?;
    validate(params)?;
    let mut out = ExperimentOutput {
        sweep: spec.sweep.as_ref().map(|s| s.variable),
        rows: Vec::new(),
        timings: Vec::new(),
    };
    match &spec.sweep {
        None => run_grid(spec, params, None, &mut out),
        Some(s) => {
            for &v in &s.values {
                let swept = s.variable.apply(params, v);
                run_grid(spec, &swept, Some(v), &mut out);
            }
        }
    }
    Ok(out)
}
