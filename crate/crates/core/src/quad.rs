//! Adaptive Gauss-Kronrod (G10/K21) quadrature and iterated integrals over
//! the simplex `0 <= t0 <= t1 <= ... <= T`.
//!
//! This is the brute-force reference every closed-form integral is checked
//! against, and the integrator behind the characteristic-function pricer.

use std::cell::Cell;

use crate::error::{Error, Result};

pub const MAX_INTERVALS: usize = 10_000;
/// Relative accuracy below which Kronrod error estimates are pure round-off.
pub const MIN_REL_TOL: f64 = 1e-13;

// Kronrod 21-point abscissae (Gauss 10-point at odd indices) and weights,
// copied at published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-11, abs: 1e-13 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    /// Ten times tighter, for integrals nested inside another one. The
    /// relative part stops at [`MIN_REL_TOL`].
    pub fn tightened(self) -> Self {
        Self {
            rel: (self.rel * 0.1).max(MIN_REL_TOL.min(self.rel)),
            abs: self.abs * 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// A scalar integrand together with its requested accuracy.
pub struct Integrand1D<F> {
    pub f: F,
    pub tol: Tolerance,
}

impl<F: Fn(f64) -> f64> Integrand1D<F> {
    pub fn new(f: F, tol: Tolerance) -> Self {
        Self { f, tol }
    }

    pub fn integrate(&self, a: f64, b: f64) -> Result<QuadEstimate> {
        quad(&self.f, a, b, self.tol)
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Round-off level of this panel's estimate.
    floor: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let error = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    let floor = 50.0 * f64::EPSILON * res_abs * half.abs();
    Panel {
        a,
        b,
        value,
        error,
        floor,
    }
}

/// Adaptive bisection of the panel with the largest error estimate until the
/// summed estimate drops below `max(tol.abs, tol.rel |value|)`, or until it
/// is down to the round-off level of the integrand's magnitude (a cancelling
/// integrand cannot do better).
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadEstimate> {
    if a == b {
        return Ok(QuadEstimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let first = kronrod21(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut floor = first.floor;
    let mut panels = vec![first];
    loop {
        if !value.is_finite() {
            return Err(Error::NonFinite {
                name: "integral",
                value,
            });
        }
        if error <= tol.abs.max(tol.rel * value.abs()) || error <= 2.0 * floor {
            return Ok(QuadEstimate {
                value,
                error,
                intervals: panels.len(),
            });
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::MaxSubdivisions {
                max_intervals: MAX_INTERVALS,
                estimate: value,
                error,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // cannot bisect further in floating point
            return Err(Error::MaxSubdivisions {
                max_intervals: panels.len() + 1,
                estimate: value,
                error,
            });
        }
        let left = kronrod21(&f, p.a, mid);
        let right = kronrod21(&f, mid, p.b);
        value += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        floor += left.floor + right.floor - p.floor;
        panels.push(left);
        panels.push(right);
        // re-sum now and then to stop drift in the running totals
        if panels.len() % 64 == 0 {
            value = panels.iter().map(|p| p.value).sum();
            error = panels.iter().map(|p| p.error).sum();
            floor = panels.iter().map(|p| p.floor).sum();
        }
    }
}

/// Iterated integral over the ordered simplex:
///
/// `int_0^T dt0 w0(t0) int_t0^T dt1 w1(t1) ... int_t(n-2)^T dt(n-1) w(n-1)(t(n-1))`
///
/// Inner levels run at ten times tighter tolerance than their parent.
pub fn nested_quad(levels: &[&dyn Fn(f64) -> f64], upper: f64, tol: Tolerance) -> Result<QuadEstimate> {
    nested_from(levels, 0.0, upper, tol)
}

fn nested_from(levels: &[&dyn Fn(f64) -> f64], lower: f64, upper: f64, tol: Tolerance) -> Result<QuadEstimate> {
    match levels {
        [] => Ok(QuadEstimate {
            value: 1.0,
            error: 0.0,
            intervals: 0,
        }),
        [w] => quad(w, lower, upper, tol),
        [w, rest @ ..] => {
            let failure: Cell<Option<Error>> = Cell::new(None);
            let inner_tol = tol.tightened();
            let integrand = |t: f64| match nested_from(rest, t, upper, inner_tol) {
                Ok(inner) => w(t) * inner.value,
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            };
            let outer = quad(integrand, lower, upper, tol);
            match failure.into_inner() {
                Some(e) => Err(e),
                None => outer,
            }
        }
    }
}
