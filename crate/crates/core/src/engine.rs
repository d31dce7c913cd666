//! Survival probability, the Zeno product `p(t/N)^N` and its scaled form
//! `p_{N,α}(τ) = p(τ N^{α-1})^N`, all carried in log space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::spectral::{char_fn, log_modulus_sq, zeno_time, SpectralMeasure, ZenoTime};

/// Raw `|A|²` above `1 + PROBABILITY_SLACK` signals a numerical failure.
pub const PROBABILITY_SLACK: f64 = 1e-10;
/// Below this log value `exp` underflows and `p` is reported as 0.
pub const UNDERFLOW_LOG: f64 = -745.0;

/// A probability together with its natural log. The log survives where the
/// probability itself underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogProbability {
    log_p: f64,
    p: f64,
}

impl LogProbability {
    pub fn from_log(log_p: f64) -> Self {
        debug_assert!(!log_p.is_nan());
        let log_p = log_p.min(0.0);
        let p = if log_p > UNDERFLOW_LOG {
            log_p.exp()
        } else {
            0.0
        };
        LogProbability { log_p, p }
    }

    pub fn zero() -> Self {
        LogProbability {
            log_p: f64::NEG_INFINITY,
            p: 0.0,
        }
    }

    pub fn one() -> Self {
        LogProbability { log_p: 0.0, p: 1.0 }
    }

    pub fn log_p(&self) -> f64 {
        self.log_p
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Parameters of one scaled product evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZenoParams {
    pub n: u64,
    pub alpha: Exponent,
    pub tau: f64,
    pub hbar: f64,
}

impl ZenoParams {
    pub fn new(n: u64, alpha: Exponent, tau: f64, hbar: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be >= 1".into()));
        }
        if !tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tau = {tau} is not finite"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hbar = {hbar} must be > 0"
            )));
        }
        if !(alpha.value().is_finite() && alpha.value() >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must be >= 0"
            )));
        }
        Ok(ZenoParams {
            n,
            alpha,
            tau,
            hbar,
        })
    }

    /// Free-evolution time between consecutive measurements, `τ N^{α-1}`.
    pub fn interval(&self) -> f64 {
        self.tau * self.alpha.time_scale(self.n)
    }
}

/// `p(t) = |A(t)|²`, clamped to [0, 1] after checking that rounding is the
/// only reason it could exceed one.
pub fn survival_probability(measure: &SpectralMeasure, t: f64, hbar: f64) -> Result<f64> {
    let p = char_fn(measure, t, hbar)?.norm_sqr();
    if p > 1.0 + PROBABILITY_SLACK {
        return Err(Error::ProbabilityExceedsOne { value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `ln p(t)`, accurate near `p = 1` (no `1 - p` cancellation).
pub fn log_survival(measure: &SpectralMeasure, t: f64, hbar: f64) -> Result<f64> {
    let log_p = log_modulus_sq(measure, t, hbar)?;
    if log_p == f64::NEG_INFINITY {
        return Err(Error::ZeroProbability);
    }
    if log_p > PROBABILITY_SLACK {
        return Err(Error::ProbabilityExceedsOne { value: log_p.exp() });
    }
    Ok(log_p.min(0.0))
}

fn power_of_survival(
    measure: &SpectralMeasure,
    n: u64,
    step: f64,
    hbar: f64,
) -> Result<LogProbability> {
    if n == 1 {
        let p = survival_probability(measure, step, hbar)?;
        let log_p = match log_survival(measure, step, hbar) {
            Ok(l) => l,
            Err(Error::ZeroProbability) => f64::NEG_INFINITY,
            Err(e) => return Err(e),
        };
        return Ok(LogProbability { log_p, p });
    }
    match log_survival(measure, step, hbar) {
        Ok(l) => Ok(LogProbability::from_log(n as f64 * l)),
        Err(Error::ZeroProbability) => Ok(LogProbability::zero()),
        Err(e) => Err(e),
    }
}

/// Zeno product formula `p^{(N)}(t) = p(t/N)^N`.
pub fn zeno_product(
    measure: &SpectralMeasure,
    n: u64,
    t: f64,
    hbar: f64,
) -> Result<LogProbability> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    power_of_survival(measure, n, t / n as f64, hbar)
}

/// Scaled product `p_{N,α}(τ) = p(τ N^{α-1})^N`.
pub fn scaled_zeno_product(
    measure: &SpectralMeasure,
    params: &ZenoParams,
) -> Result<LogProbability> {
    power_of_survival(measure, params.n, params.interval(), params.hbar)
}

/// Outcome of comparing `p(t)` with its quadratic expansion `1 - t²/τ_Z²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorCheck {
    pub residual: f64,
    /// `residual · τ_Z⁴ / t⁴`; zero for an eigenstate.
    pub fitted_c: f64,
    pub tau_z: f64,
}

/// Short-time check of `p(t) = 1 - t²/τ_Z² + O(t⁴)` for `|t| ≤ τ_Z / 10`.
pub fn taylor_check(measure: &SpectralMeasure, t_small: f64, hbar: f64) -> Result<TaylorCheck> {
    let tau_z = match zeno_time(measure, hbar) {
        ZenoTime::Undefined => return Err(Error::UndefinedZenoTime),
        ZenoTime::Infinite => f64::INFINITY,
        ZenoTime::Finite(tz) => tz,
    };
    if t_small.is_nan() || t_small.abs() > 0.1 * tau_z {
        return Err(Error::InvalidParameter(format!(
            "|t| = {} exceeds a tenth of the Zeno time {tau_z}",
            t_small.abs()
        )));
    }
    let log_p = log_survival(measure, t_small, hbar)?;
    let one_minus_p = -log_p.exp_m1();
    let quadratic = if tau_z.is_infinite() {
        0.0
    } else {
        (t_small / tau_z).powi(2)
    };
    let residual = (one_minus_p - quadratic).abs();
    let fitted_c = if residual == 0.0 {
        0.0
    } else {
        residual * (tau_z / t_small).powi(4)
    };
    Ok(TaylorCheck {
        residual,
        fitted_c,
        tau_z,
    })
}
