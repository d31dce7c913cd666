//! Predicted `N → ∞` limits of the scaled Zeno product and checks of those
//! predictions against direct evaluation.

mod commensurability;
mod verify;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{Exponent, RationalExponent};
use crate::spectral::{variance, zeno_time, ExtendedReal, SpectralMeasure, SpectralType};

pub use commensurability::{analyze_commensurability, lattice_membership, CommensurabilityResult};
pub use verify::{
    almost_everywhere_fraction, recurrence_schedule, verify_prediction, Trend, VerificationPoint,
    VerificationReport,
};

/// Arithmetic policy of the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Residual tolerance for commensurability, in units of the gap.
    pub tol: f64,
    pub max_denominator: u64,
    /// Tolerance on `τ/τ_R` for lattice membership.
    pub lattice_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tol: 1e-9,
            max_denominator: 1_000_000,
            lattice_tol: 1e-9,
        }
    }
}

/// Limit behaviour of `p_{N,α}(τ)` as `N → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    /// Freezing, limit 1.
    Zeno,
    /// Limit `exp(-τ²/τ_Z²)`.
    Gaussian {
        tau_z: f64,
    },
    /// Limit 0.
    Classical,
    /// α = 1 on a commensurable spectrum: limit 1 on `τ_R ℤ`, 0 elsewhere.
    Lattice {
        first_return_time: f64,
        gcd: u64,
        on_lattice: bool,
    },
    /// `p = 1` along `N_m = m^{n₂}`; no claim about the full sequence.
    Recurrent {
        first_return_time: f64,
        multiple: i64,
        n1: i64,
        n2: u64,
    },
    /// Limit 0 for almost every τ.
    AlmostEverywhereZero,
    Inapplicable {
        reason: String,
    },
}

impl Regime {
    /// The predicted limit at `tau`, when one is claimed.
    pub fn limit(&self, tau: f64) -> Option<f64> {
        match self {
            Regime::Zeno => Some(1.0),
            Regime::Gaussian { tau_z } => Some((-(tau / tau_z).powi(2)).exp()),
            Regime::Classical | Regime::AlmostEverywhereZero => Some(0.0),
            Regime::Lattice { on_lattice, .. } => Some(if *on_lattice { 1.0 } else { 0.0 }),
            Regime::Recurrent { .. } | Regime::Inapplicable { .. } => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Regime::Zeno => "zeno",
            Regime::Gaussian { .. } => "gaussian",
            Regime::Classical => "classical",
            Regime::Lattice { .. } => "lattice",
            Regime::Recurrent { .. } => "recurrent",
            Regime::AlmostEverywhereZero => "almost_everywhere_zero",
            Regime::Inapplicable { .. } => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimePrediction {
    #[serde(flatten)]
    pub regime: Regime,
    pub limit: Option<f64>,
    pub notes: String,
}

impl RegimePrediction {
    fn new(regime: Regime, tau: f64, notes: impl Into<String>) -> Self {
        RegimePrediction {
            limit: regime.limit(tau),
            regime,
            notes: notes.into(),
        }
    }

    fn inapplicable(reason: &str) -> Self {
        Self::new(
            Regime::Inapplicable {
                reason: reason.into(),
            },
            0.0,
            "",
        )
    }
}

/// [`predict_limit_with`] under the default arithmetic policy.
pub fn predict_limit(
    measure: &SpectralMeasure,
    alpha: Exponent,
    tau: f64,
    hbar: f64,
) -> RegimePrediction {
    predict_limit_with(measure, alpha, tau, hbar, &OracleConfig::default())
}

/// Predicts `lim_{N→∞} p_{N,α}(τ)` from the spectral data alone.
pub fn predict_limit_with(
    measure: &SpectralMeasure,
    alpha: Exponent,
    tau: f64,
    hbar: f64,
    config: &OracleConfig,
) -> RegimePrediction {
    if !(hbar.is_finite() && hbar > 0.0) || !tau.is_finite() {
        return RegimePrediction::inapplicable("tau must be finite and hbar positive");
    }
    let a = alpha.value();
    if !(a.is_finite() && a >= 0.0) {
        return RegimePrediction::inapplicable("alpha must be >= 0");
    }
    let var = variance(measure);
    if matches!(var, ExtendedReal::Finite(v) if v == 0.0) {
        return RegimePrediction::new(Regime::Zeno, tau, "eigenstate: p is identically 1");
    }
    if tau == 0.0 {
        return RegimePrediction::new(Regime::Zeno, tau, "p(0) = 1 for every N");
    }

    let exact_half = alpha.is_exactly(1, 2);
    let is_one = alpha.is_exactly(1, 1) || matches!(alpha, Exponent::Approx(v) if v == 1.0);

    if a < 1.0 && !is_one {
        if var.is_infinite() {
            if a <= 0.5 {
                return RegimePrediction::inapplicable("state not in domain of H");
            }
            return RegimePrediction::new(
                Regime::Classical,
                tau,
                "infinite variance: decay is faster than quadratic at short times",
            );
        }
        if exact_half {
            let tau_z = zeno_time(measure, hbar)
                .finite()
                .expect("finite non-zero variance");
            return RegimePrediction::new(Regime::Gaussian { tau_z }, tau, "");
        }
        if a == 0.5 {
            return RegimePrediction::inapplicable(
                "alpha at the threshold must be given exactly as 1/2",
            );
        }
        if a < 0.5 {
            return RegimePrediction::new(Regime::Zeno, tau, "");
        }
        return RegimePrediction::new(Regime::Classical, tau, "");
    }

    let pp = measure.as_pure_point();
    let lattice = pp
        .as_ref()
        .and_then(|pp| analyze_commensurability(pp, hbar, config.max_denominator, config.tol).ok());

    if is_one {
        return match lattice {
            Some(c) => {
                let on_lattice =
                    lattice_membership(tau, c.first_return_time, 1, config.lattice_tol);
                RegimePrediction::new(
                    Regime::Lattice {
                        first_return_time: c.first_return_time,
                        gcd: c.gcd,
                        on_lattice,
                    },
                    tau,
                    "",
                )
            }
            None if pp.is_some() => RegimePrediction::new(
                Regime::Classical,
                tau,
                "incommensurable spectrum: p < 1 away from 0",
            ),
            None => RegimePrediction::new(Regime::Classical, tau, "no pure-point return time"),
        };
    }

    // α > 1
    if measure.spectral_type() == SpectralType::AbsCont {
        return RegimePrediction::new(Regime::Classical, tau, "uniform on compacts away from 0");
    }
    if let (Some(c), Some(r)) = (&lattice, alpha.as_exact()) {
        if lattice_membership(tau, c.first_return_time, 1, config.lattice_tol) {
            let (n1, n2) = r.minus_one();
            return RegimePrediction::new(
                Regime::Recurrent {
                    first_return_time: c.first_return_time,
                    multiple: (tau / c.first_return_time).round() as i64,
                    n1,
                    n2,
                },
                tau,
                "limsup is 1 along the subsequence; no limit claimed",
            );
        }
    }
    if measure.is_bounded_below() {
        let note = if lattice.is_some() && alpha.as_exact().is_none() {
            "approximate alpha: recurrence needs an exact rational"
        } else {
            "statement holds for almost every tau"
        };
        return RegimePrediction::new(Regime::AlmostEverywhereZero, tau, note);
    }
    RegimePrediction::inapplicable("spectrum not bounded below")
}

/// `{m^{n₂} : m = 1..=m_max}` for `α - 1 = n₁/n₂`.
pub fn recurrence_subsequence(alpha: Exponent, m_max: u64) -> Result<Vec<u64>> {
    let r: RationalExponent = alpha.as_exact().ok_or(Error::ApproximateAlpha)?;
    let (n1, n2) = r.minus_one();
    if n1 <= 0 {
        return Err(Error::InvalidParameter(format!(
            "recurrence needs alpha > 1, got {r}"
        )));
    }
    let k = u32::try_from(n2)
        .map_err(|_| Error::InvalidParameter(format!("denominator of {r} too large")))?;
    (1..=m_max)
        .map(|m| {
            m.checked_pow(k).ok_or_else(|| {
                Error::InvalidParameter(format!("{m}^{k} overflows the measurement count"))
            })
        })
        .collect()
}
