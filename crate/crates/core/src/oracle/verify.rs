use rayon::prelude::*;
use serde::Serialize;

use super::{predict_limit, recurrence_subsequence, Regime, RegimePrediction};
use crate::engine::{scaled_zeno_product, ZenoParams};
use crate::error::{Error, Result};
use crate::exponent::{integer_root, Exponent};
use crate::spectral::SpectralMeasure;

/// Gap to a limit of 0 or 1 accepted at the end of the schedule.
const LIMIT_GAP_TOL: f64 = 1e-3;
/// Gap to the Gaussian law accepted at the end of the schedule.
const GAUSSIAN_GAP_TOL: f64 = 5e-3;
/// Deviation from 1 accepted on lattice and recurrence points.
const RETURN_TOL: f64 = 1e-9;
/// Changes in `p` smaller than this count as flat.
const FLAT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationPoint {
    pub n: u64,
    pub p: f64,
    pub log_p: f64,
    /// `|p_{N,α}(τ) - exp(-τ²/τ_Z²)|`, gaussian regime only.
    pub gaussian_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub prediction: RegimePrediction,
    pub points: Vec<VerificationPoint>,
    pub trend: Trend,
    /// `|p_{N_max} - limit|`, when a limit is predicted.
    pub final_gap: Option<f64>,
    /// `None` when the prediction admits no pointwise check on this schedule.
    pub agrees: Option<bool>,
    pub notes: String,
}

fn trend(ps: &[f64]) -> Trend {
    let diffs: Vec<f64> = ps.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|d| d.abs() <= FLAT_TOL) {
        Trend::Constant
    } else if diffs.iter().all(|&d| d >= -FLAT_TOL) {
        Trend::Increasing
    } else if diffs.iter().all(|&d| d <= FLAT_TOL) {
        Trend::Decreasing
    } else {
        Trend::Mixed
    }
}

/// Evaluates `p_{N,α}(τ)` along `schedule` and checks the result against
/// [`predict_limit`].
pub fn verify_prediction(
    measure: &SpectralMeasure,
    alpha: Exponent,
    tau: f64,
    hbar: f64,
    schedule: &[u64],
) -> Result<VerificationReport> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "N schedule must be non-empty and strictly increasing".into(),
        ));
    }
    let prediction = predict_limit(measure, alpha, tau, hbar);
    let gaussian_limit = match prediction.regime {
        Regime::Gaussian { .. } => prediction.limit,
        _ => None,
    };
    let points = schedule
        .par_iter()
        .map(|&n| {
            let lp = scaled_zeno_product(measure, &ZenoParams::new(n, alpha, tau, hbar)?)?;
            Ok(VerificationPoint {
                n,
                p: lp.p(),
                log_p: lp.log_p(),
                gaussian_gap: gaussian_limit.map(|g| (lp.p() - g).abs()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ps: Vec<f64> = points.iter().map(|pt| pt.p).collect();
    let gaps: Option<Vec<f64>> = prediction
        .limit
        .map(|l| ps.iter().map(|p| (p - l).abs()).collect());
    let final_gap = gaps.as_ref().and_then(|g| g.last().copied());
    let shrinking = gaps
        .as_ref()
        .is_some_and(|g| g[g.len() - 1] <= g[0] + FLAT_TOL);

    let mut notes = String::new();
    let agrees = match &prediction.regime {
        Regime::Zeno | Regime::Classical => {
            Some(final_gap.is_some_and(|g| g <= LIMIT_GAP_TOL) && shrinking)
        }
        Regime::Gaussian { .. } => {
            Some(final_gap.is_some_and(|g| g <= GAUSSIAN_GAP_TOL) && shrinking)
        }
        Regime::Lattice {
            on_lattice: true, ..
        } => Some(ps.iter().all(|p| (p - 1.0).abs() <= RETURN_TOL)),
        Regime::Lattice {
            on_lattice: false, ..
        } => Some(final_gap.is_some_and(|g| g <= LIMIT_GAP_TOL) && shrinking),
        Regime::Recurrent { n2, .. } => {
            let k = u32::try_from(*n2).unwrap_or(u32::MAX);
            let members: Vec<&VerificationPoint> = points
                .iter()
                .filter(|pt| integer_root(pt.n, k).is_some())
                .collect();
            if members.is_empty() {
                notes.push_str("no schedule entry lies on the recurrence subsequence");
                None
            } else {
                Some(members.iter().all(|pt| (pt.p - 1.0).abs() <= RETURN_TOL))
            }
        }
        Regime::AlmostEverywhereZero => {
            notes.push_str("almost-everywhere statement, checked at a single tau");
            Some(final_gap.is_some_and(|g| g <= LIMIT_GAP_TOL))
        }
        Regime::Inapplicable { .. } => None,
    };

    Ok(VerificationReport {
        trend: trend(&ps),
        prediction,
        points,
        final_gap,
        agrees,
        notes,
    })
}

/// Fraction of `taus` with `p_{N,α}(τ) < threshold`.
pub fn almost_everywhere_fraction(
    measure: &SpectralMeasure,
    alpha: Exponent,
    n: u64,
    taus: &[f64],
    hbar: f64,
    threshold: f64,
) -> Result<f64> {
    if taus.is_empty() {
        return Err(Error::InvalidParameter("tau sample is empty".into()));
    }
    let below = taus
        .par_iter()
        .map(|&tau| {
            let lp = scaled_zeno_product(measure, &ZenoParams::new(n, alpha, tau, hbar)?)?;
            Ok(usize::from(lp.p() < threshold))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(below as f64 / taus.len() as f64)
}

/// Members `m^{n₂}` of the recurrence subsequence not exceeding `n_max`.
pub fn recurrence_schedule(alpha: Exponent, n_max: u64) -> Result<Vec<u64>> {
    let r = alpha.as_exact().ok_or(Error::ApproximateAlpha)?;
    recurrence_subsequence(alpha, 1)?;
    let k = u32::try_from(r.minus_one().1).unwrap_or(u32::MAX);
    Ok((1u64..)
        .map_while(|m| m.checked_pow(k).filter(|&n| n <= n_max))
        .collect())
}
