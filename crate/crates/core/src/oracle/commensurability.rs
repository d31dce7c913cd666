use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::gcd;
use crate::spectral::PurePointMeasure;

/// Lattice structure `λ_j = a + k_j δ` of a commensurable pure-point
/// spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommensurabilityResult {
    pub reference_level: f64,
    /// One per atom, ascending; the first is 0.
    pub multipliers: Vec<i64>,
    /// `gcd{k_j ≠ 0}`. The gap is chosen as large as possible, so this is 1.
    pub gcd: u64,
    pub fundamental_gap: f64,
    /// `2πħ/δ`, the first positive time with `p = 1`.
    pub first_return_time: f64,
}

impl CommensurabilityResult {
    /// `τ₀ = m τ_R`: a return time together with its multiple of the first
    /// return time, for callers thinking in terms of a pair `(τ₀, m)`.
    pub fn return_multiple(&self, tau0: f64, tol: f64) -> Option<i64> {
        let r = tau0.abs() / self.first_return_time;
        let m = r.round();
        (m >= 1.0 && (r - m).abs() <= tol).then_some(m as i64)
    }
}

/// First continued-fraction convergent `p/q` of `x ≥ 0` with
/// `|x q - p| ≤ tol`, searching denominators up to `max_den`.
fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a > i64::MAX as f64 / 2.0 {
            return None;
        }
        let a = a as i128;
        (p0, p1) = (p1, a * p1 + p0);
        (q0, q1) = (q1, a * q1 + q0);
        if q1 > max_den as i128 {
            return None;
        }
        if (x * q1 as f64 - p1 as f64).abs() <= tol {
            return Some((i64::try_from(p1).ok()?, q1 as u64));
        }
        let frac = y - a as f64;
        if frac <= 0.0 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Finds the largest `δ` such that every gap `λ_j - λ₁` is an integer
/// multiple of it.
///
/// Gap ratios to the smallest gap are approximated by continued fractions
/// with denominators up to `max_denominator`. `tol` bounds the residual
/// `|g_j/δ - k_j|` measured in units of `δ`.
pub fn analyze_commensurability(
    measure: &PurePointMeasure,
    hbar: f64,
    max_denominator: u64,
    tol: f64,
) -> Result<CommensurabilityResult> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hbar = {hbar} must be > 0"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) || max_denominator == 0 {
        return Err(Error::InvalidParameter(
            "commensurability needs tol > 0 and max_denominator >= 1".into(),
        ));
    }
    let atoms = measure.atoms();
    match atoms.len() {
        0 => return Err(Error::EmptyMeasure),
        1 => return Err(Error::SingleAtom),
        _ => {}
    }
    let a = atoms[0].energy;
    let gaps: Vec<f64> = atoms.iter().map(|at| at.energy - a).collect();
    let base = gaps[1];

    let mut common = 1u64;
    for &g in &gaps[2..] {
        let (_, q) =
            rational_approximation(g / base, max_denominator, tol).ok_or(Error::Incommensurable)?;
        common = lcm(common, q)
            .filter(|&l| l <= max_denominator)
            .ok_or(Error::Incommensurable)?;
    }
    let scaled: Vec<i64> = gaps
        .iter()
        .map(|&g| (g / base * common as f64).round() as i64)
        .collect();
    let d = scaled
        .iter()
        .fold(0u64, |acc, &n| gcd(acc, n.unsigned_abs()));
    let multipliers: Vec<i64> = scaled.iter().map(|&n| n / d as i64).collect();

    let (num, den) = multipliers
        .iter()
        .zip(&gaps)
        .fold((0.0, 0.0), |(num, den), (&k, &g)| {
            (num + k as f64 * g, den + (k as f64).powi(2))
        });
    let delta = num / den;
    if multipliers
        .iter()
        .zip(&gaps)
        .any(|(&k, &g)| (g / delta - k as f64).abs() > tol)
    {
        return Err(Error::Incommensurable);
    }
    let m = multipliers
        .iter()
        .fold(0u64, |acc, &k| gcd(acc, k.unsigned_abs()));
    Ok(CommensurabilityResult {
        reference_level: a,
        multipliers,
        gcd: m,
        fundamental_gap: delta,
        first_return_time: 2.0 * PI * hbar / delta,
    })
}

/// Whether `m τ/τ₀` is within `tol` of an integer.
///
/// # Panics
/// If `tau0` is zero or `m` is zero.
pub fn lattice_membership(tau: f64, tau0: f64, m: u64, tol: f64) -> bool {
    assert!(tau0 != 0.0 && m >= 1, "lattice needs tau0 != 0 and m >= 1");
    let r = m as f64 * tau / tau0;
    (r - r.round()).abs() <= tol
}
