use num_complex::Complex64;

use super::{tabulated_mass, AbsContMeasure, CantorMeasure, PurePointMeasure, SpectralMeasure};
use crate::error::{Error, Result};
use crate::quadrature::oscillatory_linear;

/// Largest admissible `|scale · t| · 3^{-depth} / ħ` for a truncated Cantor
/// product.
pub const CANTOR_TRUNCATION_TOL: f64 = 1e-8;

/// Pure-point measures with more atoms than this fall back from the
/// pairwise defect sum to the plain modulus.
const PAIRWISE_ATOM_LIMIT: usize = 256;

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "hbar = {hbar} must be > 0"
        )))
    }
}

#[inline]
fn phase(x: f64) -> Complex64 {
    Complex64::new(x.cos(), -x.sin())
}

/// Survival amplitude `A(t) = ∫ e^{-itλ/ħ} dμ(λ)`.
pub fn char_fn(measure: &SpectralMeasure, t: f64, hbar: f64) -> Result<Complex64> {
    check_hbar(hbar)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t = {t} is not finite")));
    }
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    amplitude(measure, t, hbar)
}

fn amplitude(measure: &SpectralMeasure, t: f64, hbar: f64) -> Result<Complex64> {
    match measure {
        SpectralMeasure::PurePoint(pp) => Ok(pure_point_amplitude(pp, t, hbar)),
        SpectralMeasure::AbsCont(ac) => abs_cont_amplitude(ac, t, hbar),
        SpectralMeasure::Cantor(c) => {
            let (phase_arg, args) = cantor_parts(c, t, hbar)?;
            Ok(phase(phase_arg) * args.iter().map(|y| y.cos()).product::<f64>())
        }
        SpectralMeasure::Mixture(mix) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in &mix.components {
                acc += amplitude(&c.measure, t, hbar)? * c.weight;
            }
            Ok(acc)
        }
    }
}

pub(crate) fn pure_point_amplitude(pp: &PurePointMeasure, t: f64, hbar: f64) -> Complex64 {
    pp.atoms
        .iter()
        .map(|a| phase(a.energy * t / hbar) * a.weight)
        .sum()
}

fn abs_cont_amplitude(ac: &AbsContMeasure, t: f64, hbar: f64) -> Result<Complex64> {
    let s = t / hbar;
    Ok(match ac {
        AbsContMeasure::Gaussian { mean, sigma } => {
            phase(mean * s) * (-0.5 * (sigma * s).powi(2)).exp()
        }
        AbsContMeasure::Lorentzian { center, gamma } => {
            phase(center * s) * (-(gamma * s).abs()).exp()
        }
        AbsContMeasure::Uniform { a, b } => phase(0.5 * (a + b) * s) * sinc(0.5 * (b - a) * s),
        AbsContMeasure::Tabulated { grid, density } => {
            let integral = oscillatory_linear(grid, density, s).map_err(|e| match e {
                Error::QuadratureFailure { nodes, .. } => Error::QuadratureFailure { t, nodes },
                other => other,
            })?;
            integral / tabulated_mass(grid, density)
        }
    })
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Phase argument and the cosine arguments `scale·t/(3^k ħ)`, k = 1..=depth,
/// of a Cantor transform.
fn cantor_parts(c: &CantorMeasure, t: f64, hbar: f64) -> Result<(f64, Vec<f64>)> {
    let arg = c.scale * t / hbar;
    let bound = arg.abs() * 3f64.powi(-(c.depth as i32));
    if bound > CANTOR_TRUNCATION_TOL {
        return Err(Error::CantorTruncation {
            depth: c.depth,
            t,
            bound,
        });
    }
    let mut args = Vec::with_capacity(c.depth as usize);
    let mut y = arg;
    for _ in 0..c.depth {
        y /= 3.0;
        args.push(y);
    }
    Ok(((c.offset + 0.5 * c.scale) * t / hbar, args))
}

/// `ln |A(t)|²`, evaluated without cancellation where the family allows it.
/// Returns `-∞` when the modulus vanishes.
pub(crate) fn log_modulus_sq(measure: &SpectralMeasure, t: f64, hbar: f64) -> Result<f64> {
    check_hbar(hbar)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t = {t} is not finite")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let s = t / hbar;
    match measure {
        SpectralMeasure::PurePoint(pp) if pp.atoms.len() <= PAIRWISE_ATOM_LIMIT => {
            Ok(pure_point_log_modulus_sq(pp, s))
        }
        SpectralMeasure::AbsCont(AbsContMeasure::Gaussian { sigma, .. }) => {
            Ok(-(sigma * s).powi(2))
        }
        SpectralMeasure::AbsCont(AbsContMeasure::Lorentzian { gamma, .. }) => {
            Ok(-2.0 * (gamma * s).abs())
        }
        SpectralMeasure::AbsCont(AbsContMeasure::Uniform { a, b }) => {
            Ok(2.0 * log_abs_sinc(0.5 * (b - a) * s))
        }
        SpectralMeasure::Cantor(c) => {
            let (_, args) = cantor_parts(c, t, hbar)?;
            let mut total = 0.0;
            for y in args {
                let f = y.cos();
                if f == 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                // ln cos² y = log1p(-sin² y), accurate when cos² y ≈ 1
                total += if f.abs() > 0.5 {
                    (-y.sin().powi(2)).ln_1p()
                } else {
                    (f * f).ln()
                };
            }
            Ok(total)
        }
        _ => {
            let p = amplitude(measure, t, hbar)?.norm_sqr();
            Ok(if p == 0.0 {
                f64::NEG_INFINITY
            } else if p > 0.5 {
                (p - 1.0).ln_1p()
            } else {
                p.ln()
            })
        }
    }
}

/// `1 - |A|² = Σ_{j<l} 4 p_j p_l sin²((λ_j - λ_l)s/2)` has no cancellation,
/// so the log stays accurate all the way to `|A|² → 1`.
fn pure_point_log_modulus_sq(pp: &PurePointMeasure, s: f64) -> f64 {
    let atoms = &pp.atoms;
    let mut defect = 0.0;
    for (j, aj) in atoms.iter().enumerate() {
        for al in &atoms[j + 1..] {
            let half = 0.5 * (aj.energy - al.energy) * s;
            defect += 4.0 * aj.weight * al.weight * half.sin().powi(2);
        }
    }
    if defect < 0.5 {
        (-defect).ln_1p()
    } else {
        let p = pure_point_amplitude(pp, s, 1.0).norm_sqr();
        if p == 0.0 {
            f64::NEG_INFINITY
        } else {
            p.ln()
        }
    }
}

/// `ln |sin x / x|` with a short series near zero.
fn log_abs_sinc(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        -x2 * (1.0 / 6.0 + x2 * (1.0 / 180.0 + x2 * (1.0 / 2835.0 + x2 * (1.0 / 37800.0))))
    } else {
        let v = (x.sin() / x).abs();
        if v == 0.0 {
            f64::NEG_INFINITY
        } else {
            v.ln()
        }
    }
}
