use serde::Serialize;

use super::{AbsContMeasure, SpectralMeasure};
use crate::quadrature::GaussLegendre;

/// A non-negative moment that may diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinite)
    }

    /// Plain float view, `+∞` for the sentinel.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// `τ_Z = ħ / ΔH`.
///
/// `Infinite` is the eigenstate case (zero variance, no decay); `Undefined`
/// flags a state outside the Hamiltonian's domain (infinite variance), for
/// which the short-time expansion does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZenoTime {
    Finite(f64),
    Infinite,
    Undefined,
}

impl ZenoTime {
    pub fn finite(self) -> Option<f64> {
        match self {
            ZenoTime::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// Mean energy. Lorentzian components contribute their center (the
/// principal value), since the first moment does not converge absolutely.
pub fn mean(measure: &SpectralMeasure) -> ExtendedReal {
    ExtendedReal::Finite(mean_value(measure))
}

fn mean_value(measure: &SpectralMeasure) -> f64 {
    match measure {
        SpectralMeasure::PurePoint(pp) => pp.atoms.iter().map(|a| a.weight * a.energy).sum(),
        SpectralMeasure::AbsCont(ac) => match ac {
            AbsContMeasure::Gaussian { mean, .. } => *mean,
            AbsContMeasure::Lorentzian { center, .. } => *center,
            AbsContMeasure::Uniform { a, b } => 0.5 * (a + b),
            AbsContMeasure::Tabulated { grid, density } => tabulated_moments(grid, density).0,
        },
        SpectralMeasure::Cantor(c) => c.offset + 0.5 * c.scale,
        SpectralMeasure::Mixture(mix) => mix
            .components
            .iter()
            .map(|c| c.weight * mean_value(&c.measure))
            .sum(),
    }
}

/// Energy variance; mixtures compose by the law of total variance.
pub fn variance(measure: &SpectralMeasure) -> ExtendedReal {
    match measure {
        SpectralMeasure::PurePoint(pp) => {
            let m = mean_value(measure);
            ExtendedReal::Finite(
                pp.atoms
                    .iter()
                    .map(|a| a.weight * (a.energy - m).powi(2))
                    .sum(),
            )
        }
        SpectralMeasure::AbsCont(ac) => match ac {
            AbsContMeasure::Gaussian { sigma, .. } => ExtendedReal::Finite(sigma * sigma),
            AbsContMeasure::Lorentzian { .. } => ExtendedReal::Infinite,
            AbsContMeasure::Uniform { a, b } => ExtendedReal::Finite((b - a).powi(2) / 12.0),
            AbsContMeasure::Tabulated { grid, density } => {
                ExtendedReal::Finite(tabulated_moments(grid, density).1)
            }
        },
        SpectralMeasure::Cantor(c) => ExtendedReal::Finite(c.scale * c.scale / 8.0),
        SpectralMeasure::Mixture(mix) => {
            let m = mean_value(measure);
            let mut total = 0.0;
            for c in &mix.components {
                match variance(&c.measure) {
                    ExtendedReal::Finite(v) => {
                        total += c.weight * (v + (mean_value(&c.measure) - m).powi(2))
                    }
                    ExtendedReal::Infinite => return ExtendedReal::Infinite,
                }
            }
            ExtendedReal::Finite(total)
        }
    }
}

/// Mean and variance of a piecewise-linear density, normalized by its
/// trapezoid mass. Two-point Gauss rules are exact on each segment.
fn tabulated_moments(grid: &[f64], density: &[f64]) -> (f64, f64) {
    let rule = GaussLegendre::new(2);
    let segment_integral = |k: usize, f: &dyn Fn(f64) -> f64| {
        let (x0, x1) = (grid[k], grid[k + 1]);
        let (y0, y1) = (density[k], density[k + 1]);
        let slope = (y1 - y0) / (x1 - x0);
        rule.integrate(x0, x1, |x| (y0 + slope * (x - x0)) * f(x))
    };
    let n = grid.len() - 1;
    let mass: f64 = (0..n).map(|k| segment_integral(k, &|_| 1.0)).sum();
    let m = (0..n).map(|k| segment_integral(k, &|x| x)).sum::<f64>() / mass;
    let var = (0..n)
        .map(|k| segment_integral(k, &|x| (x - m) * (x - m)))
        .sum::<f64>()
        / mass;
    (m, var)
}

/// Zeno time `ħ/√Var(H)`.
pub fn zeno_time(measure: &SpectralMeasure, hbar: f64) -> ZenoTime {
    match variance(measure) {
        ExtendedReal::Infinite => ZenoTime::Undefined,
        ExtendedReal::Finite(0.0) => ZenoTime::Infinite,
        ExtendedReal::Finite(v) => ZenoTime::Finite(hbar / v.sqrt()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_moments() {
        let eps = 0.3;
        let m = SpectralMeasure::pure_point([(0.0, 0.5), (eps, 0.5)]).unwrap();
        assert_eq!(mean(&m), ExtendedReal::Finite(eps / 2.0));
        let v = variance(&m).finite().unwrap();
        assert!((v - eps * eps / 4.0).abs() < 1e-17);
    }

    #[test]
    fn lorentzian_variance_diverges() {
        let m = SpectralMeasure::lorentzian(0.0, 2.0).unwrap();
        assert_eq!(variance(&m), ExtendedReal::Infinite);
        assert_eq!(zeno_time(&m, 1.0), ZenoTime::Undefined);
    }

    #[test]
    fn uniform_variance_matches_quadrature() {
        // independent midpoint sum of x² on [0, 1] minus the squared mean
        let n = 200_000;
        let h = 1.0 / n as f64;
        let second: f64 = (0..n).map(|k| ((k as f64 + 0.5) * h).powi(2) * h).sum();
        let oracle = second - 0.25;
        let m = SpectralMeasure::uniform(0.0, 1.0).unwrap();
        let v = variance(&m).finite().unwrap();
        assert!((v - oracle).abs() < 1e-10);
        assert!((v - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn tabulated_triangle_moments() {
        // symmetric triangle on [-1, 1]: mean 0, variance 1/6
        let m = SpectralMeasure::tabulated(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!(mean(&m).finite().unwrap().abs() < 1e-15);
        assert!((variance(&m).finite().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn cantor_variance_is_an_eighth_of_scale_squared() {
        // Var = Σ_k Var(2 d_k / 3^k) = Σ_k 9^{-k} = 1/8 for unit scale
        let oracle: f64 = (1..60).map(|k| 9f64.powi(-k)).sum();
        let m = SpectralMeasure::cantor(3.0, 1.0, 40).unwrap();
        assert!((variance(&m).finite().unwrap() - oracle).abs() < 1e-16);
        assert_eq!(mean(&m), ExtendedReal::Finite(3.5));
    }

    #[test]
    fn mixture_uses_total_variance() {
        let a = SpectralMeasure::pure_point([(0.0, 1.0)]).unwrap();
        let b = SpectralMeasure::pure_point([(2.0, 1.0)]).unwrap();
        let mix = SpectralMeasure::mixture([(0.5, a), (0.5, b)]).unwrap();
        assert_eq!(variance(&mix), ExtendedReal::Finite(1.0));
        let with_tail = SpectralMeasure::mixture([
            (0.9, mix),
            (0.1, SpectralMeasure::lorentzian(0.0, 1.0).unwrap()),
        ])
        .unwrap();
        assert!(variance(&with_tail).is_infinite());
    }

    #[test]
    fn zeno_time_cases() {
        let eig = SpectralMeasure::pure_point([(4.0, 1.0)]).unwrap();
        assert_eq!(zeno_time(&eig, 1.0), ZenoTime::Infinite);
        let eps = 0.5;
        let hbar = 1.7;
        let q = SpectralMeasure::pure_point([(0.0, 0.5), (eps, 0.5)]).unwrap();
        let tz = zeno_time(&q, hbar).finite().unwrap();
        assert!((tz - 2.0 * hbar / eps).abs() < 1e-14);
    }
}
