//! Brute-force convolution of pure-point measures.
//!
//! The N-th power of an amplitude is the amplitude of the N-fold
//! self-convolution of the measure, so enumerating the convolution gives an
//! independent check of the engine.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::spectral::{
    canonicalize_atoms, char_fn, scale_measure, EnergyAtom, PurePointMeasure, SpectralMeasure,
    ATOM_MERGE_TOL,
};

/// Largest atom count kept after merging.
pub const ATOM_BUDGET: usize = 10_000_000;
/// Largest number of pairwise sums formed before merging.
const PAIR_BUDGET: usize = 100_000_000;

/// Atoms of a convolution. Weights sum to 1 only up to accumulated
/// rounding, so this is kept apart from [`PurePointMeasure`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolvedMeasure {
    pub atoms: Vec<EnergyAtom>,
}

impl From<&PurePointMeasure> for ConvolvedMeasure {
    fn from(pp: &PurePointMeasure) -> Self {
        ConvolvedMeasure {
            atoms: pp.atoms().to_vec(),
        }
    }
}

impl ConvolvedMeasure {
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ w_j e^{-iλ_j t/ħ}`.
    pub fn char_fn(&self, t: f64, hbar: f64) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| {
                let x = a.energy * t / hbar;
                Complex64::new(x.cos(), -x.sin()) * a.weight
            })
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.energy).sum::<f64>() / self.total_weight()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.atoms
            .iter()
            .map(|a| a.weight * (a.energy - m).powi(2))
            .sum::<f64>()
            / self.total_weight()
    }
}

fn convolve_atoms(mu: &[EnergyAtom], nu: &[EnergyAtom]) -> Result<Vec<EnergyAtom>> {
    let pairs = mu.len().saturating_mul(nu.len());
    if pairs > PAIR_BUDGET {
        return Err(Error::AtomBudgetExceeded { count: pairs });
    }
    let mut out = Vec::with_capacity(pairs);
    for a in mu {
        for b in nu {
            out.push(EnergyAtom {
                energy: a.energy + b.energy,
                weight: a.weight * b.weight,
            });
        }
    }
    let merged = canonicalize_atoms(out, ATOM_MERGE_TOL);
    if merged.len() > ATOM_BUDGET {
        return Err(Error::AtomBudgetExceeded {
            count: merged.len(),
        });
    }
    Ok(merged)
}

/// `μ ∗ ν`: atoms at `λ_i + λ'_j` with weights `p_i p'_j`, merged within
/// [`ATOM_MERGE_TOL`].
pub fn convolve_pp(mu: &PurePointMeasure, nu: &PurePointMeasure) -> Result<ConvolvedMeasure> {
    Ok(ConvolvedMeasure {
        atoms: convolve_atoms(mu.atoms(), nu.atoms())?,
    })
}

/// N-fold self-convolution by repeated squaring.
pub fn self_convolve(mu: &PurePointMeasure, n: u64) -> Result<ConvolvedMeasure> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let mut base = mu.atoms().to_vec();
    let mut acc: Option<Vec<EnergyAtom>> = None;
    let mut k = n;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => convolve_atoms(&a, &base)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = convolve_atoms(&base, &base)?;
    }
    Ok(ConvolvedMeasure {
        atoms: acc.expect("n >= 1"),
    })
}

/// Largest `|Â_c(τ)^N - ν̂_N(τ)|` over `tau_grid`, where `Â_c` is the
/// amplitude of `μ` scaled by `c = N^{α-1}` and `ν_N` is the N-fold
/// self-convolution of that scaled measure.
pub fn verify_powers_equal_convolution(
    mu: &PurePointMeasure,
    n: u64,
    tau_grid: &[f64],
    alpha: Exponent,
    hbar: f64,
) -> Result<f64> {
    if n == 0 || n > u32::MAX as u64 {
        return Err(Error::InvalidParameter(format!("N = {n} out of range")));
    }
    let c = alpha.time_scale(n);
    let scaled = scale_measure(&SpectralMeasure::PurePoint(mu.clone()), c);
    let SpectralMeasure::PurePoint(scaled_pp) = &scaled else {
        unreachable!("scaling preserves the variant")
    };
    let nu = self_convolve(scaled_pp, n)?;
    let mut worst = 0.0f64;
    for &tau in tau_grid {
        let lhs = char_fn(&scaled, tau, hbar)?.powu(n as u32);
        let rhs = nu.char_fn(tau, hbar);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(atoms: &[(f64, f64)]) -> PurePointMeasure {
        PurePointMeasure::new(atoms.iter().copied()).unwrap()
    }

    fn pairs(m: &ConvolvedMeasure) -> Vec<(f64, f64)> {
        m.atoms.iter().map(|a| (a.energy, a.weight)).collect()
    }

    #[test]
    fn point_mass_at_zero_is_the_identity() {
        let mu = pp(&[(-1.0, 0.25), (0.5, 0.75)]);
        let c = convolve_pp(&pp(&[(0.0, 1.0)]), &mu).unwrap();
        assert_eq!(pairs(&c), vec![(-1.0, 0.25), (0.5, 0.75)]);
    }

    #[test]
    fn point_mass_shifts() {
        let mu = pp(&[(0.0, 0.5), (1.0, 0.5)]);
        let c = convolve_pp(&pp(&[(2.5, 1.0)]), &mu).unwrap();
        assert_eq!(pairs(&c), vec![(2.5, 0.5), (3.5, 0.5)]);
    }

    #[test]
    fn fair_coin_squared_is_binomial() {
        let mu = pp(&[(0.0, 0.5), (1.0, 0.5)]);
        let c = convolve_pp(&mu, &mu).unwrap();
        assert_eq!(pairs(&c), vec![(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)]);
    }

    #[test]
    fn fourth_power_by_enumeration() {
        let eps = 0.7;
        let mu = pp(&[(0.0, 0.5), (eps, 0.5)]);
        let c = self_convolve(&mu, 4).unwrap();
        // enumerate the 16 outcomes of four coin flips
        let mut counts = [0u32; 5];
        for bits in 0u32..16 {
            counts[bits.count_ones() as usize] += 1;
        }
        assert_eq!(c.len(), 5);
        for (k, atom) in c.atoms.iter().enumerate() {
            assert!((atom.energy - k as f64 * eps).abs() < 1e-12);
            assert_eq!(atom.weight, counts[k] as f64 / 16.0);
        }
    }

    #[test]
    fn three_atoms_cubed_is_multinomial() {
        let atoms = [(0.0, 0.2), (1.0, 0.3), (3.0, 0.5)];
        let c = self_convolve(&pp(&atoms), 3).unwrap();
        let mut oracle = std::collections::BTreeMap::<i64, f64>::new();
        for a in &atoms {
            for b in &atoms {
                for d in &atoms {
                    *oracle.entry((a.0 + b.0 + d.0) as i64).or_default() += a.1 * b.1 * d.1;
                }
            }
        }
        assert_eq!(c.len(), oracle.len());
        for (atom, (&e, &w)) in c.atoms.iter().zip(&oracle) {
            assert!((atom.energy - e as f64).abs() < 1e-12);
            assert!((atom.weight - w).abs() < 1e-15);
        }
    }

    #[test]
    fn single_power_is_the_measure() {
        let mu = pp(&[(0.0, 0.3), (2.0, 0.7)]);
        assert_eq!(self_convolve(&mu, 1).unwrap(), ConvolvedMeasure::from(&mu));
    }

    #[test]
    fn independent_levels_hit_the_budget() {
        // sums of k rationally independent levels only merge by multiset,
        // so the count grows like C(N + r - 1, r - 1)
        let primes = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0f64];
        let mu = PurePointMeasure::new(primes.iter().map(|p| (p.sqrt(), 0.1))).unwrap();
        assert!(matches!(
            self_convolve(&mu, 256).unwrap_err(),
            Error::AtomBudgetExceeded { .. }
        ));
    }

    #[test]
    fn powers_match_convolution() {
        let q = pp(&[(0.0, 0.5), (1.0, 0.5)]);
        let grid: Vec<f64> = (0..32).map(|k| -5.0 + 10.0 * k as f64 / 31.0).collect();
        let one: Exponent = "1".parse().unwrap();
        assert!(verify_powers_equal_convolution(&q, 5, &grid, one, 1.0).unwrap() <= 1e-12);
        let m = pp(&[(0.0, 0.2), (2.0, 0.5), (6.0, 0.3)]);
        let three_halves: Exponent = "3/2".parse().unwrap();
        assert!(verify_powers_equal_convolution(&m, 6, &grid, three_halves, 1.0).unwrap() <= 1e-10);
        let e = pp(&[(4.2, 1.0)]);
        assert!(verify_powers_equal_convolution(&e, 7, &grid, one, 1.0).unwrap() < 1e-13);
    }
}
