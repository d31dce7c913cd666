//! Spectral measures of a state with respect to a Hamiltonian.
//!
//! A measure stands in for the pair (state, Hamiltonian): every survival
//! quantity is a functional of it. Four shapes are supported: finite
//! pure-point measures, a handful of absolutely continuous families, affine
//! images of the middle-thirds Cantor measure, and finite mixtures of these.
//!
//! Measures are plain data and serialize to the JSON measure schema
//! documented in the repository README. Anything built by hand or decoded
//! from JSON must pass through [`validate`] before being evaluated.

mod charfn;
mod moments;
mod transform;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use charfn::log_modulus_sq;
pub use charfn::{char_fn, CANTOR_TRUNCATION_TOL};
pub use moments::{mean, variance, zeno_time, ExtendedReal, ZenoTime};
pub use transform::{scale_measure, shift_measure};

/// Energies closer than this are merged into one atom.
pub const ATOM_MERGE_TOL: f64 = 1e-12;
/// Allowed deviation of pure-point and mixture weights from unit mass.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Allowed deviation of a tabulated density's trapezoid mass from 1.
pub const DENSITY_MASS_TOL: f64 = 1e-9;
pub const DEFAULT_CANTOR_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct EnergyAtom {
    pub energy: f64,
    pub weight: f64,
}

impl From<(f64, f64)> for EnergyAtom {
    fn from((energy, weight): (f64, f64)) -> Self {
        EnergyAtom { energy, weight }
    }
}

impl From<EnergyAtom> for (f64, f64) {
    fn from(atom: EnergyAtom) -> Self {
        (atom.energy, atom.weight)
    }
}

/// Finitely many eigenvalues with their occupation probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurePointMeasure {
    pub atoms: Vec<EnergyAtom>,
}

impl PurePointMeasure {
    /// Builds a canonical measure: atoms sorted by energy, coincident
    /// energies merged, weights checked to sum to one.
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        PurePointMeasure {
            atoms: atoms.into_iter().map(EnergyAtom::from).collect(),
        }
        .validated()
    }

    pub fn atoms(&self) -> &[EnergyAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    fn validated(&self) -> Result<Self> {
        if self.atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for atom in &self.atoms {
            if !atom.energy.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "atom energy {} is not finite",
                    atom.energy
                )));
            }
            if !(atom.weight > 0.0 && atom.weight <= 1.0 + WEIGHT_SUM_TOL) {
                return Err(Error::InvalidParameter(format!(
                    "atom weight {} outside (0, 1]",
                    atom.weight
                )));
            }
        }
        let total: f64 = self.atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::NonNormalized {
                total,
                tolerance: WEIGHT_SUM_TOL,
            });
        }
        Ok(PurePointMeasure {
            atoms: canonicalize_atoms(self.atoms.clone(), ATOM_MERGE_TOL),
        })
    }
}

/// Sorts atoms by energy and merges clusters lying within `tol` of the
/// cluster's lowest energy. The merged energy is the weighted mean.
pub(crate) fn canonicalize_atoms(mut atoms: Vec<EnergyAtom>, tol: f64) -> Vec<EnergyAtom> {
    atoms.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let mut out: Vec<EnergyAtom> = Vec::with_capacity(atoms.len());
    let mut anchor = f64::NEG_INFINITY;
    let mut moment = 0.0;
    for atom in atoms {
        match out.last_mut() {
            Some(last) if atom.energy - anchor <= tol => {
                last.weight += atom.weight;
                moment += atom.weight * atom.energy;
                last.energy = moment / last.weight;
            }
            _ => {
                anchor = atom.energy;
                moment = atom.weight * atom.energy;
                out.push(atom);
            }
        }
    }
    out
}

/// Trapezoid mass of a tabulated density, exact for its piecewise-linear
/// interpolant.
pub fn tabulated_mass(grid: &[f64], density: &[f64]) -> f64 {
    grid.windows(2)
        .zip(density.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

fn check_tabulated(grid: &[f64], density: &[f64]) -> Result<()> {
    if grid.len() != density.len() {
        return Err(Error::InvalidParameter(format!(
            "tabulated grid has {} nodes but density has {}",
            grid.len(),
            density.len()
        )));
    }
    if grid.len() < 2 {
        return Err(Error::EmptyMeasure);
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "tabulated grid is not finite".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "tabulated grid must be strictly increasing".into(),
        ));
    }
    for (index, &value) in density.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density at node {index} is not finite"
            )));
        }
        if value < 0.0 {
            return Err(Error::NegativeDensity { index, value });
        }
    }
    let total = tabulated_mass(grid, density);
    if (total - 1.0).abs() > DENSITY_MASS_TOL {
        return Err(Error::NonNormalized {
            total,
            tolerance: DENSITY_MASS_TOL,
        });
    }
    Ok(())
}

/// Absolutely continuous families. A tabulated density is linearly
/// interpolated between its grid nodes and vanishes outside the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum AbsContMeasure {
    Gaussian { mean: f64, sigma: f64 },
    Lorentzian { center: f64, gamma: f64 },
    Uniform { a: f64, b: f64 },
    Tabulated { grid: Vec<f64>, density: Vec<f64> },
}

impl AbsContMeasure {
    fn check(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} = {v} is not finite"
                )))
            }
        };
        match self {
            AbsContMeasure::Gaussian { mean, sigma } => {
                finite("mean", *mean)?;
                finite("sigma", *sigma)?;
                if *sigma <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "sigma = {sigma} must be > 0"
                    )));
                }
            }
            AbsContMeasure::Lorentzian { center, gamma } => {
                finite("center", *center)?;
                finite("gamma", *gamma)?;
                if *gamma <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "gamma = {gamma} must be > 0"
                    )));
                }
            }
            AbsContMeasure::Uniform { a, b } => {
                finite("a", *a)?;
                finite("b", *b)?;
                if a >= b {
                    return Err(Error::InvalidParameter(format!(
                        "uniform support [{a}, {b}] is empty"
                    )));
                }
            }
            AbsContMeasure::Tabulated { grid, density } => check_tabulated(grid, density)?,
        }
        Ok(())
    }

    /// Lowest point of the support, if finite.
    fn lower_bound(&self) -> Option<f64> {
        match self {
            AbsContMeasure::Gaussian { .. } | AbsContMeasure::Lorentzian { .. } => None,
            AbsContMeasure::Uniform { a, .. } => Some(*a),
            AbsContMeasure::Tabulated { grid, .. } => grid.first().copied(),
        }
    }
}

/// Middle-thirds Cantor measure carried affinely onto `[offset, offset + scale]`.
///
/// `depth` is the number of ternary digits kept in the cosine product used
/// for its Fourier transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorMeasure {
    pub offset: f64,
    pub scale: f64,
    #[serde(default = "default_depth")]
    pub depth: u32,
}

fn default_depth() -> u32 {
    DEFAULT_CANTOR_DEPTH
}

impl CantorMeasure {
    pub fn new(offset: f64, scale: f64) -> Result<Self> {
        Self::with_depth(offset, scale, DEFAULT_CANTOR_DEPTH)
    }

    pub fn with_depth(offset: f64, scale: f64, depth: u32) -> Result<Self> {
        let m = CantorMeasure {
            offset,
            scale,
            depth,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        if !self.offset.is_finite() || !self.scale.is_finite() || self.scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cantor offset {} / scale {} invalid (scale must be > 0)",
                self.offset, self.scale
            )));
        }
        if self.depth == 0 {
            return Err(Error::InvalidParameter("cantor depth must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub measure: SpectralMeasure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mixture {
    pub components: Vec<MixtureComponent>,
}

/// The spectral measure of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SpectralMeasure {
    #[serde(rename = "pp")]
    PurePoint(PurePointMeasure),
    #[serde(rename = "ac")]
    AbsCont(AbsContMeasure),
    #[serde(rename = "cantor")]
    Cantor(CantorMeasure),
    #[serde(rename = "mixture")]
    Mixture(Mixture),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralType {
    #[serde(rename = "pp")]
    PurePoint,
    #[serde(rename = "ac")]
    AbsCont,
    #[serde(rename = "sc")]
    SingularCont,
    Mixed,
}

impl SpectralType {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralType::PurePoint => "pp",
            SpectralType::AbsCont => "ac",
            SpectralType::SingularCont => "sc",
            SpectralType::Mixed => "mixed",
        }
    }
}

impl fmt::Display for SpectralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Checks every invariant and returns the canonical form of `measure`.
pub fn validate(measure: &SpectralMeasure) -> Result<SpectralMeasure> {
    match measure {
        SpectralMeasure::PurePoint(pp) => Ok(SpectralMeasure::PurePoint(pp.validated()?)),
        SpectralMeasure::AbsCont(ac) => {
            ac.check()?;
            Ok(measure.clone())
        }
        SpectralMeasure::Cantor(c) => {
            c.check()?;
            Ok(measure.clone())
        }
        SpectralMeasure::Mixture(mix) => {
            if mix.components.is_empty() {
                return Err(Error::EmptyMeasure);
            }
            let mut components = Vec::with_capacity(mix.components.len());
            let mut total = 0.0;
            for c in &mix.components {
                if !(c.weight.is_finite() && c.weight > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "mixture weight {} must be positive",
                        c.weight
                    )));
                }
                total += c.weight;
                components.push(MixtureComponent {
                    weight: c.weight,
                    measure: validate(&c.measure)?,
                });
            }
            if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                return Err(Error::NonNormalized {
                    total,
                    tolerance: WEIGHT_SUM_TOL,
                });
            }
            Ok(SpectralMeasure::Mixture(Mixture { components }))
        }
    }
}

impl SpectralMeasure {
    pub fn pure_point<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Ok(SpectralMeasure::PurePoint(PurePointMeasure::new(atoms)?))
    }

    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        validate(&SpectralMeasure::AbsCont(AbsContMeasure::Gaussian {
            mean,
            sigma,
        }))
    }

    pub fn lorentzian(center: f64, gamma: f64) -> Result<Self> {
        validate(&SpectralMeasure::AbsCont(AbsContMeasure::Lorentzian {
            center,
            gamma,
        }))
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        validate(&SpectralMeasure::AbsCont(AbsContMeasure::Uniform { a, b }))
    }

    pub fn tabulated(grid: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        validate(&SpectralMeasure::AbsCont(AbsContMeasure::Tabulated {
            grid,
            density,
        }))
    }

    pub fn cantor(offset: f64, scale: f64, depth: u32) -> Result<Self> {
        Ok(SpectralMeasure::Cantor(CantorMeasure::with_depth(
            offset, scale, depth,
        )?))
    }

    pub fn mixture<I>(components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, SpectralMeasure)>,
    {
        validate(&SpectralMeasure::Mixture(Mixture {
            components: components
                .into_iter()
                .map(|(weight, measure)| MixtureComponent { weight, measure })
                .collect(),
        }))
    }

    /// Classification by variant; a mixture whose leaves share one type
    /// reports that type.
    pub fn spectral_type(&self) -> SpectralType {
        match self {
            SpectralMeasure::PurePoint(_) => SpectralType::PurePoint,
            SpectralMeasure::AbsCont(_) => SpectralType::AbsCont,
            SpectralMeasure::Cantor(_) => SpectralType::SingularCont,
            SpectralMeasure::Mixture(mix) => {
                let mut kinds = mix.components.iter().map(|c| c.measure.spectral_type());
                let first = kinds.next().unwrap_or(SpectralType::Mixed);
                if kinds.all(|k| k == first) {
                    first
                } else {
                    SpectralType::Mixed
                }
            }
        }
    }

    /// Collapses the measure to a single pure-point measure when every
    /// leaf is pure point.
    pub fn as_pure_point(&self) -> Option<PurePointMeasure> {
        match self {
            SpectralMeasure::PurePoint(pp) => Some(pp.clone()),
            SpectralMeasure::Mixture(mix) => {
                let mut atoms = Vec::new();
                for c in &mix.components {
                    let pp = c.measure.as_pure_point()?;
                    atoms.extend(pp.atoms.iter().map(|a| EnergyAtom {
                        energy: a.energy,
                        weight: c.weight * a.weight,
                    }));
                }
                Some(PurePointMeasure {
                    atoms: canonicalize_atoms(atoms, ATOM_MERGE_TOL),
                })
            }
            _ => None,
        }
    }

    /// Whether the support has a finite lower end (the Hamiltonian is
    /// bounded below on the cyclic subspace of the state).
    pub fn is_bounded_below(&self) -> bool {
        self.lower_bound().is_some()
    }

    pub fn lower_bound(&self) -> Option<f64> {
        match self {
            SpectralMeasure::PurePoint(pp) => pp.atoms.first().map(|a| a.energy),
            SpectralMeasure::AbsCont(ac) => ac.lower_bound(),
            SpectralMeasure::Cantor(c) => Some(c.offset),
            SpectralMeasure::Mixture(mix) => mix
                .components
                .iter()
                .map(|c| c.measure.lower_bound())
                .try_fold(f64::INFINITY, |lo, b| b.map(|b| lo.min(b))),
        }
    }

    /// True for a single point mass.
    pub fn is_eigenstate(&self) -> bool {
        matches!(variance(self), ExtendedReal::Finite(v) if v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_atoms_pass_unchanged() {
        let m = PurePointMeasure::new([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(
            m.atoms(),
            &[
                EnergyAtom {
                    energy: 0.0,
                    weight: 0.5
                },
                EnergyAtom {
                    energy: 1.0,
                    weight: 0.5
                }
            ]
        );
    }

    #[test]
    fn identical_atoms_merge() {
        let m = PurePointMeasure::new([(0.0, 0.5), (0.0, 0.5)]).unwrap();
        assert_eq!(
            m.atoms(),
            &[EnergyAtom {
                energy: 0.0,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn atoms_are_sorted() {
        let m = PurePointMeasure::new([(2.0, 0.25), (-1.0, 0.75)]).unwrap();
        assert_eq!(m.atoms()[0].energy, -1.0);
        assert_eq!(m.atoms()[1].energy, 2.0);
    }

    #[test]
    fn short_weights_are_rejected() {
        let err = PurePointMeasure::new([(0.0, 0.3), (1.0, 0.3)]).unwrap_err();
        assert!(matches!(err, Error::NonNormalized { total, .. } if (total - 0.6).abs() < 1e-15));
    }

    #[test]
    fn empty_measure_is_rejected() {
        assert_eq!(
            PurePointMeasure::new(Vec::<(f64, f64)>::new()).unwrap_err(),
            Error::EmptyMeasure
        );
        assert_eq!(
            SpectralMeasure::mixture(Vec::new()).unwrap_err(),
            Error::EmptyMeasure
        );
    }

    #[test]
    fn negative_density_is_reported_with_its_node() {
        let err =
            SpectralMeasure::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, -0.5, 1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::NegativeDensity {
                index: 1,
                value: -0.5
            }
        );
    }

    #[test]
    fn tabulated_mass_must_be_one() {
        assert!(SpectralMeasure::tabulated(vec![0.0, 1.0], vec![1.0, 1.0]).is_ok());
        assert!(matches!(
            SpectralMeasure::tabulated(vec![0.0, 1.0], vec![1.0, 1.1]).unwrap_err(),
            Error::NonNormalized { .. }
        ));
    }

    #[test]
    fn family_parameters_are_checked() {
        assert!(SpectralMeasure::gaussian(0.0, 0.0).is_err());
        assert!(SpectralMeasure::lorentzian(0.0, -1.0).is_err());
        assert!(SpectralMeasure::uniform(1.0, 1.0).is_err());
        assert!(SpectralMeasure::cantor(0.0, 1.0, 0).is_err());
        assert!(SpectralMeasure::cantor(0.0, -1.0, 10).is_err());
    }

    #[test]
    fn mixture_weights_must_sum_to_one() {
        let q = SpectralMeasure::pure_point([(0.0, 1.0)]).unwrap();
        let g = SpectralMeasure::gaussian(0.0, 1.0).unwrap();
        assert!(SpectralMeasure::mixture([(0.5, q.clone()), (0.5, g.clone())]).is_ok());
        assert!(matches!(
            SpectralMeasure::mixture([(0.5, q), (0.4, g)]).unwrap_err(),
            Error::NonNormalized { .. }
        ));
    }

    #[test]
    fn spectral_types() {
        let pp = SpectralMeasure::pure_point([(0.0, 1.0)]).unwrap();
        let ac = SpectralMeasure::uniform(0.0, 1.0).unwrap();
        let sc = SpectralMeasure::cantor(0.0, 1.0, 40).unwrap();
        assert_eq!(pp.spectral_type(), SpectralType::PurePoint);
        assert_eq!(ac.spectral_type(), SpectralType::AbsCont);
        assert_eq!(sc.spectral_type(), SpectralType::SingularCont);
        let mixed = SpectralMeasure::mixture([(0.5, pp.clone()), (0.5, ac)]).unwrap();
        assert_eq!(mixed.spectral_type(), SpectralType::Mixed);
        let pp2 = SpectralMeasure::pure_point([(1.0, 1.0)]).unwrap();
        let both_pp = SpectralMeasure::mixture([(0.5, pp), (0.5, pp2)]).unwrap();
        assert_eq!(both_pp.spectral_type(), SpectralType::PurePoint);
    }

    #[test]
    fn pure_point_mixture_flattens() {
        let a = SpectralMeasure::pure_point([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let b = SpectralMeasure::pure_point([(1.0, 1.0)]).unwrap();
        let mix = SpectralMeasure::mixture([(0.5, a), (0.5, b)]).unwrap();
        let flat = mix.as_pure_point().unwrap();
        assert_eq!(
            flat.atoms(),
            &[
                EnergyAtom {
                    energy: 0.0,
                    weight: 0.25
                },
                EnergyAtom {
                    energy: 1.0,
                    weight: 0.75
                },
            ]
        );
    }

    #[test]
    fn boundedness_follows_support() {
        assert!(SpectralMeasure::uniform(-2.0, 1.0)
            .unwrap()
            .is_bounded_below());
        assert!(!SpectralMeasure::gaussian(0.0, 1.0)
            .unwrap()
            .is_bounded_below());
        let mix = SpectralMeasure::mixture([
            (0.5, SpectralMeasure::cantor(3.0, 1.0, 40).unwrap()),
            (0.5, SpectralMeasure::pure_point([(-1.0, 1.0)]).unwrap()),
        ])
        .unwrap();
        assert_eq!(mix.lower_bound(), Some(-1.0));
    }
}
