use super::{
    canonicalize_atoms, AbsContMeasure, CantorMeasure, EnergyAtom, Mixture, MixtureComponent,
    PurePointMeasure, SpectralMeasure, ATOM_MERGE_TOL,
};

/// Pushforward under `λ ↦ cλ`: the spectral measure of `cH`.
///
/// # Panics
/// If `c` is not a positive finite number.
pub fn scale_measure(measure: &SpectralMeasure, c: f64) -> SpectralMeasure {
    assert!(
        c.is_finite() && c > 0.0,
        "scale factor must be positive, got {c}"
    );
    map_affine(measure, c, 0.0)
}

/// Pushforward under `λ ↦ λ + a`. Only the phase of the amplitude changes.
///
/// # Panics
/// If `a` is not finite.
pub fn shift_measure(measure: &SpectralMeasure, a: f64) -> SpectralMeasure {
    assert!(a.is_finite(), "shift must be finite, got {a}");
    map_affine(measure, 1.0, a)
}

fn map_affine(measure: &SpectralMeasure, c: f64, a: f64) -> SpectralMeasure {
    if c == 1.0 && a == 0.0 {
        return measure.clone();
    }
    let f = |x: f64| c * x + a;
    match measure {
        SpectralMeasure::PurePoint(pp) => {
            let atoms = pp
                .atoms
                .iter()
                .map(|at| EnergyAtom {
                    energy: f(at.energy),
                    weight: at.weight,
                })
                .collect();
            SpectralMeasure::PurePoint(PurePointMeasure {
                atoms: canonicalize_atoms(atoms, ATOM_MERGE_TOL),
            })
        }
        SpectralMeasure::AbsCont(ac) => SpectralMeasure::AbsCont(match ac {
            AbsContMeasure::Gaussian { mean, sigma } => AbsContMeasure::Gaussian {
                mean: f(*mean),
                sigma: c * sigma,
            },
            AbsContMeasure::Lorentzian { center, gamma } => AbsContMeasure::Lorentzian {
                center: f(*center),
                gamma: c * gamma,
            },
            AbsContMeasure::Uniform { a: lo, b: hi } => AbsContMeasure::Uniform {
                a: f(*lo),
                b: f(*hi),
            },
            AbsContMeasure::Tabulated { grid, density } => AbsContMeasure::Tabulated {
                grid: grid.iter().map(|&x| f(x)).collect(),
                density: density.iter().map(|&y| y / c).collect(),
            },
        }),
        SpectralMeasure::Cantor(cm) => SpectralMeasure::Cantor(CantorMeasure {
            offset: f(cm.offset),
            scale: c * cm.scale,
            depth: cm.depth,
        }),
        SpectralMeasure::Mixture(mix) => SpectralMeasure::Mixture(Mixture {
            components: mix
                .components
                .iter()
                .map(|comp| MixtureComponent {
                    weight: comp.weight,
                    measure: map_affine(&comp.measure, c, a),
                })
                .collect(),
        }),
    }
}
