//! Fixed measures shared by the benchmarks.

use zeno_core::SpectralMeasure;

pub fn qubit() -> SpectralMeasure {
    SpectralMeasure::pure_point([(0.0, 0.5), (1.0, 0.5)]).expect("valid qubit")
}

/// `r` equally weighted atoms at integer energies.
pub fn ladder(r: usize) -> SpectralMeasure {
    let w = 1.0 / r as f64;
    SpectralMeasure::pure_point((0..r).map(|k| (k as f64, w))).expect("valid ladder")
}

pub fn triangle(nodes: usize) -> SpectralMeasure {
    let grid: Vec<f64> = (0..nodes)
        .map(|k| -1.0 + 2.0 * k as f64 / (nodes - 1) as f64)
        .collect();
    let density = grid.iter().map(|x| 1.0 - x.abs()).collect();
    SpectralMeasure::tabulated(grid, density).expect("valid triangle")
}

pub fn cantor() -> SpectralMeasure {
    SpectralMeasure::cantor(0.0, 1.0, 40).expect("valid cantor")
}
