//! Composite Gauss–Legendre quadrature for oscillatory integrals against
//! piecewise-linear densities.

use std::f64::consts::PI;
use std::sync::LazyLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre points per panel.
pub const PANEL_ORDER: usize = 8;
/// Hard cap on integrand evaluations for one transform.
pub const NODE_BUDGET: usize = 1 << 22;
/// Successive refinements must agree to this, relative to the unit mass.
pub const REFINEMENT_TOL: f64 = 1e-10;

static PANEL_RULE: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(PANEL_ORDER));

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of P_n by Newton iteration from Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫ ρ(λ) e^{-i ω λ} dλ` for the piecewise-linear `ρ` through
/// `(grid[k], density[k])`.
///
/// Each grid interval is cut into panels no longer than one period of the
/// exponential, and the panel count is doubled until two passes agree.
pub fn oscillatory_linear(grid: &[f64], density: &[f64], omega: f64) -> Result<Complex64> {
    let period = if omega == 0.0 {
        f64::INFINITY
    } else {
        2.0 * PI / omega.abs()
    };
    let base: Vec<usize> = grid
        .windows(2)
        .map(|w| ((w[1] - w[0]) / period).ceil().max(1.0) as usize)
        .collect();
    let base_nodes: usize = base.iter().sum::<usize>().saturating_mul(PANEL_ORDER);
    if base_nodes.saturating_mul(2) > NODE_BUDGET {
        return Err(Error::QuadratureFailure {
            t: omega,
            nodes: base_nodes.saturating_mul(2),
        });
    }

    let mut refine = 1usize;
    let mut previous = composite(grid, density, omega, &base, refine);
    loop {
        refine *= 2;
        let nodes = base_nodes.saturating_mul(refine);
        if nodes > NODE_BUDGET {
            return Err(Error::QuadratureFailure { t: omega, nodes });
        }
        let current = composite(grid, density, omega, &base, refine);
        if (current - previous).norm() <= REFINEMENT_TOL {
            return Ok(current);
        }
        previous = current;
    }
}

fn composite(
    grid: &[f64],
    density: &[f64],
    omega: f64,
    base: &[usize],
    refine: usize,
) -> Complex64 {
    let rule = &*PANEL_RULE;
    let mut total = Complex64::new(0.0, 0.0);
    for (k, panels) in base.iter().enumerate() {
        let (x0, x1) = (grid[k], grid[k + 1]);
        let (y0, y1) = (density[k], density[k + 1]);
        if y0 == 0.0 && y1 == 0.0 {
            continue;
        }
        let slope = (y1 - y0) / (x1 - x0);
        let count = panels * refine;
        let width = (x1 - x0) / count as f64;
        for j in 0..count {
            let a = x0 + j as f64 * width;
            let half = 0.5 * width;
            let mid = a + half;
            let mut acc = Complex64::new(0.0, 0.0);
            for (node, w) in rule.nodes.iter().zip(&rule.weights) {
                let x = mid + half * node;
                let rho = y0 + slope * (x - x0);
                let phase = omega * x;
                acc += Complex64::new(phase.cos(), -phase.sin()) * (w * rho);
            }
            total += acc * half;
        }
    }
    total
}
