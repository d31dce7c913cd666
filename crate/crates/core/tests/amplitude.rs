use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeno_core::{
    char_fn, scale_measure, shift_measure, survival_probability, variance, SpectralMeasure,
};

fn pure_point() -> impl Strategy<Value = SpectralMeasure> {
    prop::collection::vec((-5.0f64..5.0, 0.05f64..1.0), 1..=4).prop_map(|atoms| {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        SpectralMeasure::pure_point(atoms.into_iter().map(|(e, w)| (e, w / total))).unwrap()
    })
}

fn any_measure() -> impl Strategy<Value = SpectralMeasure> {
    prop_oneof![
        pure_point(),
        (-2.0f64..2.0, 0.1f64..2.0).prop_map(|(m, s)| SpectralMeasure::gaussian(m, s).unwrap()),
        (-2.0f64..2.0, 0.1f64..2.0).prop_map(|(c, g)| SpectralMeasure::lorentzian(c, g).unwrap()),
        (-2.0f64..2.0, 0.1f64..3.0).prop_map(|(a, w)| SpectralMeasure::uniform(a, a + w).unwrap()),
        (-2.0f64..2.0, 0.1f64..3.0).prop_map(|(o, s)| SpectralMeasure::cantor(o, s, 40).unwrap()),
        (-2.0f64..2.0, 0.1f64..2.0).prop_map(|(a, w)| {
            SpectralMeasure::tabulated(vec![a, a + w, a + 2.0 * w], vec![0.0, 1.0 / w, 0.0])
                .unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn amplitude_is_bounded_and_hermitian(m in any_measure(), t in -8.0f64..8.0) {
        let a = char_fn(&m, t, 1.0).unwrap();
        let b = char_fn(&m, -t, 1.0).unwrap();
        prop_assert!(a.norm() <= 1.0 + 1e-10);
        prop_assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn scaling_rescales_time(m in any_measure(), c in 0.2f64..3.0, t in -3.0f64..3.0) {
        let scaled = scale_measure(&m, c);
        let lhs = char_fn(&scaled, t, 1.0).unwrap();
        let rhs = char_fn(&m, c * t, 1.0).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn shift_changes_only_the_phase(m in any_measure(), a in -10.0f64..10.0, t in -3.0f64..3.0) {
        let shifted = shift_measure(&m, a);
        let lhs = char_fn(&shifted, t, 1.0).unwrap();
        let rhs = char_fn(&m, t, 1.0).unwrap() * Complex64::new((a * t).cos(), -(a * t).sin());
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn hbar_enters_only_through_t_over_hbar(m in any_measure(), t in -3.0f64..3.0, h in 0.2f64..5.0) {
        let lhs = char_fn(&m, t * h, h).unwrap();
        let rhs = char_fn(&m, t, 1.0).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn curvature_at_zero_is_twice_the_variance(m in any_measure()) {
        if let Some(v) = variance(&m).finite() {
            prop_assume!(v > 1e-6);
            let h = 1e-3 / v.sqrt();
            let p = |t: f64| survival_probability(&m, t, 1.0).unwrap();
            let curvature = -(p(h) - 2.0 + p(-h)) / (h * h);
            prop_assert!((curvature - 2.0 * v).abs() <= 1e-4 * 2.0 * v, "{curvature} vs {}", 2.0 * v);
        }
    }
}

/// Composite Simpson rule on a uniform grid.
fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + k as f64 * h) * w;
    }
    s * (h / 3.0)
}

#[test]
fn gaussian_closed_form_matches_quadrature() {
    let (mu, sigma) = (0.7, 1.3);
    let m = SpectralMeasure::gaussian(mu, sigma).unwrap();
    for t in [0.1, 1.0, 2.5, 4.0] {
        let oracle = simpson(mu - 14.0 * sigma, mu + 14.0 * sigma, 40_000, |x| {
            let rho =
                (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
            Complex64::new((x * t).cos(), -(x * t).sin()) * rho
        });
        let got = char_fn(&m, t, 1.0).unwrap();
        assert!((got - oracle).norm() < 1e-12, "t = {t}: {got} vs {oracle}");
    }
}

#[test]
fn cantor_product_matches_monte_carlo() {
    // sample X = Σ 2 d_k / 3^k with fair random digits
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples: Vec<f64> = (0..1_000_000)
        .map(|_| {
            let bits: u64 = rng.random();
            (0..40)
                .map(|k| ((bits >> k) & 1) as f64 * 2.0 * 3f64.powi(-(k + 1)))
                .sum()
        })
        .collect();
    let m = SpectralMeasure::cantor(0.0, 1.0, 40).unwrap();
    for t in [0.5, 3.0, 9.0, 30.0] {
        let mc: Complex64 = samples
            .iter()
            .map(|&x| Complex64::new((x * t).cos(), -(x * t).sin()))
            .sum::<Complex64>()
            / samples.len() as f64;
        let got = char_fn(&m, t, 1.0).unwrap();
        assert!((got - mc).norm() < 3e-3, "t = {t}: {got} vs {mc}");
    }
}

/// Exact `∫ ρ e^{-iωx}` for piecewise-linear `ρ`, integrated segment by
/// segment in closed form.
fn piecewise_linear_transform(grid: &[f64], density: &[f64], w: f64) -> Complex64 {
    let i = Complex64::i();
    let e = |x: f64| Complex64::new((w * x).cos(), -(w * x).sin());
    // ∫ e^{-iωx} = e/(-iω), ∫ x e^{-iωx} = x e/(-iω) + e/ω²
    let f0 = |x: f64| e(x) / (-i * w);
    let f1 = |x: f64| x * e(x) / (-i * w) + e(x) / (w * w);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..grid.len() - 1 {
        let (x0, x1, y0, y1) = (grid[k], grid[k + 1], density[k], density[k + 1]);
        let s = (y1 - y0) / (x1 - x0);
        let c = y0 - s * x0;
        total += c * (f0(x1) - f0(x0)) + s * (f1(x1) - f1(x0));
    }
    total
}

#[test]
fn tabulated_density_matches_exact_linear_transform() {
    let grid = vec![-1.0, -0.2, 0.5, 1.7, 2.0];
    let raw = [0.0, 0.9, 0.4, 0.6, 0.0];
    let mass: f64 = (0..4)
        .map(|k| 0.5 * (grid[k + 1] - grid[k]) * (raw[k] + raw[k + 1]))
        .sum();
    let density: Vec<f64> = raw.iter().map(|y| y / mass).collect();
    let m = SpectralMeasure::tabulated(grid.clone(), density.clone()).unwrap();
    for t in [0.3, 2.0, 11.0, 75.0, 400.0] {
        let oracle = piecewise_linear_transform(&grid, &density, t);
        let got = char_fn(&m, t, 1.0).unwrap();
        assert!((got - oracle).norm() < 1e-9, "t = {t}: {got} vs {oracle}");
    }
}

#[test]
fn uniform_is_the_flat_tabulated_density() {
    let u = SpectralMeasure::uniform(-0.5, 1.5).unwrap();
    let tab = SpectralMeasure::tabulated(vec![-0.5, 1.5], vec![0.5, 0.5]).unwrap();
    for t in [0.1, 1.0, 7.0, 50.0] {
        let d = char_fn(&u, t, 1.0).unwrap() - char_fn(&tab, t, 1.0).unwrap();
        assert!(d.norm() < 1e-10, "{t}");
    }
}

#[test]
fn mixture_amplitude_is_the_weighted_sum() {
    let g = SpectralMeasure::gaussian(0.0, 1.0).unwrap();
    let q = SpectralMeasure::pure_point([(0.0, 0.5), (1.0, 0.5)]).unwrap();
    let mix = SpectralMeasure::mixture([(0.25, g.clone()), (0.75, q.clone())]).unwrap();
    for t in [0.4, 2.2] {
        let expect = char_fn(&g, t, 1.0).unwrap() * 0.25 + char_fn(&q, t, 1.0).unwrap() * 0.75;
        assert!((char_fn(&mix, t, 1.0).unwrap() - expect).norm() < 1e-15);
    }
}
