//! Named verification suites run by `zeno verify`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use zeno_core::{
    analyze_commensurability, recurrence_subsequence, scaled_zeno_product, self_convolve,
    survival_probability, taylor_check, verify_powers_equal_convolution, verify_prediction,
    zeno_time, Error, Exponent, PurePointMeasure, SpectralMeasure, ZenoParams, ZenoTime,
};

use crate::{CliError, CliResult};

pub const SUITES: [&str; 5] = [
    "convolution",
    "thresholds",
    "lattice",
    "recurrence",
    "taylor",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub bound: f64,
}

impl Check {
    /// Passes when `measured ≤ bound`.
    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured <= bound,
            measured,
            bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn run_suite(name: &str, seed: u64) -> CliResult<SuiteReport> {
    let checks = match name {
        "convolution" => convolution(seed)?,
        "thresholds" => thresholds()?,
        "lattice" => lattice(seed)?,
        "recurrence" => recurrence()?,
        "taylor" => taylor()?,
        other => {
            return Err(CliError::Schema(format!(
                "unknown suite {other:?}, expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        checks,
    })
}

fn qubit() -> SpectralMeasure {
    SpectralMeasure::pure_point([(0.0, 0.5), (1.0, 0.5)]).expect("valid qubit")
}

fn exact(s: &str) -> Exponent {
    s.parse().expect("literal exponent")
}

/// A pure-point measure with `1..=max_atoms` atoms, energies in [-3, 3].
pub fn random_pure_point(rng: &mut ChaCha8Rng, max_atoms: usize) -> PurePointMeasure {
    let r = rng.random_range(1..=max_atoms);
    let atoms: Vec<(f64, f64)> = (0..r)
        .map(|_| (rng.random_range(-3.0..3.0), rng.random_range(0.05..1.0)))
        .collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    PurePointMeasure::new(atoms.into_iter().map(|(e, w)| (e, w / total)))
        .expect("normalized random measure")
}

/// Levels `a + k δ` with distinct integer `k`.
pub fn random_commensurable(rng: &mut ChaCha8Rng, max_atoms: usize) -> PurePointMeasure {
    let r = rng.random_range(2..=max_atoms);
    let delta = rng.random_range(0.2..2.0);
    let a = rng.random_range(-2.0..2.0);
    let mut ks: Vec<i64> = Vec::new();
    while ks.len() < r {
        let k = rng.random_range(0..12);
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    let w = 1.0 / r as f64;
    PurePointMeasure::new(ks.into_iter().map(|k| (a + k as f64 * delta, w)))
        .expect("valid commensurable measure")
}

fn convolution(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for case in 0..50 {
        let mu = random_pure_point(&mut rng, 4);
        let n = rng.random_range(1..=8u64);
        let taus: Vec<f64> = (0..32).map(|_| rng.random_range(-5.0..5.0)).collect();
        for alpha in ["1", "3/2"] {
            let err = verify_powers_equal_convolution(&mu, n, &taus, exact(alpha), 1.0)?;
            checks.push(Check::at_most(
                format!("fourier_homomorphism[{case}] N={n} alpha={alpha}"),
                err,
                1e-10,
            ));
        }
        let nu = self_convolve(&mu, n)?;
        checks.push(Check::at_most(
            format!("mass[{case}] N={n}"),
            (nu.total_weight() - 1.0).abs(),
            n as f64 * 1e-12,
        ));
    }
    Ok(checks)
}

fn thresholds() -> CliResult<Vec<Check>> {
    let schedule = [100, 1_000, 10_000, 100_000, 1_000_000];
    let mut checks = Vec::new();
    for (alpha, bound) in [("0.3", 1e-3), ("1/2", 5e-3), ("0.8", 1e-3)] {
        let report = verify_prediction(&qubit(), exact(alpha), 1.0, 1.0, &schedule)?;
        let gap = report.final_gap.unwrap_or(f64::INFINITY);
        checks.push(Check {
            name: format!(
                "qubit alpha={alpha} regime={}",
                report.prediction.regime.tag()
            ),
            pass: report.agrees == Some(true),
            measured: gap,
            bound,
        });
    }
    Ok(checks)
}

/// First time after the initial decay where `p` returns to 1: the first grid
/// maximum above `1 - 1e-4`, refined by golden-section search.
pub fn first_return_by_scan(
    measure: &SpectralMeasure,
    hbar: f64,
    t_max: f64,
    steps: usize,
) -> CliResult<Option<f64>> {
    let h = t_max / steps as f64;
    let p = |t: f64| survival_probability(measure, t, hbar);
    let mut k = 1;
    while k <= steps && p(k as f64 * h)? >= 0.99 {
        k += 1;
    }
    while k <= steps && p(k as f64 * h)? <= 1.0 - 1e-4 {
        k += 1;
    }
    if k > steps {
        return Ok(None);
    }
    while k < steps && p((k + 1) as f64 * h)? >= p(k as f64 * h)? {
        k += 1;
    }
    let (mut a, mut b) = ((k - 1) as f64 * h, (k + 1) as f64 * h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if p(c)? > p(d)? {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

fn lattice(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = vec![
        (
            "levels 0,1,2".to_string(),
            PurePointMeasure::new([(0.0, 0.3), (1.0, 0.3), (2.0, 0.4)])?,
        ),
        (
            "levels 0,2,6".to_string(),
            PurePointMeasure::new([(0.0, 0.3), (2.0, 0.3), (6.0, 0.4)])?,
        ),
    ];
    for j in 0..8 {
        cases.push((format!("random[{j}]"), random_commensurable(&mut rng, 4)));
    }
    let mut checks = Vec::new();
    for (label, pp) in cases {
        let c = analyze_commensurability(&pp, 1.0, 1_000_000, 1e-9)?;
        let tr = c.first_return_time;
        let m = SpectralMeasure::PurePoint(pp);
        let steps = (tr * 1.5 / 2e-4).ceil() as usize;
        let scanned = first_return_by_scan(&m, 1.0, tr * 1.5, steps)?;
        checks.push(Check::at_most(
            format!("{label} first return vs grid scan"),
            scanned.map_or(f64::INFINITY, |s| (s - tr).abs()),
            1e-6,
        ));
        let worst = (1..=10)
            .map(|k| survival_probability(&m, k as f64 * tr, 1.0).map(|p| (1.0 - p).abs()))
            .collect::<zeno_core::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("{label} p(k tau_R) = 1"),
            worst,
            1e-9,
        ));
        let interior = (1..100)
            .map(|j| survival_probability(&m, tr * j as f64 / 100.0, 1.0))
            .collect::<zeno_core::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("{label} interior max p"),
            interior,
            1.0 - 1e-6,
        ));
    }
    Ok(checks)
}

fn recurrence() -> CliResult<Vec<Check>> {
    let m = SpectralMeasure::pure_point([(0.0, 0.3), (2.0, 0.3), (6.0, 0.4)])?;
    let tr = PI;
    let mut checks = Vec::new();
    for (alpha, members, others) in [("3/2", 10, [2u64, 3, 5]), ("5/3", 4, [2, 9, 10])] {
        let a = exact(alpha);
        for n in recurrence_subsequence(a, members)? {
            for multiple in [1.0, 2.0] {
                let lp = scaled_zeno_product(&m, &ZenoParams::new(n, a, multiple * tr, 1.0)?)?;
                checks.push(Check::at_most(
                    format!("alpha={alpha} N={n} tau={multiple} tau_R"),
                    (1.0 - lp.p()).abs(),
                    1e-12,
                ));
            }
        }
        for n in others {
            let lp = scaled_zeno_product(&m, &ZenoParams::new(n, a, tr, 1.0)?)?;
            checks.push(Check {
                name: format!("alpha={alpha} off-subsequence N={n}"),
                pass: lp.p() < 1.0 - 1e-6,
                measured: 1.0 - lp.p(),
                bound: 1e-6,
            });
        }
    }
    Ok(checks)
}

/// `-p''(0)` by a central difference with step `h`.
pub fn curvature_at_zero(measure: &SpectralMeasure, h: f64, hbar: f64) -> CliResult<f64> {
    let p = |t: f64| survival_probability(measure, t, hbar);
    Ok(-(p(h)? - 2.0 + p(-h)?) / (h * h))
}

pub fn taylor_measures() -> Vec<(&'static str, SpectralMeasure)> {
    vec![
        ("qubit", qubit()),
        (
            "uniform",
            SpectralMeasure::uniform(0.0, 1.0).expect("valid"),
        ),
        (
            "cantor",
            SpectralMeasure::cantor(0.0, 1.0, 40).expect("valid"),
        ),
        (
            "gaussian",
            SpectralMeasure::gaussian(0.0, 1.0).expect("valid"),
        ),
        (
            "triangle",
            SpectralMeasure::tabulated(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).expect("valid"),
        ),
    ]
}

fn taylor() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (label, m) in taylor_measures() {
        let tz = zeno_time(&m, 1.0)
            .finite()
            .ok_or(Error::UndefinedZenoTime)?;
        let curvature = curvature_at_zero(&m, 1e-3 * tz, 1.0)?;
        let expect = 2.0 / (tz * tz);
        checks.push(Check::at_most(
            format!("{label} curvature vs 2/tau_Z^2"),
            (curvature - expect).abs() / expect,
            1e-4,
        ));
        let t = taylor_check(&m, 0.01 * tz, 1.0)?;
        checks.push(Check::at_most(
            format!("{label} quadratic residual at 0.01 tau_Z"),
            t.residual,
            1e-6,
        ));
    }
    let lorentzian = SpectralMeasure::lorentzian(0.0, 1.0).expect("valid");
    let undefined = zeno_time(&lorentzian, 1.0) == ZenoTime::Undefined
        && taylor_check(&lorentzian, 0.01, 1.0) == Err(Error::UndefinedZenoTime);
    checks.push(Check {
        name: "lorentzian zeno time undefined".into(),
        pass: undefined,
        measured: if undefined { 0.0 } else { 1.0 },
        bound: 0.0,
    });
    Ok(checks)
}
