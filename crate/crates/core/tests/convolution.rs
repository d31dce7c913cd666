use proptest::prelude::*;
use zeno_core::{
    convolve_pp, mean, self_convolve, shift_measure, variance, verify_powers_equal_convolution,
    ConvolvedMeasure, Exponent, PurePointMeasure, SpectralMeasure,
};

fn atoms(max_atoms: usize) -> impl Strategy<Value = PurePointMeasure> {
    prop::collection::vec((-3.0f64..3.0, 0.05f64..1.0), 1..=max_atoms).prop_map(|atoms| {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        PurePointMeasure::new(atoms.into_iter().map(|(e, w)| (e, w / total))).unwrap()
    })
}

fn commensurable(max_atoms: usize) -> impl Strategy<Value = PurePointMeasure> {
    (
        prop::collection::btree_set(0i64..10, 1..=max_atoms),
        0.1f64..1.5,
        -2.0f64..2.0,
        prop::collection::vec(0.05f64..1.0, 4),
    )
        .prop_map(|(ks, delta, a, ws)| {
            let ws = &ws[..ks.len()];
            let total: f64 = ws.iter().sum();
            PurePointMeasure::new(
                ks.iter()
                    .zip(ws)
                    .map(|(&k, &w)| (a + k as f64 * delta, w / total)),
            )
            .unwrap()
        })
}

fn grid() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn powers_equal_convolution_for_any_alpha(
        mu in atoms(4),
        n in 1u64..=8,
        taus in grid(),
        alpha in prop_oneof![Just("1"), Just("3/2"), Just("0.3"), Just("2")],
    ) {
        let a: Exponent = alpha.parse().unwrap();
        let err = verify_powers_equal_convolution(&mu, n, &taus, a, 1.0).unwrap();
        prop_assert!(err <= 1e-10, "{err}");
    }

    #[test]
    fn mass_mean_and_variance_add(mu in commensurable(4), n in 1u64..=12) {
        let nu = self_convolve(&mu, n).unwrap();
        let m = SpectralMeasure::PurePoint(mu.clone());
        let (m1, v1) = (mean(&m).to_f64(), variance(&m).to_f64());
        let nf = n as f64;
        prop_assert!((nu.total_weight() - 1.0).abs() <= nf * 1e-12);
        prop_assert!((nu.mean() - nf * m1).abs() <= 1e-10 * (nf * m1).abs().max(1.0));
        prop_assert!((nu.variance() - nf * v1).abs() <= 1e-10 * (nf * v1).max(1e-300) + 1e-12);
    }

    #[test]
    fn commensurable_powers_stay_small(mu in commensurable(4), n in 1u64..=64) {
        let nu = self_convolve(&mu, n).unwrap();
        // support is a + kδ with k ≤ 9n
        prop_assert!(nu.len() <= 9 * n as usize + 1);
    }

    #[test]
    fn point_mass_convolution_is_a_shift(mu in atoms(4), a in -4.0f64..4.0) {
        let delta = PurePointMeasure::new([(a, 1.0)]).unwrap();
        let c = convolve_pp(&delta, &mu).unwrap();
        let shifted = shift_measure(&SpectralMeasure::PurePoint(mu), a);
        let SpectralMeasure::PurePoint(s) = shifted else { unreachable!() };
        let expect = ConvolvedMeasure::from(&s);
        prop_assert_eq!(c.len(), expect.len());
        for (x, y) in c.atoms.iter().zip(&expect.atoms) {
            prop_assert!((x.energy - y.energy).abs() < 1e-12);
            prop_assert!((x.weight - y.weight).abs() < 1e-15);
        }
    }
}

#[test]
fn three_atom_commensurable_at_three_halves() {
    let mu = PurePointMeasure::new([(0.0, 0.2), (2.0, 0.5), (6.0, 0.3)]).unwrap();
    let taus: Vec<f64> = (0..32).map(|k| -5.0 + 10.0 * k as f64 / 31.0).collect();
    let a: Exponent = "3/2".parse().unwrap();
    let err = verify_powers_equal_convolution(&mu, 6, &taus, a, 1.0).unwrap();
    assert!(err <= 1e-10, "{err}");
}
