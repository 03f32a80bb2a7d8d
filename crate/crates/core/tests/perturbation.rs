use epi_core::perturbation::{check_lemma1, mixture};
use epi_core::quadrature::QuadratureConfig;
use epi_core::{differential_entropy, BoundedDensity, Error, Pmf, TruncatedGaussianSpec};
use proptest::prelude::*;

fn lattice_base() -> impl Strategy<Value = Pmf> {
    (1usize..=5).prop_flat_map(|k| {
        (
            prop::collection::btree_set(-10i32..=10, k),
            prop::collection::vec(0.05f64..1.0, k),
        )
            .prop_map(|(vals, w)| {
                let total: f64 = w.iter().sum();
                let pairs: Vec<(f64, f64)> =
                    vals.into_iter().map(f64::from).zip(w.iter().map(|p| p / total)).collect();
                epi_core::new_pmf(&pairs, 1e-9).unwrap()
            })
    })
}

fn kernel(uniform: bool, half_width: f64, r: f64) -> BoundedDensity {
    if uniform {
        BoundedDensity::uniform(-half_width, half_width).unwrap()
    } else {
        TruncatedGaussianSpec::new(half_width * r, half_width).unwrap().density()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identity_holds_on_lattices(
        base in lattice_base(),
        uniform in any::<bool>(),
        u in 0.05f64..0.95,
        r in 0.1f64..2.0,
    ) {
        let q = QuadratureConfig::default();
        let k = kernel(uniform, u / 2.0, r);
        let c = check_lemma1(&base, &k, &q).unwrap();
        prop_assert!(c.gap.abs() <= 1e-6, "{:?}", c);
        let m = mixture(&base, &k).unwrap().assembled.mass(&q).unwrap();
        prop_assert!((m.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn shifting_the_base_keeps_entropy(base in lattice_base(), shift in -100.0f64..100.0) {
        let q = QuadratureConfig::default();
        let k = kernel(false, 0.3, 0.5);
        let h0 = differential_entropy(&mixture(&base, &k).unwrap().assembled, &q).unwrap();
        let h1 = differential_entropy(&mixture(&base.shifted(shift), &k).unwrap().assembled, &q).unwrap();
        prop_assert!((h0.value - h1.value).abs() <= 1e-9 + h0.error + h1.error);
    }
}

#[test]
fn half_spacing_is_rejected() {
    let base = Pmf::equiprobable(&[0.0, 2.0, 3.0]).unwrap();
    for k in [kernel(true, 0.5, 0.0), kernel(false, 0.5, 0.3)] {
        assert!(matches!(mixture(&base, &k), Err(Error::Overlap { .. })));
    }
    assert!(mixture(&base, &kernel(true, 0.5 - 1e-12, 0.0)).is_ok());
}
