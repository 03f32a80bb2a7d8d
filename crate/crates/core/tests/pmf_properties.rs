use epi_core::pmf::{convolve, DEFAULT_MERGE_EPS};
use epi_core::verify::{verify_theorem1, PMF_ASSERT_TOL};
use epi_core::{
    discrete_entropy, discrete_entropy_power, min_spacing, new_pmf, spacing_bound_holds, Pmf,
    INV_TWO_PI_E,
};
use proptest::prelude::*;

fn weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k)
}

/// Pmf on distinct integers in `[-20, 20]`.
fn lattice_pmf() -> impl Strategy<Value = Pmf> {
    (1usize..=8)
        .prop_flat_map(|k| (prop::collection::btree_set(-20i32..=20, k), weights(k)))
        .prop_map(|(vals, w)| {
            let pairs: Vec<(f64, f64)> = vals.into_iter().map(f64::from).zip(w).collect();
            normalized(&pairs)
        })
}

/// Pmf on reals in `[0, 10]` with gaps of at least `1e-3`.
fn real_pmf() -> impl Strategy<Value = Pmf> {
    (1usize..=8)
        .prop_flat_map(|k| (prop::collection::btree_set(0u32..=10_000, k), weights(k)))
        .prop_map(|(vals, w)| {
            let pairs: Vec<(f64, f64)> = vals.into_iter().map(|v| v as f64 * 1e-3).zip(w).collect();
            normalized(&pairs)
        })
}

fn any_pmf() -> impl Strategy<Value = Pmf> {
    prop_oneof![lattice_pmf(), real_pmf()]
}

fn normalized(pairs: &[(f64, f64)]) -> Pmf {
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let scaled: Vec<(f64, f64)> = pairs.iter().map(|&(v, p)| (v, p / total)).collect();
    new_pmf(&scaled, DEFAULT_MERGE_EPS).unwrap()
}

proptest! {
    #[test]
    fn entropy_is_between_zero_and_log_count(p in any_pmf()) {
        let h = discrete_entropy(&p);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (p.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn entropy_ignores_atom_locations(p in any_pmf(), scale in 0.5f64..4.0, offset in -50.0f64..50.0) {
        let moved: Vec<(f64, f64)> = p.pairs().into_iter().map(|(v, q)| (v * scale + offset, q)).collect();
        let q = new_pmf(&moved, DEFAULT_MERGE_EPS).unwrap();
        prop_assert_eq!(q.len(), p.len());
        prop_assert!((discrete_entropy(&q) - discrete_entropy(&p)).abs() < 1e-12);
    }

    #[test]
    fn convolution_keeps_mass_and_commutes(x in any_pmf(), y in any_pmf()) {
        let xy = convolve(&x, &y, DEFAULT_MERGE_EPS);
        let yx = convolve(&y, &x, DEFAULT_MERGE_EPS);
        prop_assert!((xy.total_mass() - 1.0).abs() < 1e-12);
        prop_assert_eq!(xy.len(), yx.len());
        for (a, b) in xy.atoms().iter().zip(yx.atoms()) {
            prop_assert!((a.value - b.value).abs() <= DEFAULT_MERGE_EPS);
            prop_assert!((a.prob - b.prob).abs() < 1e-12);
        }
    }

    #[test]
    fn sum_spacing_never_exceeds_summand_spacing(x in any_pmf(), y in any_pmf()) {
        let c = spacing_bound_holds(&x, &y, DEFAULT_MERGE_EPS);
        prop_assert!(c.holds, "{:?}", c);
    }

    #[test]
    fn entropy_power_floor(p in any_pmf()) {
        let n = discrete_entropy_power(&p);
        if p.is_singleton() {
            prop_assert_eq!(n, INV_TWO_PI_E);
        } else {
            prop_assert!(n > INV_TWO_PI_E);
        }
    }

    #[test]
    fn adding_independent_lattice_noise_raises_entropy(x in lattice_pmf(), y in lattice_pmf()) {
        // integer atoms never merge, so the sum has no value jitter
        let z = convolve(&x, &y, DEFAULT_MERGE_EPS);
        let hz = discrete_entropy(&z);
        prop_assert!(hz >= discrete_entropy(&x).max(discrete_entropy(&y)) - 1e-12);
    }

    #[test]
    fn doubled_inequality_holds(x in any_pmf(), y in any_pmf()) {
        let r = verify_theorem1(&x, &y, PMF_ASSERT_TOL);
        prop_assert!(r.holds, "{:?}", r);
        prop_assert!(r.slack >= -PMF_ASSERT_TOL);
    }
}

#[test]
fn entropy_bounds_are_attained() {
    assert_eq!(discrete_entropy(&Pmf::singleton(3.0)), 0.0);
    for k in 2..=10 {
        let vals: Vec<f64> = (0..k).map(f64::from).collect();
        let h = discrete_entropy(&Pmf::equiprobable(&vals).unwrap());
        assert!((h - f64::from(k).ln()).abs() < 1e-14);
    }
}

#[test]
fn singleton_pairs_are_tight() {
    for (a, b) in [(0.0, 0.0), (-3.5, 2.25), (1e6, -1e6)] {
        let r = verify_theorem1(&Pmf::singleton(a), &Pmf::singleton(b), PMF_ASSERT_TOL);
        assert!(r.slack.abs() <= 1e-12);
        assert!(min_spacing(&Pmf::singleton(a)).is_infinite());
    }
}

fn concentrated(delta: f64) -> Pmf {
    new_pmf(&[(0.0, 1.0 - delta), (1.0, delta / 2.0), (2.0, delta / 2.0)], DEFAULT_MERGE_EPS).unwrap()
}

#[test]
fn slack_shrinks_as_mass_concentrates() {
    let slacks: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&d| verify_theorem1(&concentrated(d), &concentrated(d), PMF_ASSERT_TOL).slack)
        .collect();
    for w in slacks.windows(2) {
        assert!(w[1] < w[0], "{slacks:?}");
    }
    assert!(slacks[4] > 0.0 && slacks[4] < 1e-4);
}
