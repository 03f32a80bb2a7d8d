use std::sync::Arc;
use std::thread;

use epi_core::quadrature::QuadratureConfig;
use epi_core::{differential_entropy, self_convolve, TruncatedGaussianSpec};

#[test]
fn densities_are_shared_across_threads() {
    let q = QuadratureConfig::default();
    let spec = TruncatedGaussianSpec::new(0.1, 0.25).unwrap();
    let sum = Arc::new(self_convolve(&spec.density(), &q).unwrap());
    let expected = differential_entropy(&sum, &q).unwrap().value;

    let handles: Vec<_> = (0..4)
        .map(|_| {
            let d = Arc::clone(&sum);
            thread::spawn(move || differential_entropy(&d, &q).unwrap().value)
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), expected);
    }
}
