#![no_main]

//! Decodes little-endian f64 values into a cycle function and runs the
//! functionals and the Fourier round trip on it.

use cycle_lsi::spectral::{dft, dft_direct};
use cycle_lsi::{dirichlet, entropy, mean_square, variance, CycleFunction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let values: Vec<f64> = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let Ok(f) = CycleFunction::new(values) else { return };
    let scale = f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    // squares must stay in the normal range for the tolerances below
    if !(scale < 1e100) || (scale != 0.0 && scale < 1e-100) {
        return;
    }
    assert!(dirichlet(&f) >= 0.0);
    assert!(variance(&f) >= 0.0);
    assert!(variance(&f) <= mean_square(&f) * (1.0 + 1e-12));
    if f.is_nonnegative() {
        assert!(entropy(&f).unwrap() >= 0.0);
    }
    if f.n() <= 256 {
        let back = dft_direct(&f).inverse();
        for j in 0..f.n() {
            assert!((back[j] - f[j]).abs() <= 1e-9 * scale.max(1e-300));
        }
    }
    let spec = dft(&f);
    let parseval = spec.parseval_total();
    assert!((parseval - mean_square(&f)).abs() <= 1e-9 * scale * scale);
});
