#![allow(dead_code)]

use entangle_atlas::sampling::random_stream;
use entangle_atlas::{haar_unitary, kron, sample_state, ComplexMatrix, DensityMatrix, SystemDims};
use num_complex::Complex64;

pub fn dims(n_a: usize, n_b: usize) -> SystemDims {
    SystemDims::new(n_a, n_b).unwrap()
}

pub fn random_state(d: SystemDims, seed: u64) -> DensityMatrix {
    sample_state(d, &mut random_stream(seed, 0)).unwrap()
}

/// `V_A ⊗ V_B` with independent Haar factors.
pub fn local_unitary(d: SystemDims, seed: u64) -> ComplexMatrix {
    let mut rng = random_stream(seed, 1);
    let va = haar_unitary(d.n_a, &mut rng).unwrap();
    let vb = haar_unitary(d.n_b, &mut rng).unwrap();
    kron(&va, &vb)
}

/// Haar-random unit vector of length `n`.
pub fn random_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let u = haar_unitary(n, &mut random_stream(seed, 2)).unwrap();
    (0..n).map(|i| u.get(i, 0)).collect()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One-sample Kolmogorov-Smirnov statistic against `Uniform(0, 1)`.
pub fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).max((i + 1) as f64 / n - x))
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
