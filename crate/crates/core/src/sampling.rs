//! Random states under the product measure `Haar × Lebesgue(simplex)`:
//! `rho = U diag(lambda) U†` with `U` Haar-distributed on `U(N)` and
//! `lambda` uniform on the probability simplex.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Spectrum};
use crate::state::{DensityMatrix, SystemDims};

/// Counter-based generator; each `(seed, stream_id)` pair is an independent
/// stream of 2^64 blocks, and there are 2^64 streams per seed.
pub type RandomStream = ChaCha8Rng;

pub fn random_stream(seed: u64, stream_id: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SamplerConfig {
    pub dims: SystemDims,
    pub seed: u64,
    pub stream_id: u64,
}

/// Uniform point on the `(n-1)`-simplex, in draw order.
///
/// Normalized standard exponentials are Dirichlet(1, ..., 1).
pub fn simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    for x in &mut draws {
        *x /= total;
    }
    Ok(draws)
}

/// [`simplex_point`] sorted descending.
pub fn sample_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Spectrum> {
    simplex_point(n, rng).map(Spectrum::from_unsorted)
}

/// Haar-random `n × n` unitary: QR of a complex Ginibre matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        // Zero diagonal has probability zero; keep the column as is.
        if norm > 0.0 {
            let phase = d / norm;
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    ComplexMatrix::from_dmatrix(q)
}

/// `U diag(spectrum) U†`, made exactly Hermitian.
pub fn assemble(u: &ComplexMatrix, spectrum: &Spectrum) -> ComplexMatrix {
    let u = u.as_dmatrix();
    let mut scaled = u.clone();
    for (j, &lambda) in spectrum.values().iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= lambda);
    }
    let mut rho = ComplexMatrix::from_dmatrix(scaled * u.adjoint()).expect("square product");
    rho.hermitize();
    rho
}

/// One state of dimension `dims.total()`. The unitary is drawn before the spectrum.
pub fn sample_state<R: Rng + ?Sized>(dims: SystemDims, rng: &mut R) -> Result<DensityMatrix> {
    let (state, _) = sample_state_with_spectrum(dims, rng)?;
    Ok(state)
}

/// Like [`sample_state`], also returning the simplex point used.
pub fn sample_state_with_spectrum<R: Rng + ?Sized>(dims: SystemDims, rng: &mut R) -> Result<(DensityMatrix, Spectrum)> {
    let n = dims.total();
    let u = haar_unitary(n, rng)?;
    let spectrum = sample_simplex(n, rng)?;
    let rho = assemble(&u, &spectrum);
    Ok((DensityMatrix::from_parts_unchecked(rho, dims), spectrum))
}

/// Owns one stream and yields states for a fixed pair of dimensions.
#[derive(Clone, Debug)]
pub struct Sampler {
    dims: SystemDims,
    rng: RandomStream,
}

impl Sampler {
    pub fn new(cfg: SamplerConfig) -> Self {
        Sampler {
            dims: cfg.dims,
            rng: random_stream(cfg.seed, cfg.stream_id),
        }
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn next_state(&mut self) -> Result<DensityMatrix> {
        sample_state(self.dims, &mut self.rng)
    }

    pub fn rng_mut(&mut self) -> &mut RandomStream {
        &mut self.rng
    }
}

impl Iterator for Sampler {
    type Item = Result<DensityMatrix>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_state())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eig;

    fn dims(a: usize, b: usize) -> SystemDims {
        SystemDims::new(a, b).unwrap()
    }

    #[test]
    fn simplex_of_one_is_forced() {
        let mut rng = random_stream(1, 0);
        assert_eq!(sample_simplex(1, &mut rng).unwrap().values(), &[1.0]);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let mut rng = random_stream(1, 0);
        assert!(matches!(sample_simplex(0, &mut rng), Err(Error::InvalidDimension(0))));
        assert!(matches!(haar_unitary(0, &mut rng), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn simplex_points_are_normalized_and_sorted() {
        let mut rng = random_stream(2, 0);
        for n in 1..12 {
            let s = sample_simplex(n, &mut rng).unwrap();
            assert!((s.sum() - 1.0).abs() <= 1e-12);
            assert!(s.values().iter().all(|&v| v >= 0.0));
            assert!(s.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = random_stream(3, 0);
        for n in [1, 2, 3, 6, 16, 24] {
            let u = haar_unitary(n, &mut rng).unwrap();
            let gram = &u.adjoint() * &u;
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn sampled_state_keeps_simplex_spectrum() {
        let mut rng = random_stream(4, 0);
        for d in [dims(2, 2), dims(2, 5), dims(3, 4)] {
            for _ in 0..20 {
                let (rho, lambda) = sample_state_with_spectrum(d, &mut rng).unwrap();
                assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-12);
                assert!(rho.matrix().trace().im.abs() <= 1e-12);
                let spec = herm_eig(rho.matrix()).unwrap();
                for (x, y) in spec.values().iter().zip(lambda.values()) {
                    assert!((x - y).abs() <= 1e-10);
                }
                DensityMatrix::new(rho.matrix().clone(), d).unwrap();
            }
        }
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let cfg = SamplerConfig {
            dims: dims(2, 3),
            seed: 99,
            stream_id: 5,
        };
        let a: Vec<_> = Sampler::new(cfg).take(3).map(Result::unwrap).collect();
        let b: Vec<_> = Sampler::new(cfg).take(3).map(Result::unwrap).collect();
        assert_eq!(a, b);
        let other = Sampler::new(SamplerConfig { stream_id: 6, ..cfg })
            .next_state()
            .unwrap();
        assert_ne!(a[0], other);
    }
}
