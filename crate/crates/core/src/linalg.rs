//! Dense complex matrix primitives.
//!
//! Everything here is sized for bipartite systems of at most a few dozen
//! levels, so storage is dense and column-major under the hood (nalgebra),
//! while indexing is always `(row, col)`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum tolerated `|m_ij - conj(m_ji)|` before an eigensolve is refused.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(n, n, f))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Rank-one projector `|psi><psi|` (the vector is used as given, not normalized).
    pub fn outer(psi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(ComplexMatrix(m))
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.0[(i, j)] = z;
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    /// `V m V†`.
    pub fn conjugate_by(&self, v: &ComplexMatrix) -> Self {
        ComplexMatrix(&v.0 * &self.0 * v.0.adjoint())
    }

    /// Largest `|m_ij - conj(m_ji)|`; NaN entries propagate.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for i in j..n {
                let d = (self.0[(i, j)] - self.0[(j, i)].conj()).norm();
                if d.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Replaces the matrix by its Hermitian part `(m + m†) / 2`.
    pub fn hermitize(&mut self) {
        let n = self.dim();
        for j in 0..n {
            let d = self.0[(j, j)].re;
            self.0[(j, j)] = Complex64::new(d, 0.0);
            for i in (j + 1)..n {
                let avg = (self.0[(i, j)] + self.0[(j, i)].conj()) * 0.5;
                self.0[(i, j)] = avg;
                self.0[(j, i)] = avg.conj();
            }
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on different dims");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Real eigenvalues sorted in non-increasing order.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `values` descending; NaNs sort last.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Running sums `sum_{i<=k} lambda_i` for `k = 1..=len`, zero-padded
    /// (constant after the last eigenvalue) up to `len.max(pad_to)`.
    pub fn prefix_sums(&self, pad_to: usize) -> Vec<f64> {
        let n = self.len().max(pad_to);
        let mut acc = 0.0;
        (0..n)
            .map(|k| {
                if let Some(v) = self.0.get(k) {
                    acc += v;
                }
                acc
            })
            .collect()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::NonHermitianInput { defect });
    }
    Ok(())
}

fn eigensolve(m: &ComplexMatrix) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    check_hermitian(m)?;
    let n = m.dim();
    let max_iter = 64 * n + 64;
    SymmetricEigen::try_new(m.0.clone(), f64::EPSILON, max_iter).ok_or(Error::ConvergenceFailure { dim: n })
}

/// All eigenvalues of a Hermitian matrix, sorted descending.
pub fn herm_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let eig = eigensolve(m)?;
    Ok(Spectrum::from_unsorted(eig.eigenvalues.iter().copied().collect()))
}

/// Eigenvalues (descending) with the matching unitary of column eigenvectors.
pub fn herm_eigh(m: &ComplexMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    let eig = eigensolve(m)?;
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((Spectrum(values), vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.min())
}

/// Number of eigenvalues above `rank_tol * lambda_max`; zero for the zero matrix.
pub fn numerical_rank(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    Ok(rank_of_spectrum(&herm_eig(m)?, rank_tol))
}

pub fn rank_of_spectrum(spec: &Spectrum, rank_tol: f64) -> usize {
    let top = spec.max();
    if !(top > 0.0) {
        return 0;
    }
    let cut = rank_tol * top;
    spec.values().iter().filter(|&&v| v > cut).count()
}

/// Kronecker product; block `(i, j)` of the result is `a[i,j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |r, c| a.get(r / nb, c / nb) * b.get(r % nb, c % nb))
}
