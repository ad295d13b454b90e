//! Bipartite density matrices and the subsystem maps (partial trace and
//! partial transpose) that every criterion is built from.
//!
//! Basis convention: `|i>_A |j>_B` sits at index `i * n_b + j`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, ComplexMatrix, Spectrum};

/// Trace tolerance for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-10;

/// PSD acceptance threshold for an `n`-dimensional matrix.
pub fn psd_tol(n: usize) -> f64 {
    1e-10 * n as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SystemDims {
    pub n_a: usize,
    pub n_b: usize,
}

impl SystemDims {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        for n in [n_a, n_b] {
            if n == 0 {
                return Err(Error::InvalidDimension(n));
            }
        }
        Ok(SystemDims { n_a, n_b })
    }

    pub fn total(&self) -> usize {
        self.n_a * self.n_b
    }

    pub fn of(&self, which: Subsystem) -> usize {
        match which {
            Subsystem::A => self.n_a,
            Subsystem::B => self.n_b,
        }
    }

    fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if self.total() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total(),
                found: m.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SystemDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_a, self.n_b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Reduced matrix on the `keep` factor.
pub fn partial_trace(m: &ComplexMatrix, dims: SystemDims, keep: Subsystem) -> Result<ComplexMatrix> {
    dims.check(m)?;
    let SystemDims { n_a, n_b } = dims;
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(n_a, |i, k| (0..n_b).map(|j| m.get(i * n_b + j, k * n_b + j)).sum()),
        Subsystem::B => ComplexMatrix::from_fn(n_b, |j, l| (0..n_a).map(|i| m.get(i * n_b + j, i * n_b + l)).sum()),
    };
    Ok(out)
}

/// Transposes the `on` tensor factor: `[1 ⊗ T]` for `B`, `[T ⊗ 1]` for `A`.
/// This is a pure entry permutation, so applying it twice is exact.
pub fn partial_transpose(m: &ComplexMatrix, dims: SystemDims, on: Subsystem) -> Result<ComplexMatrix> {
    dims.check(m)?;
    let n_b = dims.n_b;
    let out = ComplexMatrix::from_fn(dims.total(), |r, c| {
        let (i, j) = (r / n_b, r % n_b);
        let (k, l) = (c / n_b, c % n_b);
        match on {
            Subsystem::B => m.get(i * n_b + l, k * n_b + j),
            Subsystem::A => m.get(k * n_b + j, i * n_b + l),
        }
    });
    Ok(out)
}

/// A unit-trace positive semidefinite Hermitian operator on `H_A ⊗ H_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: SystemDims,
}

impl DensityMatrix {
    /// Validates every invariant: dimensions, Hermiticity, unit trace and
    /// positivity (eigenvalues `>= -psd_tol(N)`). The stored matrix is
    /// replaced by its exact Hermitian part.
    pub fn new(mut mat: ComplexMatrix, dims: SystemDims) -> Result<Self> {
        dims.check(&mat)?;
        let spec = herm_eig(&mat)?;
        mat.hermitize();
        let trace = mat.trace().re;
        if !((trace - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidTrace { trace });
        }
        if !(spec.min() >= -psd_tol(mat.dim())) {
            return Err(Error::NotPositive { min_eig: spec.min() });
        }
        Ok(DensityMatrix { mat, dims })
    }

    /// For matrices that hold the invariants by construction.
    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, dims: SystemDims) -> Self {
        debug_assert_eq!(mat.dim(), dims.total());
        DensityMatrix { mat, dims }
    }

    pub fn maximally_mixed(dims: SystemDims) -> Self {
        let n = dims.total();
        Self::from_parts_unchecked(ComplexMatrix::identity(n).scale(1.0 / n as f64), dims)
    }

    /// `|psi><psi|` after normalizing `psi`.
    pub fn pure(psi: &[Complex64], dims: SystemDims) -> Result<Self> {
        if psi.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: psi.len(),
            });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidTrace { trace: norm * norm });
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        let mut mat = ComplexMatrix::outer(&unit);
        mat.hermitize();
        Ok(Self::from_parts_unchecked(mat, dims))
    }

    /// `rho_a ⊗ rho_b`; both factors must be single-system states (`n_b == 1`).
    pub fn product(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Self {
        let dims = SystemDims {
            n_a: rho_a.mat.dim(),
            n_b: rho_b.mat.dim(),
        };
        let mut mat = kron(&rho_a.mat, &rho_b.mat);
        mat.hermitize();
        Self::from_parts_unchecked(mat, dims)
    }

    /// Views the matrix as a single system, `dims = (N, 1)`.
    pub fn single(mat: ComplexMatrix) -> Result<Self> {
        let dims = SystemDims::new(mat.dim(), 1)?;
        Self::new(mat, dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        herm_eig(&self.mat)
    }

    /// Reduced state on `keep`, returned as a single-system state.
    pub fn partial_trace(&self, keep: Subsystem) -> DensityMatrix {
        let mut mat = partial_trace(&self.mat, self.dims, keep).expect("dims invariant holds for DensityMatrix");
        mat.hermitize();
        DensityMatrix::from_parts_unchecked(
            mat,
            SystemDims {
                n_a: self.dims.of(keep),
                n_b: 1,
            },
        )
    }

    pub fn partial_transpose(&self, on: Subsystem) -> ComplexMatrix {
        partial_transpose(&self.mat, self.dims, on).expect("dims invariant holds for DensityMatrix")
    }

    /// `V rho V†`, re-symmetrized.
    pub fn conjugate_by(&self, v: &ComplexMatrix) -> Result<Self> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let mut mat = self.mat.conjugate_by(v);
        mat.hermitize();
        Ok(Self::from_parts_unchecked(mat, self.dims))
    }
}

/// The two-qubit singlet `(|01> - |10>)/sqrt(2)`.
pub fn singlet() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(
        &[z, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), z],
        SystemDims { n_a: 2, n_b: 2 },
    )
    .expect("singlet is a valid state")
}

/// Werner family `p |psi-><psi-| + (1 - p) I/4`.
pub fn werner(p: f64) -> DensityMatrix {
    let dims = SystemDims { n_a: 2, n_b: 2 };
    let mixed = ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    let mut mat = &singlet().into_matrix().scale(p) + &mixed;
    mat.hermitize();
    DensityMatrix::from_parts_unchecked(mat, dims)
}
