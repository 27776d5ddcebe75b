//! Complex state vectors and Hermitian matrices on a finite level space.
//!
//! All physical inner products reduce to the conjugate-linear dot product
//! implemented here; spatial integrals never appear explicitly.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{GeomPhaseError, Result};

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_REL_TOL: f64 = 1e-12;

/// Absolute tolerance on `|norm - 1|` used by normalization checks.
pub const NORM_TOL: f64 = 1e-12;

/// Normalized (or at least normalizable) complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: DVector<C64>,
}

impl StateVector {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        if components.is_empty() {
            return Err(GeomPhaseError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self {
            data: DVector::from_vec(components),
        })
    }

    pub fn from_dvector(data: DVector<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(GeomPhaseError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { data })
    }

    /// Standard basis vector `e_k` in `dim` levels.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim || dim == 0 {
            return Err(GeomPhaseError::Dimension {
                expected: dim,
                found: k,
            });
        }
        let mut data = DVector::from_element(dim, C64::new(0.0, 0.0));
        data[k] = C64::new(1.0, 0.0);
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn component(&self, k: usize) -> C64 {
        self.data[k]
    }

    pub fn components(&self) -> &[C64] {
        self.data.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<C64> {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Componentwise multiplication by a complex scalar (typically a phase).
    pub fn scaled(&self, c: C64) -> Self {
        Self {
            data: &self.data * c,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// `a*u + b*v`; dimensions must agree.
pub fn linear_combination(a: C64, u: &StateVector, b: C64, v: &StateVector) -> Result<StateVector> {
    if u.dim() != v.dim() {
        return Err(GeomPhaseError::Dimension {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    StateVector::from_dvector(&u.data * a + &v.data * b)
}

/// Inner product, conjugate-linear in the first argument.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(GeomPhaseError::Dimension {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.data.dotc(&v.data))
}

/// Largest componentwise distance between two states of equal dimension.
pub fn max_component_distance(u: &StateVector, v: &StateVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(GeomPhaseError::Dimension {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.data
        .iter()
        .zip(v.data.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of `M - M^dagger`.
pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Hermitian matrix on the level space; hermiticity is validated on entry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
}

impl HermitianMatrix {
    pub fn new(data: DMatrix<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(GeomPhaseError::Dimension {
                expected: data.nrows().max(1),
                found: data.ncols(),
            });
        }
        let scale = max_abs(&data);
        let dev = hermitian_deviation(&data);
        // NaN deviations fail this comparison, so non-finite input is rejected too.
        if !(dev <= HERMITICITY_REL_TOL * scale.max(f64::MIN_POSITIVE)) && scale > 0.0 {
            return Err(GeomPhaseError::Hermiticity(format!(
                "max |M - M^dagger| = {dev:.3e} exceeds {HERMITICITY_REL_TOL:.1e} * max|M| = {:.3e}",
                HERMITICITY_REL_TOL * scale
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(GeomPhaseError::Numerical(
                "non-finite matrix entry".to_string(),
            ));
        }
        Ok(Self { data })
    }

    /// Skips the hermiticity check; caller guarantees the invariant.
    pub fn new_unchecked(data: DMatrix<C64>) -> Self {
        Self { data }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            data: DMatrix::from_element(dim, dim, C64::new(0.0, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(GeomPhaseError::Dimension {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        StateVector::from_dvector(&self.data * v.as_dvector())
    }

    /// Matrix-vector product on a raw coefficient vector, for integrator
    /// internals that work below the `StateVector` wrapper.
    pub fn apply_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        debug_assert_eq!(v.len(), self.dim());
        &self.data * v
    }

    /// Real eigenvalues and unitary eigenvector matrix (columns are eigenvectors).
    pub fn eigen_system(&self) -> (DVector<f64>, DMatrix<C64>) {
        let eig = SymmetricEigen::new(self.data.clone());
        (eig.eigenvalues, eig.eigenvectors)
    }

    /// `exp(-i * M * s)` through the eigendecomposition; unitary up to roundoff.
    pub fn exp_neg_i(&self, s: f64) -> DMatrix<C64> {
        let (vals, vecs) = self.eigen_system();
        let d = self.dim();
        let mut phases = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for k in 0..d {
            phases[(k, k)] = C64::from_polar(1.0, -vals[k] * s);
        }
        &vecs * phases * vecs.adjoint()
    }
}

pub fn pauli_x() -> HermitianMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    HermitianMatrix::new_unchecked(DMatrix::from_row_slice(2, 2, &[z, one, one, z]))
}

pub fn pauli_y() -> HermitianMatrix {
    let z = C64::new(0.0, 0.0);
    HermitianMatrix::new_unchecked(DMatrix::from_row_slice(
        2,
        2,
        &[z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z],
    ))
}

pub fn pauli_z() -> HermitianMatrix {
    let z = C64::new(0.0, 0.0);
    HermitianMatrix::new_unchecked(DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(1.0, 0.0), z, z, C64::new(-1.0, 0.0)],
    ))
}
