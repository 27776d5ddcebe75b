//! Propagation of amplitudes expanded in a moving frame. The frame-projected
//! generator has entries `<v_n, H v_m> - i <v_n, dv_m/dt>`; stepping its
//! exponential yields coefficient propagators, and an independent fixed-basis
//! Runge-Kutta integrator cross-checks them without sharing any code path.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{GeomPhaseError, Result};
use crate::frame::BasisFrame;
use crate::grid::TimeGrid;
use crate::linalg::{inner, max_abs, HermitianMatrix, StateVector};

/// Time-dependent Hermitian operator source.
pub trait HamiltonianModel: Send + Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, t: f64) -> HermitianMatrix;
}

impl<H: HamiltonianModel + ?Sized> HamiltonianModel for &H {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn evaluate(&self, t: f64) -> HermitianMatrix {
        (**self).evaluate(t)
    }
}

/// Constant Hamiltonian.
#[derive(Debug, Clone)]
pub struct StaticHamiltonian {
    matrix: HermitianMatrix,
}

impl StaticHamiltonian {
    pub fn new(matrix: HermitianMatrix) -> Self {
        Self { matrix }
    }
}

impl HamiltonianModel for StaticHamiltonian {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }
    fn evaluate(&self, _t: f64) -> HermitianMatrix {
        self.matrix.clone()
    }
}

type HamiltonianFn = dyn Fn(f64) -> HermitianMatrix + Send + Sync;

/// Hamiltonian defined by a closure.
#[derive(Clone)]
pub struct FnHamiltonian {
    dim: usize,
    f: Arc<HamiltonianFn>,
}

impl FnHamiltonian {
    pub fn new(dim: usize, f: impl Fn(f64) -> HermitianMatrix + Send + Sync + 'static) -> Self {
        Self {
            dim,
            f: Arc::new(f),
        }
    }
}

impl HamiltonianModel for FnHamiltonian {
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, t: f64) -> HermitianMatrix {
        (self.f)(t)
    }
}

/// Frame-projected generator sampled at the points of a grid.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonianSeries {
    grid: TimeGrid,
    matrices: Vec<DMatrix<C64>>,
}

impl EffectiveHamiltonianSeries {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, k: usize) -> &DMatrix<C64> {
        &self.matrices[k]
    }

    pub fn matrices(&self) -> &[DMatrix<C64>] {
        &self.matrices
    }

    /// Largest off-diagonal magnitude across the whole series.
    pub fn max_off_diagonal(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for m in &self.matrices {
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        worst = worst.max(m[(i, j)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest deviation from Hermiticity across the series. Small values
    /// certify that the frame stayed orthonormal where it was sampled.
    pub fn max_hermiticity_deviation(&self) -> f64 {
        self.matrices
            .iter()
            .map(crate::linalg::hermitian_deviation)
            .fold(0.0, f64::max)
    }

    /// Copy with every off-diagonal entry zeroed: evolution restricted to
    /// decoupled levels.
    pub fn diagonal_projection(&self) -> Self {
        let dim = self.dim();
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let mut d = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
                for i in 0..dim {
                    d[(i, i)] = m[(i, i)];
                }
                d
            })
            .collect();
        Self {
            grid: self.grid,
            matrices,
        }
    }
}

/// Series with all inter-level couplings discarded. Propagating the result
/// in a frame of instantaneous eigenvectors is the slow-drive approximation;
/// it is exact only where the series was already diagonal.
pub fn adiabatic_projection(series: &EffectiveHamiltonianSeries) -> EffectiveHamiltonianSeries {
    series.diagonal_projection()
}

/// Project a Hamiltonian onto a moving frame over a grid.
pub fn effective_hamiltonian(
    h: &dyn HamiltonianModel,
    frame: &dyn BasisFrame,
    grid: &TimeGrid,
) -> Result<EffectiveHamiltonianSeries> {
    let dim = frame.dim();
    if h.dim() != dim {
        return Err(GeomPhaseError::Dimension {
            expected: dim,
            found: h.dim(),
        });
    }
    let mut matrices = Vec::with_capacity(grid.n_points());
    for t in grid.times() {
        let cols = frame.evaluate(t);
        let dots = frame.derivative(t);
        if cols.len() != dim || dots.len() != dim {
            return Err(GeomPhaseError::Dimension {
                expected: dim,
                found: cols.len().min(dots.len()),
            });
        }
        let ht = h.evaluate(t);
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (col, vm) in cols.iter().enumerate() {
            let hv = ht.apply(vm)?;
            let dv = &dots[col];
            for (row, vn) in cols.iter().enumerate() {
                let coupling = inner(vn, &hv)? - C64::new(0.0, 1.0) * inner(vn, dv)?;
                if !(coupling.re.is_finite() && coupling.im.is_finite()) {
                    return Err(GeomPhaseError::Numerical(format!(
                        "projected generator is non-finite at t = {t}"
                    )));
                }
                m[(row, col)] = coupling;
            }
        }
        matrices.push(m);
    }
    Ok(EffectiveHamiltonianSeries {
        grid: *grid,
        matrices,
    })
}

/// Coefficient propagators `U(t_k)` with `U(t_0) = 1`.
#[derive(Debug, Clone)]
pub struct EvolutionOperatorSeries {
    grid: TimeGrid,
    operators: Vec<DMatrix<C64>>,
}

impl EvolutionOperatorSeries {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn operator(&self, k: usize) -> &DMatrix<C64> {
        &self.operators[k]
    }

    pub fn at_time(&self, t: f64) -> Result<&DMatrix<C64>> {
        Ok(&self.operators[self.grid.index_of(t)?])
    }

    pub fn final_operator(&self) -> &DMatrix<C64> {
        self.operators.last().expect("series is never empty")
    }

    /// Largest entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        let eye = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0, 0.0));
        self.operators
            .iter()
            .map(|u| max_abs(&(u.adjoint() * u - &eye)))
            .fold(0.0, f64::max)
    }
}

/// Step the projected generator into propagators: each interval contributes
/// the exponential of the Hermitian part of its endpoint average, a
/// second-order accurate and exactly unitary rule.
pub fn evolve(series: &EffectiveHamiltonianSeries) -> Result<EvolutionOperatorSeries> {
    let dim = series.dim();
    let dt = series.grid.dt();
    let mut operators = Vec::with_capacity(series.grid.n_points());
    let mut u = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0, 0.0));
    operators.push(u.clone());
    for k in 0..series.grid.n_steps() {
        let avg = (series.matrix(k) + series.matrix(k + 1)) * C64::new(0.5, 0.0);
        let herm = (&avg + avg.adjoint()) * C64::new(0.5, 0.0);
        let step = HermitianMatrix::new_unchecked(herm).exp_neg_i(dt);
        u = step * u;
        if u.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(GeomPhaseError::Numerical(format!(
                "propagator became non-finite at step {k}"
            )));
        }
        operators.push(u.clone());
    }
    Ok(EvolutionOperatorSeries {
        grid: series.grid,
        operators,
    })
}

/// Assemble the physical state at a grid time from frame vectors and the
/// propagated coefficients of a basis-vector start in `initial_level`.
pub fn reconstruct_amplitude(
    frame: &dyn BasisFrame,
    evolution: &EvolutionOperatorSeries,
    initial_level: usize,
    t: f64,
) -> Result<StateVector> {
    let dim = frame.dim();
    if evolution.dim() != dim {
        return Err(GeomPhaseError::Dimension {
            expected: dim,
            found: evolution.dim(),
        });
    }
    if initial_level >= dim {
        return Err(GeomPhaseError::Dimension {
            expected: dim,
            found: initial_level,
        });
    }
    let u = evolution.at_time(t)?;
    let cols = frame.evaluate(t);
    let mut acc = DVector::from_element(cols[0].dim(), C64::new(0.0, 0.0));
    for (n, v) in cols.iter().enumerate() {
        acc += v.as_dvector() * u[(n, initial_level)];
    }
    StateVector::from_dvector(acc)
}

/// Amplitudes sampled on a grid.
#[derive(Debug, Clone)]
pub struct AmplitudeSeries {
    grid: TimeGrid,
    states: Vec<StateVector>,
}

impl AmplitudeSeries {
    pub fn new(grid: TimeGrid, states: Vec<StateVector>) -> Result<Self> {
        if states.len() != grid.n_points() {
            return Err(GeomPhaseError::Grid(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                states.len()
            )));
        }
        Ok(Self { grid, states })
    }

    /// Sample a closed-form amplitude on the grid.
    pub fn sample(grid: TimeGrid, f: impl Fn(f64) -> StateVector) -> Self {
        let states = grid.times().map(f).collect();
        Self { grid, states }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn state(&self, k: usize) -> &StateVector {
        &self.states[k]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn state_at(&self, t: f64) -> Result<&StateVector> {
        Ok(&self.states[self.grid.index_of(t)?])
    }

    /// Largest drift of the norm away from its initial value. A direct
    /// integrator without renormalization reports its accuracy here.
    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.states[0].norm();
        self.states
            .iter()
            .map(|s| (s.norm() - n0).abs())
            .fold(0.0, f64::max)
    }
}

/// Classic fourth-order Runge-Kutta integration of `i dpsi/dt = H psi` in the
/// fixed basis. Deliberately never renormalizes: norm drift measures error.
pub fn schrodinger_integrate(
    h: &dyn HamiltonianModel,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<AmplitudeSeries> {
    if psi0.dim() != h.dim() {
        return Err(GeomPhaseError::Dimension {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    if !psi0.is_normalized(1e-6) {
        return Err(GeomPhaseError::Numerical(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    let dt = grid.dt();
    let minus_i = C64::new(0.0, -1.0);
    let mut states = Vec::with_capacity(grid.n_points());
    let mut y = psi0.as_dvector().clone();
    states.push(psi0.clone());
    for k in 0..grid.n_steps() {
        let t = grid.t(k);
        let h0 = h.evaluate(t);
        let h_half = h.evaluate(t + 0.5 * dt);
        let h1 = h.evaluate(t + dt);
        let k1 = h0.apply_vec(&y) * minus_i;
        let k2 = h_half.apply_vec(&(&y + &k1 * C64::new(0.5 * dt, 0.0))) * minus_i;
        let k3 = h_half.apply_vec(&(&y + &k2 * C64::new(0.5 * dt, 0.0))) * minus_i;
        let k4 = h1.apply_vec(&(&y + &k3 * C64::new(dt, 0.0))) * minus_i;
        y += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
            * C64::new(dt / 6.0, 0.0);
        if y.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(GeomPhaseError::Numerical(format!(
                "integration diverged at step {k}"
            )));
        }
        states.push(StateVector::from_dvector(y.clone())?);
    }
    AmplitudeSeries::new(*grid, states)
}
