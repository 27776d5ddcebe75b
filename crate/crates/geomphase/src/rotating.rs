//! Exactly solvable two-level model driven by a field of fixed magnitude
//! precessing at constant frequency about the z axis. Closed forms for the
//! co-rotating basis, its energies, and the cyclic geometric phase serve as
//! ground truth for every numerical routine in this crate.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{GeomPhaseError, Result};
use crate::evolution::HamiltonianModel;
use crate::frame::BasisFrame;
use crate::linalg::{HermitianMatrix, StateVector};
use crate::phases::wrap_2pi;

/// Which of the two co-rotating levels a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Plus,
    Minus,
}

impl Level {
    /// `+1.0` for `Plus`, `-1.0` for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Level::Plus => 1.0,
            Level::Minus => -1.0,
        }
    }

    /// Position of the level in frame/evolution orderings.
    pub fn index(self) -> usize {
        match self {
            Level::Plus => 0,
            Level::Minus => 1,
        }
    }

    pub fn other(self) -> Level {
        match self {
            Level::Plus => Level::Minus,
            Level::Minus => Level::Plus,
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::Plus => write!(f, "plus"),
            Level::Minus => write!(f, "minus"),
        }
    }
}

/// Field magnitude `b`, tilt `theta` from the rotation axis, and signed
/// rotation frequency `omega0`.
///
/// The co-rotating basis mixes drive and field through the dressed tilt
/// `theta0` with `tan(theta0) = omega0 sin(theta) / (b + omega0 cos(theta))`;
/// construction fails when the dressed field vanishes and `theta0` loses
/// meaning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingFieldParams {
    b: f64,
    theta: f64,
    omega0: f64,
}

impl RotatingFieldParams {
    pub fn new(b: f64, theta: f64, omega0: f64) -> Result<Self> {
        if !b.is_finite() || b < 0.0 {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "field magnitude must be finite and nonnegative, got {b}"
            )));
        }
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "tilt angle must lie in [0, pi], got {theta}"
            )));
        }
        if !omega0.is_finite() || omega0 == 0.0 {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "rotation frequency must be finite and nonzero, got {omega0}"
            )));
        }
        let dressed = f64::hypot(omega0 * theta.sin(), b + omega0 * theta.cos());
        if dressed <= 1e-12 * (b + omega0.abs()) {
            return Err(GeomPhaseError::DegenerateParameter(format!(
                "dressed field vanishes at b = {b}, theta = {theta}, omega0 = {omega0}"
            )));
        }
        Ok(Self { b, theta, omega0 })
    }

    /// Unit field magnitude with frequency-to-field ratio `eta`.
    pub fn unit_field(theta: f64, eta: f64) -> Result<Self> {
        Self::new(1.0, theta, eta)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Both instantaneous eigenvalues of the Hamiltonian coincide.
    pub fn has_degenerate_spectrum(&self) -> bool {
        self.b == 0.0
    }

    /// Dressed tilt angle of the co-rotating basis.
    pub fn theta0(&self) -> f64 {
        f64::atan2(
            self.omega0 * self.theta.sin(),
            self.b + self.omega0 * self.theta.cos(),
        )
    }

    /// Residual tilt `theta - theta0` that fixes the co-rotating basis shape.
    pub fn vartheta(&self) -> f64 {
        self.theta - self.theta0()
    }

    /// One full turn of the drive.
    pub fn period(&self) -> f64 {
        TAU / self.omega0.abs()
    }

    /// Hamiltonian matrix at time `t`.
    pub fn hamiltonian(&self, t: f64) -> HermitianMatrix {
        let half_b = 0.5 * self.b;
        let off = C64::from_polar(half_b * self.theta.sin(), -self.omega0 * t);
        let mut m = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        m[(0, 0)] = C64::new(-half_b * self.theta.cos(), 0.0);
        m[(1, 1)] = C64::new(half_b * self.theta.cos(), 0.0);
        m[(0, 1)] = -off;
        m[(1, 0)] = -off.conj();
        // Hermitian by construction.
        HermitianMatrix::new_unchecked(m)
    }

    /// Co-rotating basis pair at time `t`, ordered `[plus, minus]`.
    ///
    /// Both vectors return exactly to their initial values after one period
    /// and diagonalize the comoving generator at every instant.
    pub fn basis_w(&self, t: f64) -> [StateVector; 2] {
        let half = 0.5 * self.vartheta();
        let (s, c) = half.sin_cos();
        let e = C64::from_polar(1.0, -self.omega0 * t);
        let plus = StateVector::new(vec![e * c, C64::new(s, 0.0)]).expect("two components");
        let minus = StateVector::new(vec![e * s, C64::new(-c, 0.0)]).expect("two components");
        [plus, minus]
    }

    /// Analytic time derivative of `basis_w`.
    pub fn basis_w_dot(&self, t: f64) -> [StateVector; 2] {
        let half = 0.5 * self.vartheta();
        let (s, c) = half.sin_cos();
        let de = C64::new(0.0, -self.omega0) * C64::from_polar(1.0, -self.omega0 * t);
        let zero = C64::new(0.0, 0.0);
        let plus = StateVector::new(vec![de * c, zero]).expect("two components");
        let minus = StateVector::new(vec![de * s, zero]).expect("two components");
        [plus, minus]
    }

    /// Time-independent diagonal matrix elements in the co-rotating basis
    /// for one level: `(<w, H w>, <w, i dw/dt>)`.
    pub fn level_couplings(&self, level: Level) -> (f64, f64) {
        let s = level.sign();
        let h_diag = -s * 0.5 * self.b * self.theta0().cos();
        let connection = 0.5 * self.omega0 * (1.0 + s * self.vartheta().cos());
        (h_diag, connection)
    }

    /// All four time-independent diagonal matrix elements:
    /// `(<w+, H w+>, <w-, H w->, <w+, i dw+/dt>, <w-, i dw-/dt>)`.
    pub fn diagonal_couplings(&self) -> (f64, f64, f64, f64) {
        let (hp, cp) = self.level_couplings(Level::Plus);
        let (hm, cm) = self.level_couplings(Level::Minus);
        (hp, hm, cp, cm)
    }

    /// Constant quasi-energy of the level: `<w, H w> - <w, i dw/dt>`.
    pub fn energy(&self, level: Level) -> f64 {
        let (h_diag, connection) = self.level_couplings(level);
        h_diag - connection
    }

    /// Both quasi-energies `(E+, E-)`; their sum is `-omega0` identically.
    pub fn energies(&self) -> (f64, f64) {
        (self.energy(Level::Plus), self.energy(Level::Minus))
    }

    /// Exact solution amplitude `w(t) exp(-i E t)` for the level.
    pub fn exact_amplitude(&self, level: Level, t: f64) -> StateVector {
        let w = self.basis_w(t);
        let phase = C64::from_polar(1.0, -self.energy(level) * t);
        w[level.index()].scaled(phase)
    }

    /// Cyclic geometric phase over one period, in `[0, 2 pi)`.
    pub fn geometric_phase_exact(&self, level: Level) -> f64 {
        let value =
            self.omega0.signum() * PI * (1.0 + level.sign() * self.vartheta().cos());
        wrap_2pi(value)
    }

    /// Grid size for which difference-based phase extraction of the exact
    /// amplitude stays below `bias_tol` of second-order bias over one period.
    ///
    /// The extractor cancels the mean winding rate first, so the bias is
    /// driven by the residual rate spread `omega0` weighted by the component
    /// amplitudes; a second floor keeps the per-step phase advance well under
    /// half a turn so that rate estimation never aliases.
    pub fn aa_grid_hint(&self, level: Level, bias_tol: f64) -> usize {
        assert!(bias_tol > 0.0, "bias tolerance must be positive");
        let half = 0.5 * self.vartheta();
        let (c2, s2) = (half.cos().powi(2), half.sin().powi(2));
        let e = self.energy(level);
        let t = self.period();
        let k_residual = self.omega0.abs().powi(3) * c2 * s2 * (c2 * c2 + s2 * s2);
        let bias_n = if k_residual > 0.0 {
            (t * (k_residual * t / (6.0 * bias_tol)).sqrt()).ceil() as usize
        } else {
            0
        };
        let fastest = (self.omega0 + e).abs().max(e.abs());
        let winding_n = (fastest * t / 2.0).ceil() as usize;
        bias_n.max(winding_n).max(4000)
    }
}

/// Geometric phase in the slow positive-frequency drive limit, in `[0, 2 pi)`.
pub fn berry_phase_adiabatic(theta: f64, level: Level) -> f64 {
    wrap_2pi(PI * (1.0 + level.sign() * theta.cos()))
}

/// Co-rotating basis as a frame with analytic derivatives.
#[derive(Debug, Clone, Copy)]
pub struct RotatingFrame {
    params: RotatingFieldParams,
}

impl RotatingFrame {
    pub fn new(params: RotatingFieldParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &RotatingFieldParams {
        &self.params
    }
}

impl BasisFrame for RotatingFrame {
    fn dim(&self) -> usize {
        2
    }
    fn evaluate(&self, t: f64) -> Vec<StateVector> {
        self.params.basis_w(t).into()
    }
    fn derivative(&self, t: f64) -> Vec<StateVector> {
        self.params.basis_w_dot(t).into()
    }
}

/// Instantaneous eigenbasis of the Hamiltonian, ordered by ascending energy
/// `[-b/2, +b/2]`. Same functional shape as the co-rotating basis with the
/// dressed tilt replaced by the bare one.
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticFrame {
    params: RotatingFieldParams,
}

impl AdiabaticFrame {
    /// Fails when the spectrum is degenerate and the eigenbasis is arbitrary.
    pub fn new(params: RotatingFieldParams) -> Result<Self> {
        if params.has_degenerate_spectrum() {
            return Err(GeomPhaseError::DegenerateParameter(
                "eigenbasis is undefined for a vanishing field".into(),
            ));
        }
        Ok(Self { params })
    }

    pub fn params(&self) -> &RotatingFieldParams {
        &self.params
    }
}

impl BasisFrame for AdiabaticFrame {
    fn dim(&self) -> usize {
        2
    }

    fn evaluate(&self, t: f64) -> Vec<StateVector> {
        let half = 0.5 * self.params.theta;
        let (s, c) = half.sin_cos();
        let e = C64::from_polar(1.0, -self.params.omega0 * t);
        vec![
            StateVector::new(vec![e * c, C64::new(s, 0.0)]).expect("two components"),
            StateVector::new(vec![e * s, C64::new(-c, 0.0)]).expect("two components"),
        ]
    }

    fn derivative(&self, t: f64) -> Vec<StateVector> {
        let half = 0.5 * self.params.theta;
        let (s, c) = half.sin_cos();
        let de = C64::new(0.0, -self.params.omega0)
            * C64::from_polar(1.0, -self.params.omega0 * t);
        let zero = C64::new(0.0, 0.0);
        vec![
            StateVector::new(vec![de * c, zero]).expect("two components"),
            StateVector::new(vec![de * s, zero]).expect("two components"),
        ]
    }
}

/// The model Hamiltonian as a generic time-dependent operator source.
#[derive(Debug, Clone, Copy)]
pub struct RotatingHamiltonian {
    params: RotatingFieldParams,
}

impl RotatingHamiltonian {
    pub fn new(params: RotatingFieldParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &RotatingFieldParams {
        &self.params
    }
}

impl HamiltonianModel for RotatingHamiltonian {
    fn dim(&self) -> usize {
        2
    }
    fn evaluate(&self, t: f64) -> HermitianMatrix {
        self.params.hamiltonian(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn sample_params() -> RotatingFieldParams {
        RotatingFieldParams::new(1.0, PI / 3.0, 0.5).unwrap()
    }

    #[test]
    fn rejects_degenerate_dressed_field() {
        assert!(matches!(
            RotatingFieldParams::new(1.0, PI, 1.0),
            Err(GeomPhaseError::DegenerateParameter(_))
        ));
        assert!(RotatingFieldParams::new(1.0, PI, 0.999999).is_ok());
    }

    #[test]
    fn dressed_tilt_solves_its_defining_equation() {
        for &(b, theta, omega0) in &[
            (1.0, PI / 3.0, 0.5),
            (1.0, 2.0, -0.7),
            (2.0, 0.3, 4.0),
            (0.0, 1.0, 1.5),
        ] {
            let p = RotatingFieldParams::new(b, theta, omega0).unwrap();
            let t0 = p.theta0();
            let lhs = (b + omega0 * theta.cos()) * t0.sin();
            let rhs = omega0 * theta.sin() * t0.cos();
            assert!((lhs - rhs).abs() < 1e-12, "b={b} theta={theta} w0={omega0}");
        }
    }

    #[test]
    fn basis_is_orthonormal_and_periodic() {
        let p = sample_params();
        for k in 0..7 {
            let t = p.period() * k as f64 / 7.0;
            let [wp, wm] = p.basis_w(t);
            assert!((inner(&wp, &wp).unwrap().re - 1.0).abs() < 1e-14);
            assert!((inner(&wm, &wm).unwrap().re - 1.0).abs() < 1e-14);
            assert!(inner(&wp, &wm).unwrap().norm() < 1e-14);
        }
        let [w0p, w0m] = p.basis_w(0.0);
        let [wtp, wtm] = p.basis_w(p.period());
        assert!(crate::linalg::max_component_distance(&w0p, &wtp).unwrap() < 1e-13);
        assert!(crate::linalg::max_component_distance(&w0m, &wtm).unwrap() < 1e-13);
    }

    #[test]
    fn comoving_generator_is_diagonal_with_quasi_energies() {
        // (H - i d/dt) w = E w must hold exactly, level by level.
        for &(b, theta, omega0) in &[(1.0, PI / 3.0, 0.5), (1.0, 1.9, -2.5), (3.0, 0.2, 0.9)] {
            let p = RotatingFieldParams::new(b, theta, omega0).unwrap();
            for k in 0..5 {
                let t = p.period() * k as f64 / 5.0;
                let h = p.hamiltonian(t);
                let ws = p.basis_w(t);
                let dots = p.basis_w_dot(t);
                for level in [Level::Plus, Level::Minus] {
                    let idx = level.index();
                    let hw = h.apply_vec(ws[idx].as_dvector());
                    let residual = hw
                        - ws[idx].as_dvector() * C64::new(p.energy(level), 0.0)
                        - dots[idx].as_dvector() * C64::new(0.0, 1.0);
                    assert!(residual.iter().all(|z| z.norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn reference_point_couplings_and_energies() {
        // B=1, theta=pi/2, omega0=1: dressed tilt is pi/4, so everything
        // reduces to sqrt(2) arithmetic.
        let p = RotatingFieldParams::new(1.0, PI / 2.0, 1.0).unwrap();
        let r2 = 2.0_f64.sqrt();
        let (hp, hm, cp, cm) = p.diagonal_couplings();
        assert!((hp + r2 / 4.0).abs() < 1e-15);
        assert!((hm - r2 / 4.0).abs() < 1e-15);
        assert!((cp - 0.5 * (1.0 + r2 / 2.0)).abs() < 1e-15);
        assert!((cm - 0.5 * (1.0 - r2 / 2.0)).abs() < 1e-15);
        let (ep, em) = p.energies();
        assert!((ep + (1.0 + r2) / 2.0).abs() < 1e-15);
        assert!((em - (r2 - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn quasi_energies_sum_to_minus_drive_frequency() {
        for &(b, theta, omega0) in &[(1.0, 0.7, 0.3), (2.0, 2.5, -1.2), (0.5, 1.0, 5.0)] {
            let p = RotatingFieldParams::new(b, theta, omega0).unwrap();
            let sum = p.energy(Level::Plus) + p.energy(Level::Minus);
            assert!((sum + omega0).abs() < 1e-13);
        }
    }

    #[test]
    fn diagonal_couplings_match_direct_inner_products() {
        let p = RotatingFieldParams::new(1.3, 1.1, -0.8).unwrap();
        let t = 0.37 * p.period();
        let h = p.hamiltonian(t);
        let ws = p.basis_w(t);
        let dots = p.basis_w_dot(t);
        for level in [Level::Plus, Level::Minus] {
            let idx = level.index();
            let (h_diag, connection) = p.level_couplings(level);
            let hw = h.apply(&ws[idx]).unwrap();
            let got_h = inner(&ws[idx], &hw).unwrap();
            let got_conn = inner(&ws[idx], &dots[idx]).unwrap() * C64::new(0.0, 1.0);
            assert!((got_h.re - h_diag).abs() < 1e-13);
            assert!(got_h.im.abs() < 1e-13);
            assert!((got_conn.re - connection).abs() < 1e-13);
            assert!(got_conn.im.abs() < 1e-13);
        }
    }

    #[test]
    fn exact_amplitude_solves_schrodinger_equation() {
        // i dpsi/dt = H psi, checked with a fourth-order difference in t.
        let p = sample_params();
        let h_step = 1e-4;
        for k in 1..6 {
            let t = p.period() * k as f64 / 6.0;
            for level in [Level::Plus, Level::Minus] {
                let f = |tt: f64| p.exact_amplitude(level, tt).as_dvector().clone();
                let eight = C64::new(8.0, 0.0);
                let d = (f(t - 2.0 * h_step) - f(t - h_step) * eight + f(t + h_step) * eight
                    - f(t + 2.0 * h_step))
                    / C64::new(12.0 * h_step, 0.0);
                let lhs = d * C64::new(0.0, 1.0);
                let rhs = p.hamiltonian(t).apply_vec(&f(t));
                assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-9));
            }
        }
    }

    #[test]
    fn geometric_phase_approaches_adiabatic_limit_for_slow_drive() {
        let theta = 1.0;
        let p = RotatingFieldParams::unit_field(theta, 1e-6).unwrap();
        for level in [Level::Plus, Level::Minus] {
            let exact = p.geometric_phase_exact(level);
            let adiabatic = berry_phase_adiabatic(theta, level);
            assert!((exact - adiabatic).abs() < 1e-4);
        }
    }

    #[test]
    fn grid_hint_grows_as_tolerance_shrinks() {
        let p = RotatingFieldParams::unit_field(1.2, 3.0).unwrap();
        let loose = p.aa_grid_hint(Level::Plus, 1e-4);
        let tight = p.aa_grid_hint(Level::Plus, 1e-10);
        assert!(tight >= loose);
        assert!(loose >= 4000);
    }
}
