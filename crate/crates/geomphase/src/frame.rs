//! Time-dependent orthonormal bases `{v_n(t)}` and operations that rephase
//! them. Phase functionals downstream consume frames only through this trait,
//! so gauge covariance can be probed by swapping frames.

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomPhaseError, Result};
use crate::gauge::GaugeTransform;
use crate::grid::TimeGrid;
use crate::linalg::{inner, StateVector};

/// Orthonormal moving basis with a time derivative.
///
/// `evaluate` must return `dim` mutually orthonormal vectors for every probed
/// time; `derivative` returns `d v_n / d t` in the same order.
pub trait BasisFrame: Send + Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, t: f64) -> Vec<StateVector>;
    fn derivative(&self, t: f64) -> Vec<StateVector>;
}

impl<F: BasisFrame + ?Sized> BasisFrame for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn evaluate(&self, t: f64) -> Vec<StateVector> {
        (**self).evaluate(t)
    }
    fn derivative(&self, t: f64) -> Vec<StateVector> {
        (**self).derivative(t)
    }
}

/// Time-independent frame; derivative is identically zero.
#[derive(Debug, Clone)]
pub struct StaticFrame {
    columns: Vec<StateVector>,
}

impl StaticFrame {
    pub fn new(columns: Vec<StateVector>) -> Result<Self> {
        if columns.is_empty() {
            return Err(GeomPhaseError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        let dim = columns[0].dim();
        if columns.len() != dim {
            return Err(GeomPhaseError::Dimension {
                expected: dim,
                found: columns.len(),
            });
        }
        for (i, u) in columns.iter().enumerate() {
            for (j, v) in columns.iter().enumerate() {
                let g = inner(u, v)?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (g - C64::new(target, 0.0)).norm() > 1e-10 {
                    return Err(GeomPhaseError::Numerical(format!(
                        "columns {i} and {j} are not orthonormal (gram entry {g})"
                    )));
                }
            }
        }
        Ok(Self { columns })
    }

    /// Standard basis columns of the identity.
    pub fn identity(dim: usize) -> Result<Self> {
        let columns = (0..dim)
            .map(|k| StateVector::basis(dim, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(columns)
    }
}

impl BasisFrame for StaticFrame {
    fn dim(&self) -> usize {
        self.columns.len()
    }
    fn evaluate(&self, _t: f64) -> Vec<StateVector> {
        self.columns.clone()
    }
    fn derivative(&self, _t: f64) -> Vec<StateVector> {
        self.columns
            .iter()
            .map(|v| v.scaled(C64::new(0.0, 0.0)))
            .collect()
    }
}

type FrameFn = dyn Fn(f64) -> Vec<StateVector> + Send + Sync;

/// Frame defined by a closure; derivative via symmetric differences of width
/// `fd_step`.
#[derive(Clone)]
pub struct FnFrame {
    dim: usize,
    fd_step: f64,
    f: Arc<FrameFn>,
}

impl FnFrame {
    pub fn new(
        dim: usize,
        fd_step: f64,
        f: impl Fn(f64) -> Vec<StateVector> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(GeomPhaseError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        if !(fd_step > 0.0 && fd_step.is_finite()) {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "fd_step must be positive and finite, got {fd_step}"
            )));
        }
        Ok(Self {
            dim,
            fd_step,
            f: Arc::new(f),
        })
    }
}

impl BasisFrame for FnFrame {
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, t: f64) -> Vec<StateVector> {
        (self.f)(t)
    }
    fn derivative(&self, t: f64) -> Vec<StateVector> {
        let h = self.fd_step;
        let plus = (self.f)(t + h);
        let minus = (self.f)(t - h);
        plus.into_iter()
            .zip(minus)
            .map(|(p, m)| {
                crate::linalg::linear_combination(
                    C64::new(0.5 / h, 0.0),
                    &p,
                    C64::new(-0.5 / h, 0.0),
                    &m,
                )
                .expect("frame closure returned mismatched dimensions")
            })
            .collect()
    }
}

/// `base` frame rephased level by level: `v_n -> exp(i alpha_n(t)) v_n`.
///
/// The derivative is exact given the base derivative:
/// `exp(i alpha)(i alpha' v + v')`.
pub struct GaugedFrame<F: BasisFrame> {
    base: F,
    gauge: GaugeTransform,
}

impl<F: BasisFrame> GaugedFrame<F> {
    pub fn base(&self) -> &F {
        &self.base
    }
    pub fn gauge(&self) -> &GaugeTransform {
        &self.gauge
    }
}

impl<F: BasisFrame> BasisFrame for GaugedFrame<F> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn evaluate(&self, t: f64) -> Vec<StateVector> {
        self.base
            .evaluate(t)
            .into_iter()
            .enumerate()
            .map(|(n, v)| v.scaled(C64::from_polar(1.0, self.gauge.alpha(n, t))))
            .collect()
    }

    fn derivative(&self, t: f64) -> Vec<StateVector> {
        let vals = self.base.evaluate(t);
        let ders = self.base.derivative(t);
        vals.into_iter()
            .zip(ders)
            .enumerate()
            .map(|(n, (v, dv))| {
                let phase = C64::from_polar(1.0, self.gauge.alpha(n, t));
                let i_adot = C64::new(0.0, self.gauge.alpha_dot(n, t));
                crate::linalg::linear_combination(phase * i_adot, &v, phase, &dv)
                    .expect("base frame returned mismatched dimensions")
            })
            .collect()
    }
}

/// Attach a gauge to a frame, checking the level counts agree.
pub fn apply_gauge<F: BasisFrame>(base: F, gauge: GaugeTransform) -> Result<GaugedFrame<F>> {
    if gauge.dim() != base.dim() {
        return Err(GeomPhaseError::Dimension {
            expected: base.dim(),
            found: gauge.dim(),
        });
    }
    Ok(GaugedFrame { base, gauge })
}

/// Wrapper that ignores the base frame's analytic derivative and substitutes
/// symmetric finite differences. Used to cross-check closed forms.
pub struct CentralDifference<F: BasisFrame> {
    base: F,
    step: f64,
}

impl<F: BasisFrame> CentralDifference<F> {
    pub fn new(base: F, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "step must be positive and finite, got {step}"
            )));
        }
        Ok(Self { base, step })
    }
}

impl<F: BasisFrame> BasisFrame for CentralDifference<F> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn evaluate(&self, t: f64) -> Vec<StateVector> {
        self.base.evaluate(t)
    }
    fn derivative(&self, t: f64) -> Vec<StateVector> {
        let h = self.step;
        let plus = self.base.evaluate(t + h);
        let minus = self.base.evaluate(t - h);
        plus.into_iter()
            .zip(minus)
            .map(|(p, m)| {
                crate::linalg::linear_combination(
                    C64::new(0.5 / h, 0.0),
                    &p,
                    C64::new(-0.5 / h, 0.0),
                    &m,
                )
                .expect("frame returned mismatched dimensions")
            })
            .collect()
    }
}

/// Largest deviation of the frame's Gram matrix from the identity over the
/// grid. Zero for an exactly orthonormal frame.
pub fn gram_deviation(frame: &dyn BasisFrame, grid: &TimeGrid) -> Result<f64> {
    let dim = frame.dim();
    let mut worst: f64 = 0.0;
    for t in grid.times() {
        let cols = frame.evaluate(t);
        if cols.len() != dim {
            return Err(GeomPhaseError::Dimension {
                expected: dim,
                found: cols.len(),
            });
        }
        for (i, u) in cols.iter().enumerate() {
            for (j, v) in cols.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let dev = (inner(u, v)? - C64::new(target, 0.0)).norm();
                worst = worst.max(dev);
            }
        }
    }
    Ok(worst)
}

/// Random smooth unitary frame `U(t) = exp(-i A(t))` with
/// `A(t) = sum_k [cos(2 pi k t / period) P_k + sin(2 pi k t / period) Q_k]`
/// for seeded random Hermitian `P_k`, `Q_k` with entries bounded by
/// `strength`. Columns of `U(t)` form the frame; derivatives use symmetric
/// differences of width `fd_step`.
pub fn fourier_unitary_frame(
    seed: u64,
    dim: usize,
    n_modes: usize,
    strength: f64,
    period: f64,
    fd_step: f64,
) -> Result<FnFrame> {
    if dim == 0 {
        return Err(GeomPhaseError::Dimension {
            expected: 1,
            found: 0,
        });
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(GeomPhaseError::InvalidConfig(format!(
            "period must be positive and finite, got {period}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_hermitian = |rng: &mut ChaCha8Rng| -> DMatrix<C64> {
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for i in 0..dim {
            m[(i, i)] = C64::new(rng.gen_range(-strength..=strength), 0.0);
            for j in (i + 1)..dim {
                let z = C64::new(
                    rng.gen_range(-strength..=strength),
                    rng.gen_range(-strength..=strength),
                );
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    };
    let mut cos_parts = Vec::with_capacity(n_modes);
    let mut sin_parts = Vec::with_capacity(n_modes);
    for _ in 0..n_modes {
        cos_parts.push(random_hermitian(&mut rng));
        sin_parts.push(random_hermitian(&mut rng));
    }
    FnFrame::new(dim, fd_step, move |t| {
        let mut a = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (k, (p, q)) in cos_parts.iter().zip(&sin_parts).enumerate() {
            let w = TAU * (k + 1) as f64 / period;
            a += p * C64::new((w * t).cos(), 0.0) + q * C64::new((w * t).sin(), 0.0);
        }
        let h = crate::linalg::HermitianMatrix::new_unchecked(a);
        let u = h.exp_neg_i(1.0);
        (0..dim)
            .map(|n| StateVector::from_dvector(u.column(n).into_owned()).expect("unitary column"))
            .collect()
    })
}
