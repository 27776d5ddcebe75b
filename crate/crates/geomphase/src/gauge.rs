//! Per-level rephasing transforms `v_n -> exp(i alpha_n(t)) v_n` and the
//! seeded fuzzing source that samples smooth random gauges.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomPhaseError, Result};
use crate::grid::TimeGrid;

/// Smooth real scalar function of time with an analytic derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseFunction {
    Constant(f64),
    /// `a0 + sum_k (cos_coeffs[k-1] cos(2 pi k t / period) + sin_coeffs[k-1] sin(2 pi k t / period))`
    Fourier {
        a0: f64,
        cos_coeffs: Vec<f64>,
        sin_coeffs: Vec<f64>,
        period: f64,
    },
}

impl PhaseFunction {
    pub fn evaluate(&self, t: f64) -> f64 {
        match self {
            PhaseFunction::Constant(c) => *c,
            PhaseFunction::Fourier {
                a0,
                cos_coeffs,
                sin_coeffs,
                period,
            } => {
                let mut v = *a0;
                for (k, (a, b)) in cos_coeffs.iter().zip(sin_coeffs).enumerate() {
                    let w = TAU * (k + 1) as f64 / period;
                    v += a * (w * t).cos() + b * (w * t).sin();
                }
                v
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            PhaseFunction::Constant(_) => 0.0,
            PhaseFunction::Fourier {
                cos_coeffs,
                sin_coeffs,
                period,
                ..
            } => {
                let mut v = 0.0;
                for (k, (a, b)) in cos_coeffs.iter().zip(sin_coeffs).enumerate() {
                    let w = TAU * (k + 1) as f64 / period;
                    v += w * (b * (w * t).cos() - a * (w * t).sin());
                }
                v
            }
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            PhaseFunction::Constant(c) => PhaseFunction::Constant(-c),
            PhaseFunction::Fourier {
                a0,
                cos_coeffs,
                sin_coeffs,
                period,
            } => PhaseFunction::Fourier {
                a0: -a0,
                cos_coeffs: cos_coeffs.iter().map(|x| -x).collect(),
                sin_coeffs: sin_coeffs.iter().map(|x| -x).collect(),
                period: *period,
            },
        }
    }
}

/// One real phase `alpha_n(t)` per level.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    alphas: Vec<PhaseFunction>,
}

impl GaugeTransform {
    pub fn new(alphas: Vec<PhaseFunction>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(GeomPhaseError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { alphas })
    }

    /// Identity gauge on `dim` levels.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![PhaseFunction::Constant(0.0); dim])
    }

    /// Same constant phase on every level.
    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        Self::new(vec![PhaseFunction::Constant(c); dim])
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha(&self, level: usize, t: f64) -> f64 {
        self.alphas[level].evaluate(t)
    }

    pub fn alpha_dot(&self, level: usize, t: f64) -> f64 {
        self.alphas[level].derivative(t)
    }

    pub fn functions(&self) -> &[PhaseFunction] {
        &self.alphas
    }

    /// Inverse gauge: `alpha_n -> -alpha_n`.
    pub fn negated(&self) -> Self {
        Self {
            alphas: self.alphas.iter().map(PhaseFunction::negated).collect(),
        }
    }

    /// Finiteness and smoothness screen: second differences on the grid stay
    /// bounded, which catches NaN, infinities, and jump discontinuities.
    pub fn validate_on(&self, grid: &TimeGrid) -> Result<()> {
        let h = grid.fd_step();
        for (n, _) in self.alphas.iter().enumerate() {
            for t in grid.times() {
                let (m, c, p) = (
                    self.alpha(n, t - h),
                    self.alpha(n, t),
                    self.alpha(n, t + h),
                );
                if !(m.is_finite() && c.is_finite() && p.is_finite()) {
                    return Err(GeomPhaseError::Numerical(format!(
                        "gauge level {n} is non-finite near t = {t}"
                    )));
                }
                let second = (p - 2.0 * c + m) / (h * h);
                if second.abs() > 1e9 {
                    return Err(GeomPhaseError::Numerical(format!(
                        "gauge level {n} is not smooth near t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Deterministic smooth random gauge: truncated Fourier series per level with
/// coefficients drawn uniformly from `[-amplitude_bound, amplitude_bound]`.
///
/// `t_ref` sets the series period. Identical inputs reproduce identical
/// transforms; `max |alpha_n| <= (1 + 2 n_modes) * amplitude_bound`.
pub fn gauge_fuzz_sample(
    seed: u64,
    dim: usize,
    n_modes: usize,
    amplitude_bound: f64,
    t_ref: f64,
) -> GaugeTransform {
    assert!(dim > 0, "gauge needs at least one level");
    assert!(t_ref > 0.0 && t_ref.is_finite(), "t_ref must be positive");
    let bound = amplitude_bound.max(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> f64 {
        if bound == 0.0 {
            0.0
        } else {
            rng.gen_range(-bound..=bound)
        }
    };
    let alphas = (0..dim)
        .map(|_| {
            let a0 = draw(&mut rng);
            let mut cos_coeffs = Vec::with_capacity(n_modes);
            let mut sin_coeffs = Vec::with_capacity(n_modes);
            for _ in 0..n_modes {
                cos_coeffs.push(draw(&mut rng));
                sin_coeffs.push(draw(&mut rng));
            }
            PhaseFunction::Fourier {
                a0,
                cos_coeffs,
                sin_coeffs,
                period: t_ref,
            }
        })
        .collect();
    GaugeTransform { alphas }
}
