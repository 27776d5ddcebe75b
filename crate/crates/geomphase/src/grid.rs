//! Uniform time grids and the trapezoid quadrature used everywhere.

use crate::error::{GeomPhaseError, Result};

/// Uniform grid over `[t_start, t_end]` with `n_steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(GeomPhaseError::Grid("non-finite grid bounds".into()));
        }
        if t_end <= t_start {
            return Err(GeomPhaseError::Grid(format!(
                "t_end = {t_end} must exceed t_start = {t_start}"
            )));
        }
        if n_steps == 0 {
            return Err(GeomPhaseError::Grid("n_steps must be at least 1".into()));
        }
        Ok(Self {
            t_start,
            t_end,
            n_steps,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn span(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, `n_steps + 1`.
    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(&self) -> f64 {
        self.span() / self.n_steps as f64
    }

    /// k-th grid point; the last point is exactly `t_end`.
    pub fn t(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points()).map(move |k| self.t(k))
    }

    /// Default finite-difference step for frames differentiated numerically.
    pub fn fd_step(&self) -> f64 {
        self.dt() / 10.0
    }

    /// Index of a time that must lie on the grid (relative tolerance 1e-6 of dt).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let rel = (t - self.t_start) / self.dt();
        let k = rel.round();
        if (rel - k).abs() > 1e-6 || k < 0.0 || k > self.n_steps as f64 {
            return Err(GeomPhaseError::Grid(format!(
                "t = {t} is not a grid point of [{}, {}] with {} steps",
                self.t_start, self.t_end, self.n_steps
            )));
        }
        Ok(k as usize)
    }
}

/// Composite trapezoid rule with compensated summation.
pub fn trapz(samples: &[f64], dt: f64) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |x: f64| {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    add(0.5 * samples[0]);
    for &s in &samples[1..samples.len() - 1] {
        add(s);
    }
    add(0.5 * samples[samples.len() - 1]);
    sum * dt
}

/// Cumulative trapezoid rule; output has the same length as the input,
/// starting at zero.
pub fn cumtrapz(samples: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..samples.len() {
        acc += 0.5 * (samples[k - 1] + samples[k]) * dt;
        out.push(acc);
    }
    out
}
