//! Command implementations behind the binary: parameter sweeps with CSV
//! output, an oracle validation run, the gauge-fuzzing campaign, and
//! single-point phase evaluation. Everything here is a thin, deterministic
//! orchestration of the library; the binary only parses flags and maps
//! report outcomes to exit codes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{GeomPhaseError, Result};
use crate::evolution::{
    effective_hamiltonian, evolve, reconstruct_amplitude, schrodinger_integrate, AmplitudeSeries,
};
use crate::frame::{apply_gauge, BasisFrame, StaticFrame};
use crate::gauge::gauge_fuzz_sample;
use crate::grid::TimeGrid;
use crate::linalg::max_component_distance;
use crate::phases::{
    aa_phase, circle_distance, dynamical_phase, geometric_phase_beta, holonomy, noncyclic_phase,
    unwrap_phase_series,
};
use crate::report::RunReport;
use crate::rotating::{
    berry_phase_adiabatic, Level, RotatingFieldParams, RotatingFrame, RotatingHamiltonian,
};

/// Spacing of sweep points across the frequency-ratio axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// Parameters of one frequency-ratio sweep at fixed tilt. The field
/// magnitude is pinned to 1 so `eta` is the drive frequency directly.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub theta: f64,
    pub eta_min: f64,
    pub eta_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
    pub level: Level,
    pub n_steps_per_period: usize,
    pub output_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && (0.0..=std::f64::consts::PI).contains(&self.theta)) {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "theta must lie in [0, pi], got {}",
                self.theta
            )));
        }
        if !(self.eta_min.is_finite() && self.eta_min > 0.0) {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "eta_min must be positive, got {}",
                self.eta_min
            )));
        }
        if !(self.eta_max.is_finite() && self.eta_min < self.eta_max) {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "need eta_min < eta_max, got [{}, {}]",
                self.eta_min, self.eta_max
            )));
        }
        if self.n_points < 2 {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "need at least 2 sweep points, got {}",
                self.n_points
            )));
        }
        if self.n_steps_per_period < 100 {
            return Err(GeomPhaseError::InvalidConfig(format!(
                "need at least 100 steps per period, got {}",
                self.n_steps_per_period
            )));
        }
        Ok(())
    }

    /// Sweep points, endpoints exact, interior spaced per `spacing`.
    pub fn eta_values(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.eta_min;
                }
                if k == n - 1 {
                    return self.eta_max;
                }
                let frac = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.eta_min + frac * (self.eta_max - self.eta_min),
                    Spacing::Log => {
                        (self.eta_min.ln() + frac * (self.eta_max.ln() - self.eta_min.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// One sweep point. Column names follow the CSV schema; when the sweep is
/// configured for the minus level the beta/aa/dyn columns hold that level's
/// values under the same names.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub eta: f64,
    pub theta0: f64,
    pub beta: f64,
    pub beta_unwrapped: f64,
    pub beta_closed_form: f64,
    pub berry_adiabatic: f64,
    pub aa_phase: f64,
    pub dyn_phase: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub aa_grid_capped: bool,
}

/// Hard ceiling on the per-row grid used for the difference-based phase
/// column; rows that would need more points are computed at the ceiling and
/// flagged.
pub const AA_STEP_CAP: usize = 2_000_000;

const AA_BIAS_TOL: f64 = 1e-7;

fn sweep_row(config: &SweepConfig, eta: f64) -> Result<SweepRow> {
    let p = RotatingFieldParams::unit_field(config.theta, eta)?;
    let level = config.level;
    let grid = TimeGrid::new(0.0, p.period(), config.n_steps_per_period)?;
    let frame = RotatingFrame::new(p);
    let h = RotatingHamiltonian::new(p);
    let decomposition = geometric_phase_beta(&h, &frame, level.index(), &grid)?;

    let hint = p.aa_grid_hint(level, AA_BIAS_TOL);
    let n_aa = hint.min(AA_STEP_CAP);
    let aa_grid = TimeGrid::new(0.0, p.period(), n_aa)?;
    let series = AmplitudeSeries::sample(aa_grid, |t| p.exact_amplitude(level, t));
    let aa = aa_phase(&series)?;

    Ok(SweepRow {
        eta,
        theta0: p.theta0(),
        beta: decomposition.geometric_phase,
        beta_unwrapped: decomposition.geometric_phase,
        beta_closed_form: p.geometric_phase_exact(level),
        berry_adiabatic: berry_phase_adiabatic(config.theta, level),
        aa_phase: aa.geometric_phase,
        dyn_phase: decomposition.dynamical_phase,
        e_plus: p.energy(Level::Plus),
        e_minus: p.energy(Level::Minus),
        aa_grid_capped: hint > AA_STEP_CAP,
    })
}

/// Compute all sweep rows. Points run in parallel; rows come back in eta
/// order and the unwrapped column is filled by a sequential pass.
pub fn sweep_rows(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let etas = config.eta_values();
    let mut rows: Vec<SweepRow> = etas
        .par_iter()
        .map(|&eta| sweep_row(config, eta))
        .collect::<Result<_>>()?;
    let unwrapped = unwrap_phase_series(&rows.iter().map(|r| r.beta).collect::<Vec<_>>());
    for (row, u) in rows.iter_mut().zip(unwrapped) {
        row.beta_unwrapped = u;
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "eta,theta0,beta_plus,beta_plus_unwrapped,beta_closed_form,\
berry_adiabatic,aa_phase,dyn_phase,E_plus,E_minus";

/// Write rows in the pinned CSV schema: header, comma separators, '.'
/// decimal point, 17 significant digits per value.
pub fn write_csv(rows: &[SweepRow], sink: &mut dyn Write) -> Result<()> {
    writeln!(sink, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            sink,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.eta,
            r.theta0,
            r.beta,
            r.beta_unwrapped,
            r.beta_closed_form,
            r.berry_adiabatic,
            r.aa_phase,
            r.dyn_phase,
            r.e_plus,
            r.e_minus,
        )?;
    }
    Ok(())
}

/// Run a sweep, emit the CSV (to the configured path, or stdout when none is
/// set), and report the dual-path agreement between the integrated and
/// closed-form geometric phase columns.
pub fn cmd_sweep(config: &SweepConfig) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(format!(
        "sweep theta={} eta=[{}, {}] n={} level={}",
        config.theta, config.eta_min, config.eta_max, config.n_points, config.level
    ));
    let rows = sweep_rows(config)?;

    match &config.output_path {
        Some(path) => {
            let file = File::create(path)?;
            let mut sink = BufWriter::new(file);
            write_csv(&rows, &mut sink)?;
            sink.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut sink = stdout.lock();
            write_csv(&rows, &mut sink)?;
        }
    }

    let max_closed_gap = rows
        .iter()
        .map(|r| circle_distance(r.beta, r.beta_closed_form))
        .fold(0.0, f64::max);
    report.check("max |beta - closed_form| over rows", max_closed_gap, 1e-6);
    let max_jump = rows
        .windows(2)
        .map(|w| (w[1].beta_unwrapped - w[0].beta_unwrapped).abs())
        .fold(0.0, f64::max);
    report.info("max adjacent unwrapped jump", max_jump);
    report.info("rows", rows.len() as f64);
    let capped = rows.iter().filter(|r| r.aa_grid_capped).count();
    if capped > 0 {
        report.annotate(
            "rows with capped aa grid",
            capped as f64,
            "aa_phase column above its bias target there",
        );
    }
    report.finish(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Oracle ladder for one parameter point: the closed-form amplitude against
/// the fixed-basis integrator and against propagation of the projected
/// generator, plus decoupling, unitarity, and convergence-order checks.
pub fn cmd_validate(params: RotatingFieldParams, n_steps: usize) -> Result<RunReport> {
    if n_steps < 100 {
        return Err(GeomPhaseError::InvalidConfig(format!(
            "need at least 100 steps, got {n_steps}"
        )));
    }
    let start = Instant::now();
    let mut report = RunReport::new(format!(
        "validate b={} theta={} omega0={} n_steps={n_steps}",
        params.b(),
        params.theta(),
        params.omega0()
    ));
    report.info("theta0", params.theta0());
    report.info("period", params.period());
    report.info("E_plus", params.energy(Level::Plus));
    report.info("E_minus", params.energy(Level::Minus));
    if params.has_degenerate_spectrum() {
        report.annotate(
            "degenerate spectrum",
            1.0,
            "b = 0: instantaneous levels cross; checks still run",
        );
    }

    let grid = TimeGrid::new(0.0, params.period(), n_steps)?;
    let frame = RotatingFrame::new(params);
    let h = RotatingHamiltonian::new(params);

    // Fixed-basis integration against the closed form, both levels.
    let rk4_dev = |level: Level, g: &TimeGrid| -> Result<f64> {
        let psi0 = params.exact_amplitude(level, 0.0);
        let series = schrodinger_integrate(&h, &psi0, g)?;
        let mut worst: f64 = 0.0;
        for (k, t) in g.times().enumerate() {
            let exact = params.exact_amplitude(level, t);
            worst = worst.max(max_component_distance(series.state(k), &exact)?);
        }
        Ok(worst)
    };
    for level in [Level::Plus, Level::Minus] {
        report.check(
            format!("max |exact - integrated| ({level})"),
            rk4_dev(level, &grid)?,
            1e-6,
        );
    }

    // Projected-generator propagation in the co-rotating frame, both levels.
    let series = effective_hamiltonian(&h, &frame, &grid)?;
    report.check("max off-diagonal coupling", series.max_off_diagonal(), 1e-10);
    report.check(
        "max hermiticity deviation",
        series.max_hermiticity_deviation(),
        1e-8,
    );
    let evolution = evolve(&series)?;
    report.check("max unitarity deviation", evolution.unitarity_deviation(), 1e-8);
    for level in [Level::Plus, Level::Minus] {
        let mut worst: f64 = 0.0;
        for t in grid.times() {
            let rebuilt = reconstruct_amplitude(&frame, &evolution, level.index(), t)?;
            let exact = params.exact_amplitude(level, t);
            worst = worst.max(max_component_distance(&rebuilt, &exact)?);
        }
        report.check(format!("max |exact - propagated| ({level})"), worst, 1e-6);
    }

    // Convergence ladders on a coarse pair, where the error is far above the
    // floating-point floor: fixed-basis integration and the naive
    // static-frame propagation route.
    let n_lo = (n_steps / 10).max(100);
    let n_hi = 2 * n_lo;
    let grid_lo = TimeGrid::new(0.0, params.period(), n_lo)?;
    let grid_hi = TimeGrid::new(0.0, params.period(), n_hi)?;
    let ratio = rk4_dev(Level::Plus, &grid_lo)? / rk4_dev(Level::Plus, &grid_hi)?.max(1e-300);
    report.check_at_least(format!("integrator halving ratio ({n_lo}:{n_hi})"), ratio, 3.5);

    let static_route = |g: &TimeGrid| -> Result<f64> {
        // Propagate in the static basis, where the projected generator is
        // just H(t): coefficients at T are U(T) applied to the start.
        let static_frame = StaticFrame::identity(2)?;
        let evo = evolve(&effective_hamiltonian(&h, &static_frame, g)?)?;
        let psi0 = params.exact_amplitude(Level::Plus, 0.0);
        let u = evo.final_operator();
        let mut acc = nalgebra::DVector::from_element(2, num_complex::Complex64::new(0.0, 0.0));
        for n in 0..2 {
            for m in 0..2 {
                acc[n] += u[(n, m)] * psi0.component(m);
            }
        }
        let rebuilt = crate::linalg::StateVector::from_dvector(acc)?;
        let exact = params.exact_amplitude(Level::Plus, g.t_end());
        max_component_distance(&rebuilt, &exact)
    };
    let ratio2 = static_route(&grid_lo)? / static_route(&grid_hi)?.max(1e-300);
    report.check_at_least(format!("propagator halving ratio ({n_lo}:{n_hi})"), ratio2, 3.5);

    report.finish(start.elapsed().as_secs_f64());
    Ok(report)
}

struct FuzzBaseline {
    beta: [f64; 2],
    holonomy_mod: [f64; 2],
    holonomy_arg: [f64; 2],
    noncyclic: [f64; 2],
    dynamical: [f64; 2],
}

fn fuzz_measure(
    frame: &dyn BasisFrame,
    h: &RotatingHamiltonian,
    grid: &TimeGrid,
    grid_half: &TimeGrid,
) -> Result<FuzzBaseline> {
    let mut out = FuzzBaseline {
        beta: [0.0; 2],
        holonomy_mod: [0.0; 2],
        holonomy_arg: [0.0; 2],
        noncyclic: [0.0; 2],
        dynamical: [0.0; 2],
    };
    for level in 0..2 {
        out.beta[level] = geometric_phase_beta(h, frame, level, grid)?.geometric_phase;
        let (hol, arg) = holonomy(frame, level, grid)?;
        out.holonomy_mod[level] = hol.norm();
        out.holonomy_arg[level] = arg;
        out.noncyclic[level] = noncyclic_phase(frame, level, grid_half)?.geometric_phase;
        out.dynamical[level] = dynamical_phase(h, frame, level, grid)?;
    }
    Ok(out)
}

/// Gauge-fuzz campaign: rephase the co-rotating frame by seeded random smooth
/// per-level angles and verify that every reported phase quantity moves by at
/// most 1e-8. Gauges are periodic over half the drive period so both the
/// full-cycle and half-cycle extraction windows see whole gauge periods.
pub fn cmd_gauge_fuzz(
    params: RotatingFieldParams,
    seed: u64,
    n_trials: usize,
    n_modes: usize,
    amplitude_bound: f64,
) -> Result<RunReport> {
    if n_trials < 1 {
        return Err(GeomPhaseError::InvalidConfig(
            "need at least one trial".into(),
        ));
    }
    let start = Instant::now();
    let mut report = RunReport::new(format!(
        "gauge-fuzz seed={seed} trials={n_trials} modes={n_modes} bound={amplitude_bound} \
         b={} theta={} omega0={}",
        params.b(),
        params.theta(),
        params.omega0()
    ));
    let frame = RotatingFrame::new(params);
    let h = RotatingHamiltonian::new(params);
    let period = params.period();
    let grid = TimeGrid::new(0.0, period, 2000)?;
    let grid_half = TimeGrid::new(0.0, 0.5 * period, 1000)?;
    let gauge_period = 0.5 * period;

    let base = fuzz_measure(&frame, &h, &grid, &grid_half)?;
    let mut worst_beta: f64 = 0.0;
    let mut worst_hol_mod: f64 = 0.0;
    let mut worst_hol_arg: f64 = 0.0;
    let mut worst_noncyclic: f64 = 0.0;
    let mut worst_dynamical: f64 = 0.0;
    for trial in 0..n_trials {
        let gauge = gauge_fuzz_sample(
            seed.wrapping_add(trial as u64),
            2,
            n_modes,
            amplitude_bound,
            gauge_period,
        );
        let gauged = apply_gauge(&frame, gauge)?;
        let q = fuzz_measure(&gauged, &h, &grid, &grid_half)?;
        for level in 0..2 {
            worst_beta = worst_beta.max(circle_distance(q.beta[level], base.beta[level]));
            worst_hol_mod =
                worst_hol_mod.max((q.holonomy_mod[level] - base.holonomy_mod[level]).abs());
            worst_hol_arg =
                worst_hol_arg.max(circle_distance(q.holonomy_arg[level], base.holonomy_arg[level]));
            worst_noncyclic =
                worst_noncyclic.max(circle_distance(q.noncyclic[level], base.noncyclic[level]));
            worst_dynamical =
                worst_dynamical.max((q.dynamical[level] - base.dynamical[level]).abs());
        }
    }
    report.check("max beta shift", worst_beta, 1e-8);
    report.check("max holonomy modulus shift", worst_hol_mod, 1e-8);
    report.check("max holonomy phase shift", worst_hol_arg, 1e-8);
    report.check("max non-cyclic phase shift", worst_noncyclic, 1e-8);
    report.check("max dynamical phase shift", worst_dynamical, 1e-8);
    report.info("trials", n_trials as f64);
    report.finish(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Evaluate every phase quantity at a single parameter point and
/// cross-check the two independent routes to the cyclic geometric phase.
pub fn cmd_phase(params: RotatingFieldParams, level: Level, n_steps: usize) -> Result<RunReport> {
    if n_steps < 100 {
        return Err(GeomPhaseError::InvalidConfig(format!(
            "need at least 100 steps, got {n_steps}"
        )));
    }
    let start = Instant::now();
    let mut report = RunReport::new(format!(
        "phase b={} theta={} omega0={} level={level} n_steps={n_steps}",
        params.b(),
        params.theta(),
        params.omega0()
    ));
    report.info("theta0", params.theta0());
    report.info("vartheta", params.vartheta());
    report.info("period", params.period());
    report.info("E_plus", params.energy(Level::Plus));
    report.info("E_minus", params.energy(Level::Minus));

    let grid = TimeGrid::new(0.0, params.period(), n_steps)?;
    let frame = RotatingFrame::new(params);
    let h = RotatingHamiltonian::new(params);
    let decomposition = geometric_phase_beta(&h, &frame, level.index(), &grid)?;
    report.info("geometric phase (integrated)", decomposition.geometric_phase);
    report.info("dynamical phase", decomposition.dynamical_phase);
    report.info("total phase", decomposition.total_phase);
    report.info(
        "endpoint overlap magnitude",
        decomposition.overlap_prefactor.norm(),
    );
    report.info("cyclic", f64::from(decomposition.cyclic));

    let closed = params.geometric_phase_exact(level);
    report.info("geometric phase (closed form)", closed);
    report.info(
        "berry phase (slow-drive limit)",
        berry_phase_adiabatic(params.theta(), level),
    );
    report.check(
        "closed form vs integrated",
        circle_distance(decomposition.geometric_phase, closed),
        1e-6,
    );
    report.check(
        "decomposition consistency",
        decomposition.consistency_residual(),
        1e-8,
    );

    let n_aa = params.aa_grid_hint(level, AA_BIAS_TOL).min(AA_STEP_CAP);
    let aa_grid = TimeGrid::new(0.0, params.period(), n_aa)?;
    let series = AmplitudeSeries::sample(aa_grid, |t| params.exact_amplitude(level, t));
    let aa = aa_phase(&series)?;
    report.info("projective phase from amplitude", aa.geometric_phase);
    report.check(
        "amplitude route vs frame route",
        circle_distance(aa.geometric_phase, decomposition.geometric_phase),
        1e-5,
    );

    let grid_half = TimeGrid::new(0.0, 0.5 * params.period(), n_steps / 2)?;
    let open = noncyclic_phase(&frame, level.index(), &grid_half)?;
    report.info("non-cyclic phase at half period", open.geometric_phase);
    report.finish(start.elapsed().as_secs_f64());
    Ok(report)
}
