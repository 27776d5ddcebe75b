//! Split the phase acquired over one drive period into its dynamical and
//! geometric parts, three independent ways: the frame-integral route, the
//! closed form, and the projective route that sees only the amplitude
//! trajectory and never the frame. Also evaluates the open-path phase at
//! half a period, where the evolution is not cyclic.
//!
//! Run with: cargo run --example phase_decomposition

use geomphase::evolution::AmplitudeSeries;
use geomphase::grid::TimeGrid;
use geomphase::phases::{aa_phase, geometric_phase_beta, noncyclic_phase};
use geomphase::rotating::{Level, RotatingFieldParams, RotatingFrame, RotatingHamiltonian};
use std::f64::consts::PI;

fn main() {
    let params = RotatingFieldParams::new(1.0, PI / 2.0, 1.0).expect("valid parameters");
    let level = Level::Plus;
    let period = params.period();
    println!(
        "b = 1, theta = pi/2, omega0 = 1, level = {level}; dressed tilt theta0 = {:.12}",
        params.theta0()
    );
    println!();

    let grid = TimeGrid::new(0.0, period, 2000).expect("grid");
    let frame = RotatingFrame::new(params);
    let h = RotatingHamiltonian::new(params);
    let d = geometric_phase_beta(&h, &frame, level.index(), &grid).expect("beta");
    println!("frame route over one period:");
    println!("  dynamical phase   {:+.12}", d.dynamical_phase);
    println!("  geometric phase   {:+.12}", d.geometric_phase);
    println!("  total (mod 2 pi)  {:+.12}", d.total_phase);
    println!("  cyclic            {}", d.cyclic);
    println!(
        "  consistency |geometric - (total + dynamical)| mod 2 pi = {:.3e}",
        d.consistency_residual()
    );
    println!();

    let closed = params.geometric_phase_exact(level);
    println!("closed form:        {closed:+.12}");

    let n = params.aa_grid_hint(level, 1e-7);
    let aa_grid = TimeGrid::new(0.0, period, n).expect("grid");
    let series = AmplitudeSeries::sample(aa_grid, |t| params.exact_amplitude(level, t));
    let aa = aa_phase(&series).expect("projective route");
    println!("projective route:   {:+.12}  ({n} samples)", aa.geometric_phase);
    println!();

    let half = TimeGrid::new(0.0, 0.5 * period, 1000).expect("grid");
    let open = noncyclic_phase(&frame, level.index(), &half).expect("open path");
    println!("open path over half a period:");
    println!("  geometric phase   {:+.12}", open.geometric_phase);
    println!(
        "  endpoint overlap  {:.12}  (cyclic: {})",
        open.overlap_prefactor.norm(),
        open.cyclic
    );
}
