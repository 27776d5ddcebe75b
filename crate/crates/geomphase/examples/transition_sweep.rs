//! Sweep the drive-to-field frequency ratio through eight decades and watch
//! the cyclic geometric phase walk from the adiabatic value pi(1 + cos
//! theta) down to 0 mod 2 pi: the apparent topology of the slow-drive limit
//! is a limit artifact, not an invariant of the exact dynamics.
//!
//! Run with: cargo run --example transition_sweep

use geomphase::cli::{sweep_rows, Spacing, SweepConfig};
use geomphase::rotating::Level;
use std::f64::consts::PI;

fn main() {
    let config = SweepConfig {
        theta: PI / 2.0,
        eta_min: 1e-4,
        eta_max: 1e4,
        n_points: 25,
        spacing: Spacing::Log,
        level: Level::Plus,
        n_steps_per_period: 2000,
        output_path: None,
    };
    let rows = sweep_rows(&config).expect("sweep failed");

    println!("tilt theta = pi/2, field magnitude 1, plus level");
    println!();
    println!(
        "{:>12}  {:>10}  {:>10}  {:>10}  {:>10}",
        "eta", "beta/pi", "closed/pi", "aa/pi", "unwrapped"
    );
    for r in &rows {
        println!(
            "{:>12.4e}  {:>10.6}  {:>10.6}  {:>10.6}  {:>10.6}",
            r.eta,
            r.beta / PI,
            r.beta_closed_form / PI,
            r.aa_phase / PI,
            r.beta_unwrapped / PI,
        );
    }
    println!();
    println!(
        "slow-drive end:  beta = {:.9} pi  (adiabatic value: 1 pi)",
        rows.first().unwrap().beta / PI
    );
    println!(
        "fast-drive end:  beta = {:.9} pi  (trivial value: 2 pi = 0 mod 2 pi)",
        rows.last().unwrap().beta / PI
    );
    let worst = rows
        .iter()
        .map(|r| geomphase::phases::circle_distance(r.beta, r.beta_closed_form))
        .fold(0.0, f64::max);
    println!("max |integrated - closed form| over the sweep: {worst:.3e}");
}
