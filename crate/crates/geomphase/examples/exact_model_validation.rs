//! Cross-validate the closed-form rotating-field solution against the two
//! independent numerical routes in the crate: direct fixed-basis
//! integration, and propagation of the generator projected onto the
//! co-rotating frame. Also demonstrates the convergence ladders behind the
//! `validate` subcommand.
//!
//! Run with: cargo run --example exact_model_validation

use geomphase::cli::cmd_validate;
use geomphase::rotating::RotatingFieldParams;
use std::f64::consts::PI;

fn main() {
    let params = RotatingFieldParams::new(1.0, PI / 3.0, 0.7).expect("valid parameters");
    let report = cmd_validate(params, 4000).expect("validation run failed");
    print!("{report}");
    std::process::exit(i32::from(!report.pass));
}
