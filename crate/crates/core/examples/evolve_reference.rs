// Integrates the reference solution and compares the detected events with
// the closed-form markers.

use friedmann_lab::dynamics::{self, EventKind, IntegrationConfig};
use friedmann_lab::markers;
use friedmann_lab::params::{Curvature, ReducedParams};

pub fn run_example() -> friedmann_lab::Result<()> {
    let p = ReducedParams::new(2.0 / 3.0, 4.0 / 3.0, 1.0, Curvature::Closed)?;
    let m = markers::marker_set(&p)?;
    let traj = dynamics::integrate(&p, &IntegrationConfig::new(0.1, 4.0))?;

    println!(
        "{} samples, t in [{}, {}]",
        traj.samples.len(),
        traj.t_start(),
        traj.t_end()
    );
    for e in &traj.events {
        println!(
            "{:<16} t = {:.9}  R = {:.9}  H = {:.9}",
            e.kind.as_str(),
            e.t,
            e.r,
            e.h
        );
    }
    let min = dynamics::locate_h_minimum(&traj)?;
    println!(
        "R_min error {:.2e}, H_min error {:.2e}",
        (min.r - m.r_min).abs(),
        (min.h - m.h_min_sq.sqrt()).abs()
    );
    let slowest = traj
        .samples
        .iter()
        .map(|s| s.rdot)
        .fold(f64::INFINITY, f64::min);
    println!("min R' = {slowest:.9} >= bound {:.9}", m.speed_bound);
    println!("max energy residual {:.2e}", traj.max_energy_residual());
    assert_eq!(traj.events_of(EventKind::HubbleMinimum).count(), 1);
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
