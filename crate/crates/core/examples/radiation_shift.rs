// A radiation term δ/R² moves the Hubble minimum outward.

use friedmann_lab::dynamics::{self, IntegrationConfig};
use friedmann_lab::markers;
use friedmann_lab::params::{Curvature, ReducedParams};

pub fn run_example() -> friedmann_lab::Result<()> {
    let base = ReducedParams::new(2.0 / 3.0, 4.0 / 3.0, 1.0, Curvature::Closed)?;
    println!(
        "{:>8} {:>14} {:>14}",
        "delta", "R_min (exact)", "R_min (orbit)"
    );
    for delta in [0.0, 1.0 / 32.0, 0.125, 0.5] {
        let p = base.with_radiation(delta)?;
        let exact = markers::radiation_corrected_rmin(&p)?;
        let traj = dynamics::integrate(&p, &IntegrationConfig::new(0.2, 5.0))?;
        let found = dynamics::locate_h_minimum(&traj)?;
        println!("{delta:>8.5} {exact:>14.10} {:>14.10}", found.r);
    }
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
