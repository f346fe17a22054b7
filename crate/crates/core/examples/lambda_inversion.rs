// Λ from an observed Hubble minimum, and the smallest Λ that still lets a
// closed universe of mass M expand forever.

use std::f64::consts::PI;

use friedmann_lab::markers;
use friedmann_lab::params::{Curvature, PhysicalParams};

pub fn run_example() -> friedmann_lab::Result<()> {
    let (g, c) = (1.0, 1.0);
    println!(
        "{:>8} {:>8} {:>14} {:>14} {:>14}",
        "M", "H_min", "Lambda", "Lambda_min", "R_min"
    );
    for mass in [PI / 4.0, PI / 2.0, PI] {
        for h_min in [0.0, 0.5, 1.0] {
            let lambda = markers::lambda_from_hmin(h_min, g, c, mass)?;
            let phys = PhysicalParams::new(g, c, lambda, mass, Curvature::Closed)?;
            let bound = markers::lambda_lower_bound(&phys)?;
            let r_min = if h_min > 0.0 {
                format!("{:14.8}", markers::r_min_physical(&phys)?)
            } else {
                format!("{:>14}", "degenerate")
            };
            println!("{mass:>8.4} {h_min:>8.3} {lambda:>14.8} {bound:>14.8} {r_min}");
            if h_min > 0.0 {
                let back = markers::h_min_physical(&phys)?;
                assert!((back - h_min).abs() <= 1e-12 * h_min.max(1.0));
            }
        }
    }
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
