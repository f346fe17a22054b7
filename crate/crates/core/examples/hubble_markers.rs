// Closed-form markers of an expanding closed universe with D > 0.

use std::f64::consts::PI;

use friedmann_lab::markers::{self, HubbleLaw};
use friedmann_lab::params::{self, Curvature, PhysicalParams};

pub fn run_example() -> friedmann_lab::Result<()> {
    // G = c = 1, M = π/2, Λ = 4 reduces to α = 2/3, β = 4/3, γ = 1.
    let phys = PhysicalParams::new(1.0, 1.0, 4.0, PI / 2.0, Curvature::Closed)?;
    let p = params::reduce(&phys)?;
    let m = markers::marker_set(&p)?;
    let law = HubbleLaw::new(p);

    println!(
        "alpha = {:.6}, beta = {:.6}, gamma = {:.6}",
        p.alpha(),
        p.beta(),
        p.gamma()
    );
    println!("R_w    = {:.12}  (R'' = 0)", m.r_w);
    println!(
        "R_min  = {:.12}  H_min = {:.12}",
        m.r_min,
        m.h_min_sq.sqrt()
    );
    println!("R_wH   = {:.12}  (H'' = 0)", m.r_wh);
    println!(
        "H(R_w) = {:.12}  vs asymptote {:.12}: {}",
        m.h_w_sq.sqrt(),
        m.h_inf,
        markers::h_at_r_turning_vs_asymptote(&p)?
    );
    println!("R' >= {:.12} for every expanding solution", m.speed_bound);
    println!("Lambda_min = {:.12}", markers::lambda_lower_bound(&phys)?);

    println!("\n{:>8} {:>14} {:>14}", "R", "H^2", "dH/dt");
    for r in [0.5, m.r_w, m.r_min, m.r_wh, 3.0, 10.0] {
        println!(
            "{r:>8.4} {:>14.8} {:>14.8}",
            law.hubble_sq(r),
            law.hubble_rate(r)
        );
    }
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
