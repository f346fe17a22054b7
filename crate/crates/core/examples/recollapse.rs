// Inner branch of a model with a forbidden interval: expansion stalls at
// the smaller positive root and the universe recollapses.

use friedmann_lab::cubic;
use friedmann_lab::dynamics::{self, Direction, EventKind, IntegrationConfig};
use friedmann_lab::params::{Curvature, ReducedParams};
use friedmann_lab::Error;

pub fn run_example() -> friedmann_lab::Result<()> {
    let p = ReducedParams::new(1.0, 1.0, 3.0, Curvature::Closed)?;
    let roots = cubic::trig_roots(&p)?;
    println!("forbidden interval ({:.12}, {:.12})", roots.r1, roots.r2);

    let traj = dynamics::integrate(&p, &IntegrationConfig::new(0.1, 0.5))?;
    let peak = traj.samples.iter().map(|s| s.r).fold(0.0, f64::max);
    println!("max R = {peak:.12} (r1 - max R = {:.2e})", roots.r1 - peak);
    for e in traj.events_of(EventKind::Recollapse) {
        println!("recollapse at t = {:.9}", e.t);
    }

    // The outer branch bounces off r2 instead.
    let cfg = IntegrationConfig::new(3.0, 2.0).direction(Direction::Contracting);
    let outer = dynamics::integrate(&p, &cfg)?;
    let low = outer
        .samples
        .iter()
        .map(|s| s.r)
        .fold(f64::INFINITY, f64::min);
    println!("outer branch: min R = {low:.12}, r2 = {:.12}", roots.r2);

    match dynamics::integrate(&p, &IntegrationConfig::new(1.0, 1.0)) {
        Err(Error::ForbiddenStart { lower, upper, .. }) => {
            println!("R = 1 rejected: inside ({lower:.6}, {upper:.6})")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
