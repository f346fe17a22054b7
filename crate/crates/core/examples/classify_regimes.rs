// Regime and root structure for a few representative coefficient sets.

use friedmann_lab::cubic::{self, RootStructure};
use friedmann_lab::params::{Curvature, ReducedParams};

pub fn run_example() -> friedmann_lab::Result<()> {
    let cases = [
        ("reference", 2.0 / 3.0, 4.0 / 3.0, 1.0, Curvature::Closed),
        ("forbidden band", 1.0, 1.0, 3.0, Curvature::Closed),
        ("boundary", 2.0, 1.0, 3.0, Curvature::Closed),
        ("flat", 1.0, 1.0, 0.0, Curvature::Flat),
        ("open", 1.0, 1.0, -1.0, Curvature::Open),
    ];
    for (name, a, b, g, eps) in cases {
        let p = ReducedParams::new(a, b, g, eps)?;
        let regime = cubic::classify(&p)?;
        println!("{name:>15}: {:<10} D = {:+.6e}", regime.tag, regime.d);
        match regime.roots {
            RootStructure::OneRealPlusPair { r0, x0, y0 } => {
                println!("{:>17}-r0 = {:.10}, pair {:.10} ± {:.10}i", "", -r0, x0, y0)
            }
            RootStructure::ThreeReal { r0neg, r1, r2, .. } => {
                println!("{:>17}roots {r0neg:.10}, {r1:.10}, {r2:.10}", "");
                println!("{:>17}R ∈ ({r1:.6}, {r2:.6}) is never reached", "");
            }
            RootStructure::Degenerate => println!("{:>17}double root, branching case", ""),
        }
    }
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
