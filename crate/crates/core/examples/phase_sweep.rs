// Regime map over (Λ, M) for a closed universe with G = c = 1. The
// boundary follows Λ = π²/4M².

use std::f64::consts::PI;

use friedmann_lab::cli::{self, Axis, Settings};
use friedmann_lab::cubic::RegimeTag;

pub fn run_example() -> friedmann_lab::Result<()> {
    let base = Settings::parse("G = 1\nc = 1\nlambda = 1\nmass = 1\nepsilon = 1")?;
    let x = Axis {
        param: "lambda".into(),
        min: 0.5,
        max: 2.0,
        steps: 40,
    };
    let y = Axis {
        param: "mass".into(),
        min: PI / 4.0,
        max: PI,
        steps: 20,
    };
    let grid = cli::sweep(&base, &x, &y)?;

    println!(
        "rows: M from {:.3} (top) to {:.3}; columns: Lambda from {} to {}",
        y.max, y.min, x.min, x.max
    );
    println!("'#' forbidden interval, '.' expands forever, 'o' boundary");
    for iy in (0..y.steps).rev() {
        let row: String = grid
            .iter()
            .filter(|r| r.iy == iy)
            .map(|r| match r.regime {
                RegimeTag::CaseIIi => '#',
                RegimeTag::CaseIIii => '.',
                _ => 'o',
            })
            .collect();
        let m = y.point(iy);
        println!("{m:6.3} {row}  Lambda_min = {:.3}", PI * PI / (4.0 * m * m));
    }
    Ok(())
}

fn main() -> friedmann_lab::Result<()> {
    run_example()
}
