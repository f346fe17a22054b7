//! Classification and simulation of the matter + cosmological-constant
//! Friedmann equation
//!
//! ```text
//! R'(t)² = α/R + βR² − γ   (+ δ/R² with radiation)
//! ```
//!
//! The crate is organized bottom-up:
//!
//! - [`params`]: physical inputs (G, c, Λ, M, ε) and their reduction to the
//!   coefficients (α, β, γ, δ), plus the 3-sphere volume and matter density.
//! - [`cubic`]: the depressed cubic R³ + pR + q obtained by multiplying the
//!   right side by R/β; discriminant, root structure and regime.
//! - [`markers`]: closed-form turning points, the Hubble minimum, the
//!   asymptote and the Λ bound / inversion.
//! - [`dynamics`]: adaptive Runge–Kutta integration of R(t) with event
//!   detection. This is the numerical counterpart every closed form is
//!   checked against.
//! - [`cli`]: the `friedmann-lab` command line front end.
//!
//! ```
//! use friedmann_lab::{cubic, markers, params::{Curvature, ReducedParams}};
//!
//! let p = ReducedParams::new(2.0 / 3.0, 4.0 / 3.0, 1.0, Curvature::Closed).unwrap();
//! let regime = cubic::classify(&p).unwrap();
//! assert_eq!(regime.tag, cubic::RegimeTag::CaseIIii);
//!
//! let m = markers::marker_set(&p).unwrap();
//! assert!((m.r_min - 1.0).abs() < 1e-15);
//! assert!((m.h_min_sq - 1.0).abs() < 1e-14);
//! ```

pub mod cli;
pub mod cubic;
pub mod dynamics;
mod error;
pub mod markers;
pub mod params;
mod rk;

pub use error::{Error, Result};
