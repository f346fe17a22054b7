//! Physical inputs and the reduced coefficients of the Friedmann equation.
//!
//! The library is unit-agnostic: [`PhysicalParams`] is converted with
//! whatever mutually consistent units the caller supplies, and
//! [`ReducedParams`] is the currency every other module works in.

use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

/// Spatial curvature sign ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curvature {
    /// ε = −1
    Open,
    /// ε = 0
    Flat,
    /// ε = +1, the 3-sphere.
    Closed,
}

impl Curvature {
    pub fn sign(self) -> i8 {
        match self {
            Curvature::Open => -1,
            Curvature::Flat => 0,
            Curvature::Closed => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            -1 => Ok(Curvature::Open),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Closed),
            other => Err(Error::invalid(format!(
                "epsilon must be -1, 0 or +1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}

/// Physical constants and content of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub g: f64,
    pub c: f64,
    pub lambda: f64,
    pub mass: f64,
    pub epsilon: Curvature,
}

impl PhysicalParams {
    pub fn new(g: f64, c: f64, lambda: f64, mass: f64, epsilon: Curvature) -> Result<Self> {
        let phys = PhysicalParams {
            g,
            c,
            lambda,
            mass,
            epsilon,
        };
        phys.validate()?;
        Ok(phys)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("G", self.g)?;
        check_positive("c", self.c)?;
        check_positive("Lambda", self.lambda)?;
        check_positive("M", self.mass)
    }
}

/// Coefficients of `R'² = α/R + δ/R² + βR² − γ`.
///
/// ε is carried next to γ so that regime logic never has to infer the
/// curvature from the sign of a float near zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    epsilon: Curvature,
    delta: f64,
}

impl ReducedParams {
    /// Matter + Λ + curvature coefficients with δ = 0.
    pub fn new(alpha: f64, beta: f64, gamma: f64, epsilon: Curvature) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("beta", beta)?;
        if !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be finite, got {gamma}")));
        }
        let consistent = match epsilon {
            Curvature::Open => gamma < 0.0,
            Curvature::Flat => gamma == 0.0,
            Curvature::Closed => gamma > 0.0,
        };
        if !consistent {
            return Err(Error::invalid(format!(
                "sign of gamma ({gamma}) does not match epsilon = {epsilon}"
            )));
        }
        Ok(ReducedParams {
            alpha,
            beta,
            gamma,
            epsilon,
            delta: 0.0,
        })
    }

    /// Adds the radiation term δ/R² (δ ≥ 0).
    pub fn with_radiation(self, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::invalid(format!(
                "delta must be finite and >= 0, got {delta}"
            )));
        }
        Ok(ReducedParams { delta, ..self })
    }

    /// The same parameters with the radiation term dropped.
    pub fn matter_only(self) -> Self {
        ReducedParams { delta: 0.0, ..self }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> Curvature {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// α = (8πG/3)·A with A = M/2π², β = Λc²/3, γ = εc².
pub fn reduce(phys: &PhysicalParams) -> Result<ReducedParams> {
    phys.validate()?;
    let area_const = phys.mass / (2.0 * PI * PI);
    let alpha = 8.0 * PI * phys.g / 3.0 * area_const;
    let beta = phys.lambda * phys.c * phys.c / 3.0;
    let gamma = f64::from(phys.epsilon.sign()) * phys.c * phys.c;
    ReducedParams::new(alpha, beta, gamma, phys.epsilon)
}

/// Volume 2π²R³ of the 3-sphere of radius `r`.
pub fn sphere_volume(r: f64) -> Result<f64> {
    check_positive("R", r)?;
    Ok(2.0 * PI * PI * r * r * r)
}

/// Matter density M / (2π²R³).
pub fn density_at(r: f64, mass: f64) -> Result<f64> {
    check_positive("R", r)?;
    check_positive("M", mass)?;
    Ok(mass / sphere_volume(r)?)
}
