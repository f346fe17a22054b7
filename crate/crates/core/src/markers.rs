//! Closed-form markers of the expanding D > 0, ε = +1 solutions and the
//! physical relations between Λ, M and the Hubble minimum.
//!
//! Along a solution `H² = β + α/R³ + δ/R⁴ − γ/R²` and, since R' = RH,
//! `dH/dt = (R/2)·d(H²)/dR`. With δ = 0 this is `γ/R² − 3α/(2R³)`, which
//! vanishes at `R_min = 3α/2γ` and has its own extremum (the inflection of
//! H(t)) at `R_wH = 9α/4γ`. R'' = f'(R)/2 vanishes at `R_w = (α/2β)^{1/3}`.
//!
//! H(t_w)² = 3β − γ(α/2β)^{−2/3} exceeds β exactly when 2α²β > γ³.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use crate::cubic::{self, RegimeTag, RootStructure};
use crate::params::{self, Curvature, PhysicalParams, ReducedParams};
use crate::{Error, Result};

/// H² and its R-derivatives for one parameter set.
#[derive(Clone, Copy, Debug)]
pub struct HubbleLaw {
    params: ReducedParams,
}

impl HubbleLaw {
    pub fn new(params: ReducedParams) -> Self {
        HubbleLaw { params }
    }

    /// β + α/R³ + δ/R⁴ − γ/R². Negative inside a forbidden interval.
    pub fn hubble_sq(&self, r: f64) -> f64 {
        let p = &self.params;
        let inv = 1.0 / r;
        let inv2 = inv * inv;
        p.beta() + p.alpha() * inv2 * inv + p.delta() * inv2 * inv2 - p.gamma() * inv2
    }

    /// d(H²)/dR = −3α/R⁴ − 4δ/R⁵ + 2γ/R³.
    pub fn d_hubble_sq(&self, r: f64) -> f64 {
        let p = &self.params;
        let inv = 1.0 / r;
        let inv3 = inv * inv * inv;
        inv3 * (2.0 * p.gamma() - 3.0 * p.alpha() * inv - 4.0 * p.delta() * inv * inv)
    }

    /// d²(H²)/dR² = 12α/R⁵ + 20δ/R⁶ − 6γ/R⁴.
    pub fn d2_hubble_sq(&self, r: f64) -> f64 {
        let p = &self.params;
        let inv = 1.0 / r;
        let inv4 = inv * inv * inv * inv;
        inv4 * (12.0 * p.alpha() * inv + 20.0 * p.delta() * inv * inv - 6.0 * p.gamma())
    }

    /// dH/dt as a function of R along any solution: (R/2)·d(H²)/dR.
    pub fn hubble_rate(&self, r: f64) -> f64 {
        0.5 * r * self.d_hubble_sq(r)
    }
}

/// H² at scale factor `r`.
pub fn hubble_sq(r: f64, params: &ReducedParams) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("R must be finite and > 0, got {r}")));
    }
    Ok(HubbleLaw::new(*params).hubble_sq(r))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkerSet {
    /// Turning point of R(t): (α/2β)^{1/3}.
    pub r_w: f64,
    /// Location of the Hubble minimum: 3α/2γ.
    pub r_min: f64,
    /// Turning point of H(t): 9α/4γ.
    pub r_wh: f64,
    /// β − 4γ³/27α².
    pub h_min_sq: f64,
    /// 3β − γ(α/2β)^{−2/3}.
    pub h_w_sq: f64,
    /// √β.
    pub h_inf: f64,
    /// √β·y0, a lower bound for R' on expanding solutions.
    pub speed_bound: f64,
}

fn require_case_iiii(params: &ReducedParams) -> Result<cubic::Regime> {
    let regime = cubic::classify(params)?;
    if regime.tag != RegimeTag::CaseIIii {
        return Err(Error::WrongRegime {
            expected: "case-IIii (epsilon = +1, D > 0)",
            found: regime.tag,
        });
    }
    Ok(regime)
}

pub fn marker_set(params: &ReducedParams) -> Result<MarkerSet> {
    let regime = require_case_iiii(params)?;
    let RootStructure::OneRealPlusPair { y0, .. } = regime.roots else {
        unreachable!("case-IIii always has a complex pair")
    };
    let (alpha, beta, gamma) = (params.alpha(), params.beta(), params.gamma());
    let r_w = (alpha / (2.0 * beta)).cbrt();
    Ok(MarkerSet {
        r_w,
        r_min: 3.0 * alpha / (2.0 * gamma),
        r_wh: 9.0 * alpha / (4.0 * gamma),
        h_min_sq: beta - 4.0 * gamma * gamma * gamma / (27.0 * alpha * alpha),
        h_w_sq: 3.0 * beta - gamma / (r_w * r_w),
        h_inf: beta.sqrt(),
        speed_bound: beta.sqrt() * y0,
    })
}

/// Position of H(t_w) relative to the asymptote √β.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoteOrdering {
    Below,
    Equal,
    Above,
}

impl fmt::Display for AsymptoteOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AsymptoteOrdering::Below => "below",
            AsymptoteOrdering::Equal => "equal",
            AsymptoteOrdering::Above => "above",
        })
    }
}

/// Compares H(t_w)² with β directly. Values within 1e-12 relative count as
/// equal.
pub fn h_at_r_turning_vs_asymptote(params: &ReducedParams) -> Result<AsymptoteOrdering> {
    let m = marker_set(params)?;
    let beta = params.beta();
    let diff = m.h_w_sq - beta;
    if diff.abs() <= 1e-12 * 3.0 * beta {
        return Ok(AsymptoteOrdering::Equal);
    }
    Ok(match diff.partial_cmp(&0.0) {
        Some(Ordering::Greater) => AsymptoteOrdering::Above,
        _ => AsymptoteOrdering::Below,
    })
}

fn closed_only(phys: &PhysicalParams) -> Result<()> {
    phys.validate()?;
    if phys.epsilon != Curvature::Closed {
        return Err(Error::invalid(format!(
            "the Λ bound exists only for epsilon = +1, got {}",
            phys.epsilon
        )));
    }
    Ok(())
}

fn lambda_bound(g: f64, c: f64, mass: f64) -> f64 {
    let gm = g * mass;
    PI * PI * c.powi(4) / (4.0 * gm * gm)
}

/// π²c⁴ / 4(GM)²: D > 0 holds iff Λ exceeds this.
pub fn lambda_lower_bound(phys: &PhysicalParams) -> Result<f64> {
    closed_only(phys)?;
    Ok(lambda_bound(phys.g, phys.c, phys.mass))
}

/// 2GM/πc², the physical form of 3α/2γ.
pub fn r_min_physical(phys: &PhysicalParams) -> Result<f64> {
    closed_only(phys)?;
    require_case_iiii(&params::reduce(phys)?)?;
    Ok(2.0 * phys.g * phys.mass / (PI * phys.c * phys.c))
}

/// Minimal Hubble value of a closed model, √((c²/3)(Λ − π²c⁴/4(GM)²)).
pub fn h_min_physical(phys: &PhysicalParams) -> Result<f64> {
    closed_only(phys)?;
    require_case_iiii(&params::reduce(phys)?)?;
    let bound = lambda_bound(phys.g, phys.c, phys.mass);
    Ok((phys.c * phys.c / 3.0 * (phys.lambda - bound)).sqrt())
}

/// Inverts the Hubble minimum: Λ = 3H_min²/c² + π²c⁴/4(GM)².
pub fn lambda_from_hmin(h_min: f64, g: f64, c: f64, mass: f64) -> Result<f64> {
    if !(h_min.is_finite() && h_min >= 0.0) {
        return Err(Error::invalid(format!(
            "H_min must be finite and >= 0, got {h_min}"
        )));
    }
    for (name, v) in [("G", g), ("c", c), ("M", mass)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!(
                "{name} must be finite and > 0, got {v}"
            )));
        }
    }
    Ok(3.0 * h_min * h_min / (c * c) + lambda_bound(g, c, mass))
}

/// Stationary point of H² with the radiation term: the positive root of
/// 2γR² − 3αR − 4δ = 0. Equals 3α/2γ at δ = 0.
pub fn radiation_corrected_rmin(params: &ReducedParams) -> Result<f64> {
    if params.epsilon() != Curvature::Closed {
        return Err(Error::WrongRegime {
            expected: "epsilon = +1",
            found: RegimeTag::CaseI,
        });
    }
    let (alpha, gamma, delta) = (params.alpha(), params.gamma(), params.delta());
    Ok((3.0 * alpha + (9.0 * alpha * alpha + 32.0 * gamma * delta).sqrt()) / (4.0 * gamma))
}
