//! The depressed cubic `R³ + pR + q = 0`, p = −γ/β, q = α/β.
//!
//! Multiplying `α/R + βR² − γ` by R/β gives this cubic, so its positive
//! roots are exactly the zeros of R'² and its sign on (0, ∞) decides where
//! solutions may live. The discriminant is
//! `D = (α/2β)² − (γ/3β)³ = (q/2)² + (p/3)³`.

use std::f64::consts::PI;
use std::fmt;

use crate::params::{Curvature, ReducedParams};
use crate::{Error, Result};

/// Relative width of the band around D = 0 that is reported as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-12;

/// Open range of the auxiliary angle φ in the three-real-root case.
pub const PHI_RANGE: (f64, f64) = (PI / 2.0, PI);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// ε ∈ {0, −1}: no restriction on R > 0.
    CaseI,
    /// ε = +1, D < 0: three real roots and a forbidden interval (r1, r2).
    CaseIIi,
    /// ε = +1, D > 0: one negative root and a complex pair; the only regime
    /// in which H passes through a minimum.
    CaseIIii,
    /// ε = +1, D = 0 within tolerance: the branching case, detected only.
    Degenerate,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::CaseI => "case-I",
            RegimeTag::CaseIIi => "case-IIi",
            RegimeTag::CaseIIii => "case-IIii",
            RegimeTag::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootStructure {
    /// Roots −r0, x0 ± i·y0 with r0 > 0, y0 > 0.
    OneRealPlusPair {
        r0: f64,
        x0: f64,
        y0: f64,
    },
    /// Roots r0neg < 0 < r1 < r2, with the auxiliary angle φ ∈ (π/2, π).
    ThreeReal {
        r0neg: f64,
        r1: f64,
        r2: f64,
        phi: f64,
    },
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicAnalysis {
    pub p: f64,
    pub q: f64,
    pub d: f64,
    pub roots: RootStructure,
}

/// p, q and D without any root resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Discriminant {
    pub p: f64,
    pub q: f64,
    pub d: f64,
    /// |D| at or below this is degenerate.
    pub tolerance: f64,
}

impl Discriminant {
    pub fn is_degenerate(&self) -> bool {
        self.d.abs() <= self.tolerance
    }
}

/// An interval of R with optionally closed ends. `upper` may be +∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn open(lower: f64, upper: f64) -> Self {
        Interval {
            lower,
            upper,
            lower_closed: false,
            upper_closed: false,
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        let above = if self.lower_closed {
            r >= self.lower
        } else {
            r > self.lower
        };
        let below = if self.upper_closed {
            r <= self.upper
        } else {
            r < self.upper
        };
        above && below
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub p: f64,
    pub q: f64,
    pub d: f64,
    pub roots: RootStructure,
    /// Where `α/R + βR² − γ ≥ 0`.
    pub admissible_regions: Vec<Interval>,
    /// (r1, r2) in Case II(i).
    pub forbidden_interval: Option<(f64, f64)>,
}

impl Regime {
    pub fn is_admissible(&self, r: f64) -> bool {
        self.admissible_regions.iter().any(|i| i.contains(r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigRoots {
    pub r1: f64,
    pub r2: f64,
    pub phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPair {
    pub r0: f64,
    pub x0: f64,
    pub y0: f64,
}

fn require_matter_only(params: &ReducedParams) -> Result<()> {
    if params.delta() != 0.0 {
        return Err(Error::RadiationNotSupported {
            delta: params.delta(),
        });
    }
    Ok(())
}

pub fn discriminant(params: &ReducedParams) -> Discriminant {
    let (alpha, beta, gamma) = (params.alpha(), params.beta(), params.gamma());
    let p = -gamma / beta;
    let q = alpha / beta;
    let half_q = alpha / (2.0 * beta);
    let third_g = gamma / (3.0 * beta);
    let square = half_q * half_q;
    let cube = third_g * third_g * third_g;
    Discriminant {
        p,
        q,
        d: square - cube,
        tolerance: DEGENERACY_RTOL * square.max(cube.abs()),
    }
}

fn tag_of(params: &ReducedParams, disc: &Discriminant) -> RegimeTag {
    match params.epsilon() {
        Curvature::Open | Curvature::Flat => RegimeTag::CaseI,
        Curvature::Closed if disc.is_degenerate() => RegimeTag::Degenerate,
        Curvature::Closed if disc.d < 0.0 => RegimeTag::CaseIIi,
        Curvature::Closed => RegimeTag::CaseIIii,
    }
}

/// Roots of the three-real-root case in trigonometric form.
pub fn trig_roots(params: &ReducedParams) -> Result<TrigRoots> {
    let disc = discriminant(params);
    let tag = tag_of(params, &disc);
    if tag != RegimeTag::CaseIIi {
        return Err(Error::WrongRegime {
            expected: "case-IIi (epsilon = +1, D < 0)",
            found: tag,
        });
    }
    let (alpha, beta, gamma) = (params.alpha(), params.beta(), params.gamma());
    let s = (gamma / (3.0 * beta)).sqrt();
    let cos_phi = -(alpha / (2.0 * beta)) / (s * s * s);
    debug_assert!((-1.0 - 1e-14..=0.0).contains(&cos_phi));
    let phi = cos_phi.clamp(-1.0, 1.0).acos();
    let (sin3, cos3) = (phi / 3.0).sin_cos();
    Ok(TrigRoots {
        r1: s * (3f64.sqrt() * sin3 - cos3),
        r2: 2.0 * s * cos3,
        phi,
    })
}

/// Safeguarded Newton iteration on a sign-changing bracket.
fn newton_bisect(f: impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64) -> f64 {
    let (f_lo, _) = f(lo);
    // Orient so that f(lo) < 0 < f(hi).
    let flip = f_lo > 0.0;
    let eval = |x: f64| {
        let (v, dv) = f(x);
        if flip {
            (-v, -dv)
        } else {
            (v, dv)
        }
    };
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (v, dv) = eval(x);
        if v == 0.0 {
            return x;
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / dv;
        let next = if dv != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs())
        {
            return next;
        }
        x = next;
    }
    x
}

/// Negative real root −r0 and complex pair x0 ± i·y0 for D > 0.
pub fn complex_pair(params: &ReducedParams) -> Result<ComplexPair> {
    let disc = discriminant(params);
    let tag = tag_of(params, &disc);
    if !matches!(tag, RegimeTag::CaseI | RegimeTag::CaseIIii) {
        return Err(Error::WrongRegime {
            expected: "D > 0",
            found: tag,
        });
    }
    Ok(complex_pair_unchecked(disc.p, disc.q))
}

fn complex_pair_unchecked(p: f64, q: f64) -> ComplexPair {
    // All roots of a monic cubic lie within 1 + max |coefficient|; f(0) = q > 0.
    let lower = -1.0 - p.abs().max(q.abs());
    let root = newton_bisect(|r| (r * r * r + p * r + q, 3.0 * r * r + p), lower, 0.0);
    let r0 = -root;
    let x0 = r0 / 2.0;
    let y0 = (q / r0 - x0 * x0).sqrt();
    ComplexPair { r0, x0, y0 }
}

/// Full analysis of the cubic. Fails on δ ≠ 0 and on a degenerate D; the
/// latter error still carries D.
pub fn analyze(params: &ReducedParams) -> Result<CubicAnalysis> {
    require_matter_only(params)?;
    let disc = discriminant(params);
    let roots = match tag_of(params, &disc) {
        RegimeTag::Degenerate => {
            return Err(Error::DegenerateDiscriminant {
                d: disc.d,
                tolerance: disc.tolerance,
            })
        }
        RegimeTag::CaseIIi => {
            let t = trig_roots(params)?;
            RootStructure::ThreeReal {
                r0neg: -(t.r1 + t.r2),
                r1: t.r1,
                r2: t.r2,
                phi: t.phi,
            }
        }
        RegimeTag::CaseI | RegimeTag::CaseIIii => {
            let c = complex_pair_unchecked(disc.p, disc.q);
            RootStructure::OneRealPlusPair {
                r0: c.r0,
                x0: c.x0,
                y0: c.y0,
            }
        }
    };
    Ok(CubicAnalysis {
        p: disc.p,
        q: disc.q,
        d: disc.d,
        roots,
    })
}

/// Regime classification. A degenerate discriminant is a valid outcome
/// here, not an error.
pub fn classify(params: &ReducedParams) -> Result<Regime> {
    require_matter_only(params)?;
    let disc = discriminant(params);
    let tag = tag_of(params, &disc);
    if tag == RegimeTag::CaseI {
        // γ ≤ 0 makes both terms of D non-negative.
        debug_assert!(disc.d > 0.0);
    }
    let whole_line = vec![Interval::open(0.0, f64::INFINITY)];
    let regime = match tag {
        RegimeTag::Degenerate => Regime {
            tag,
            p: disc.p,
            q: disc.q,
            d: disc.d,
            roots: RootStructure::Degenerate,
            // A double positive root: R'² touches zero but never goes negative.
            admissible_regions: whole_line,
            forbidden_interval: None,
        },
        _ => {
            let analysis = analyze(params)?;
            let (admissible_regions, forbidden_interval) = match analysis.roots {
                RootStructure::ThreeReal { r1, r2, .. } => (
                    vec![
                        Interval {
                            lower: 0.0,
                            upper: r1,
                            lower_closed: false,
                            upper_closed: true,
                        },
                        Interval {
                            lower: r2,
                            upper: f64::INFINITY,
                            lower_closed: true,
                            upper_closed: false,
                        },
                    ],
                    Some((r1, r2)),
                ),
                _ => (whole_line, None),
            };
            Regime {
                tag,
                p: analysis.p,
                q: analysis.q,
                d: analysis.d,
                roots: analysis.roots,
                admissible_regions,
                forbidden_interval,
            }
        }
    };
    Ok(regime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn closed(a: f64, b: f64, g: f64) -> ReducedParams {
        ReducedParams::new(a, b, g, Curvature::Closed).unwrap()
    }

    fn cubic_at(a: &CubicAnalysis, r: f64) -> f64 {
        r * r * r + a.p * r + a.q
    }

    #[test]
    fn analyze_one_real_root() {
        let a = analyze(&closed(2.0, 1.0, 1.0)).unwrap();
        assert_eq!(a.p, -1.0);
        assert_eq!(a.q, 2.0);
        assert_relative_eq!(a.d, 26.0 / 27.0, max_relative = 1e-15);
        assert!(matches!(a.roots, RootStructure::OneRealPlusPair { .. }));
    }

    #[test]
    fn analyze_three_real_roots() {
        let a = analyze(&closed(1.0, 1.0, 3.0)).unwrap();
        assert_eq!((a.p, a.q), (-3.0, 1.0));
        assert_relative_eq!(a.d, -0.75, max_relative = 1e-15);
        let RootStructure::ThreeReal { r0neg, r1, r2, phi } = a.roots else {
            panic!("expected three real roots, got {:?}", a.roots)
        };
        // mpmath polyroots on R³ − 3R + 1
        assert_relative_eq!(r2, 1.532_088_886_237_956, max_relative = 1e-14);
        assert_relative_eq!(r1, 0.347_296_355_333_860_7, max_relative = 1e-14);
        assert_relative_eq!(r0neg, -1.879_385_241_571_816_8, max_relative = 1e-14);
        assert_relative_eq!(phi, 2.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(r0neg * r1 * r2, -a.q, max_relative = 1e-12);
    }

    #[test]
    fn exact_cancellation_is_degenerate() {
        let err = analyze(&closed(2.0, 1.0, 3.0)).unwrap_err();
        match err {
            Error::DegenerateDiscriminant { d, .. } => assert_eq!(d, 0.0),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            classify(&closed(2.0, 1.0, 3.0)).unwrap().tag,
            RegimeTag::Degenerate
        );
    }

    #[test]
    fn radiation_is_rejected() {
        let p = closed(2.0, 1.0, 1.0).with_radiation(0.1).unwrap();
        assert!(matches!(
            analyze(&p),
            Err(Error::RadiationNotSupported { .. })
        ));
        assert!(matches!(
            classify(&p),
            Err(Error::RadiationNotSupported { .. })
        ));
    }

    #[test]
    fn trig_roots_reference() {
        let t = trig_roots(&closed(1.0, 1.0, 3.0)).unwrap();
        assert_relative_eq!(t.phi, 2.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(t.r2, 2.0 * (2.0 * PI / 9.0).cos(), max_relative = 1e-15);
        assert_relative_eq!(
            t.r1,
            3f64.sqrt() * (2.0 * PI / 9.0).sin() - (2.0 * PI / 9.0).cos(),
            max_relative = 1e-14
        );
        for r in [t.r1, t.r2] {
            assert!((r * r * r - 3.0 * r + 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn trig_roots_wrong_regime() {
        assert!(matches!(
            trig_roots(&closed(2.0, 1.0, 1.0)),
            Err(Error::WrongRegime {
                found: RegimeTag::CaseIIii,
                ..
            })
        ));
        assert!(matches!(
            trig_roots(&closed(2.0, 1.0, 3.0)),
            Err(Error::WrongRegime {
                found: RegimeTag::Degenerate,
                ..
            })
        ));
    }

    #[test]
    fn complex_pair_values() {
        // mpmath polyroots on R³ − R + 2
        let c = complex_pair(&closed(2.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(c.r0, 1.521_379_706_804_567_6, max_relative = 1e-14);
        assert_relative_eq!(c.x0, 0.760_689_853_402_283_8, max_relative = 1e-14);
        assert_relative_eq!(c.y0, 0.857_873_626_595_178_6, max_relative = 1e-14);
        assert_eq!(-c.r0 + 2.0 * c.x0, 0.0);

        // R³ − (3/4)R + 1/2
        let c = complex_pair(&closed(2.0 / 3.0, 4.0 / 3.0, 1.0)).unwrap();
        assert_relative_eq!(c.r0, 1.097_911_672_722_823_6, max_relative = 1e-14);
        assert_relative_eq!(c.y0, 0.392_501_631_621_795_1, max_relative = 1e-13);

        assert!(matches!(
            complex_pair(&closed(1.0, 1.0, 3.0)),
            Err(Error::WrongRegime {
                found: RegimeTag::CaseIIi,
                ..
            })
        ));
    }

    #[test]
    fn factorization_identity() {
        let p = closed(2.0, 1.0, 1.0);
        let a = analyze(&p).unwrap();
        let c = complex_pair(&p).unwrap();
        for i in 0..10 {
            let r = -3.0 + 0.7 * i as f64;
            let lhs = cubic_at(&a, r);
            let rhs = (r + c.r0) * ((r - c.x0).powi(2) + c.y0 * c.y0);
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "r={r}");
        }
    }

    #[test]
    fn classify_examples() {
        let flat = ReducedParams::new(2.0, 1.0, 0.0, Curvature::Flat).unwrap();
        let r = classify(&flat).unwrap();
        assert_eq!(r.tag, RegimeTag::CaseI);
        assert_eq!(
            r.admissible_regions,
            vec![Interval::open(0.0, f64::INFINITY)]
        );
        assert!(r.forbidden_interval.is_none());

        let r = classify(&closed(1.0, 1.0, 3.0)).unwrap();
        assert_eq!(r.tag, RegimeTag::CaseIIi);
        let (lo, hi) = r.forbidden_interval.unwrap();
        assert_relative_eq!(lo, 0.347_296_355_333_860_7, max_relative = 1e-14);
        assert_relative_eq!(hi, 1.532_088_886_237_956, max_relative = 1e-14);
        assert!(r.is_admissible(lo) && r.is_admissible(hi));
        assert!(!r.is_admissible(1.0));

        // 27α²β = 16 > 4 = 4γ³
        let r = classify(&closed(2.0 / 3.0, 4.0 / 3.0, 1.0)).unwrap();
        assert_eq!(r.tag, RegimeTag::CaseIIii);
    }

    #[test]
    fn open_curvature_is_case_one() {
        let p = ReducedParams::new(0.3, 2.0, -5.0, Curvature::Open).unwrap();
        let r = classify(&p).unwrap();
        assert_eq!(r.tag, RegimeTag::CaseI);
        assert!(r.d > 0.0);
    }

    #[test]
    fn constructed_boundary_is_degenerate() {
        for (beta, gamma) in [(1.0f64, 3.0f64), (0.37, 1.9), (12.5, 0.004), (1e-3, 7.0)] {
            let alpha = (4.0 * gamma * gamma * gamma / (27.0 * beta)).sqrt();
            assert_eq!(
                classify(&closed(alpha, beta, gamma)).unwrap().tag,
                RegimeTag::Degenerate
            );
        }
    }

    fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        (lo.ln()..hi.ln()).prop_map(f64::exp)
    }

    proptest! {
        #[test]
        fn forbidden_interval_ordering(
            alpha in log_uniform(1e-2, 1e2),
            beta in log_uniform(1e-2, 1e2),
            k in 1.001f64..20.0,
        ) {
            let gamma = (27.0 * alpha * alpha * beta / 4.0).cbrt() * k;
            let p = closed(alpha, beta, gamma);
            let t = trig_roots(&p).unwrap();
            let r_min = 1.5 * alpha / gamma;
            let r_w = (alpha / (2.0 * beta)).cbrt();
            prop_assert!(t.r1 < r_min && r_min < r_w && r_w < t.r2);
            prop_assert!(t.phi > PHI_RANGE.0 && t.phi < PHI_RANGE.1);
            let c3 = (t.phi / 3.0).cos();
            prop_assert!(c3 > 0.5 && c3 < 3f64.sqrt() / 2.0);
            let a = analyze(&p).unwrap();
            if let RootStructure::ThreeReal { r0neg, r1, r2, .. } = a.roots {
                prop_assert!(((r0neg * r1 * r2 + a.q) / a.q).abs() <= 1e-12);
                prop_assert!(r0neg < 0.0 && 0.0 < r1 && r1 < r2);
            } else {
                prop_assert!(false);
            }
            // Right side of the Friedmann equation is negative inside (r1, r2).
            for i in 1..100 {
                let r = t.r1 + (t.r2 - t.r1) * i as f64 / 100.0;
                prop_assert!(alpha / r + beta * r * r - gamma < 0.0);
            }
        }

        #[test]
        fn one_real_root_vieta(
            alpha in log_uniform(1e-2, 1e2),
            beta in log_uniform(1e-2, 1e2),
            k in 0.0f64..0.999,
        ) {
            let gamma = (27.0 * alpha * alpha * beta / 4.0).cbrt() * k;
            prop_assume!(gamma > 0.0);
            let p = closed(alpha, beta, gamma);
            let c = complex_pair(&p).unwrap();
            let q = alpha / beta;
            prop_assert!(c.r0 > 0.0 && c.y0 > 0.0);
            prop_assert!(((c.r0 * (c.x0 * c.x0 + c.y0 * c.y0) - q) / q).abs() <= 1e-12);
            // (α/2β)^{1/3} < 3α/2γ
            prop_assert!((alpha / (2.0 * beta)).cbrt() < 1.5 * alpha / gamma);
        }

        #[test]
        fn tolerance_is_scale_free(
            alpha in log_uniform(1e-2, 1e2),
            beta in log_uniform(1e-2, 1e2),
            k in 0.01f64..10.0,
            lambda in log_uniform(1e-3, 1e3),
        ) {
            let gamma = (27.0 * alpha * alpha * beta / 4.0).cbrt() * k;
            let a = classify(&closed(alpha, beta, gamma)).unwrap().tag;
            let b = classify(&closed(lambda.powi(3) * alpha, beta, lambda * lambda * gamma)).unwrap().tag;
            prop_assert_eq!(a, b);
        }
    }
}
