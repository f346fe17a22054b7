//! Numerical integration of `R'² = α/R + δ/R² + βR² − γ`.
//!
//! Away from zeros of the right side f(R) the first-order form
//! `R' = ±√f(R)` is integrated, so every sample satisfies the constraint by
//! construction. Near a zero the square root is not Lipschitz, and the
//! solver switches to the second-order form `R'' = f'(R)/2` with state
//! (R, R'), which passes through R' = 0 (recollapse or bounce) smoothly.
//! The switch happens when `f(R) ≤ GUARD_BAND · scale(R)`, where `scale` is
//! the sum of the magnitudes of the terms of f; it switches back once f
//! exceeds twice that.
//!
//! Events are located on the continuous extension of the accepted steps:
//!
//! | event            | located as sign change of                    |
//! |------------------|----------------------------------------------|
//! | `RTurningPoint`  | R'' = f'(R)/2                                |
//! | `HubbleMinimum`  | dH/dt = (R·R'' − R'²)/R², from − to +        |
//! | `HTurningPoint`  | d²H/dt², 5-point central differences of H(t) |
//! | `Recollapse`     | R'                                           |
//!
//! t = 0 is anchored at `r_start`; only R at an event is convention-free.

use std::fmt;

use log::debug;

use crate::cubic::{self, RegimeTag};
use crate::params::ReducedParams;
use crate::rk::{self, DenseStep, Tolerance};
use crate::{Error, Result};

/// Relative width of the band around zeros of f handled by the
/// second-order form.
pub const GUARD_BAND: f64 = 1e-3;

/// Relative overshoot below zero still accepted as a start on the boundary
/// of an admissible region.
const START_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Expanding,
    Contracting,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Expanding => 1.0,
            Direction::Contracting => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationConfig {
    pub r_start: f64,
    pub t_span: f64,
    pub direction: Direction,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Defaults to `t_span / 100`.
    pub max_step: Option<f64>,
    /// Defaults to `1e-12 · t_span`.
    pub event_refinement_tol: Option<f64>,
    /// Contraction below this stops with [`Error::SingularityFloor`].
    /// Defaults to `1e-8 · 3α/2γ` for γ > 0 and `1e-8` otherwise.
    pub r_floor: Option<f64>,
    /// Optional early stop once R reaches this value.
    pub r_max: Option<f64>,
}

impl IntegrationConfig {
    pub fn new(r_start: f64, t_span: f64) -> Self {
        IntegrationConfig {
            r_start,
            t_span,
            direction: Direction::Expanding,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: None,
            event_refinement_tol: None,
            r_floor: None,
            r_max: None,
        }
    }

    pub fn direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn max_step(mut self, max_step: f64) -> Self {
        self.max_step = Some(max_step);
        self
    }

    pub fn r_max(mut self, r_max: f64) -> Self {
        self.r_max = Some(r_max);
        self
    }

    pub fn r_floor(mut self, r_floor: f64) -> Self {
        self.r_floor = Some(r_floor);
        self
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("r_start", Some(self.r_start)),
            ("t_span", Some(self.t_span)),
            ("rel_tol", Some(self.rel_tol)),
            ("abs_tol", Some(self.abs_tol)),
            ("max_step", self.max_step),
            ("event_refinement_tol", self.event_refinement_tol),
            ("r_floor", self.r_floor),
            ("r_max", self.r_max),
        ];
        for (name, value) in positive {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid(format!(
                        "{name} must be finite and > 0, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub r: f64,
    pub rdot: f64,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    HubbleMinimum,
    RTurningPoint,
    HTurningPoint,
    /// R' = 0 reversal.
    Recollapse,
    SingularityApproach,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::HubbleMinimum => "hubble-minimum",
            EventKind::RTurningPoint => "r-turning-point",
            EventKind::HTurningPoint => "h-turning-point",
            EventKind::Recollapse => "recollapse",
            EventKind::SingularityApproach => "singularity-approach",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub t: f64,
    pub r: f64,
    pub rdot: f64,
    pub h: f64,
}

#[derive(Clone, Copy, Debug)]
enum Segment {
    Root { sign: f64, step: DenseStep<1> },
    Second { step: DenseStep<2> },
}

impl Segment {
    fn bounds(&self) -> (f64, f64) {
        let (t0, h) = match self {
            Segment::Root { step, .. } => (step.t0, step.h),
            Segment::Second { step } => (step.t0, step.h),
        };
        (t0, t0 + h)
    }

    fn state(&self, model: &Model, t: f64) -> (f64, f64) {
        match self {
            Segment::Root { sign, step } => {
                let r = step.eval(t)[0];
                (r, sign * model.f(r).max(0.0).sqrt())
            }
            Segment::Second { step } => {
                let [r, v] = step.eval(t);
                (r, v)
            }
        }
    }
}

/// Integrated samples, detected events and the continuous extension
/// they were computed from.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    params: ReducedParams,
    segments: Vec<Segment>,
}

impl Trajectory {
    pub fn params(&self) -> &ReducedParams {
        &self.params
    }

    pub fn t_start(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.t)
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Interpolated state at `t`, or `None` outside the integrated span.
    pub fn state_at(&self, t: f64) -> Option<Sample> {
        let model = Model(self.params);
        let idx = self.segment_index(t)?;
        let (r, rdot) = self.segments[idx].state(&model, t);
        Some(Sample {
            t,
            r,
            rdot,
            h: rdot / r,
        })
    }

    fn segment_index(&self, t: f64) -> Option<usize> {
        let first = self.segments.first()?.bounds().0;
        let last = self.segments.last()?.bounds().1;
        if !(t >= first && t <= last) {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.bounds().0 <= t);
        Some(idx.saturating_sub(1))
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    /// max |R'² − f(R)| / max(β, f(R)) over the samples.
    pub fn max_energy_residual(&self) -> f64 {
        let model = Model(self.params);
        self.samples
            .iter()
            .map(|s| {
                let f = model.f(s.r);
                (s.rdot * s.rdot - f).abs() / self.params.beta().max(f)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug)]
struct Model(ReducedParams);

impl Model {
    fn f(&self, r: f64) -> f64 {
        let p = &self.0;
        p.alpha() / r + p.delta() / (r * r) + p.beta() * r * r - p.gamma()
    }

    fn f_prime(&self, r: f64) -> f64 {
        let p = &self.0;
        -p.alpha() / (r * r) - 2.0 * p.delta() / (r * r * r) + 2.0 * p.beta() * r
    }

    fn scale(&self, r: f64) -> f64 {
        let p = &self.0;
        p.alpha() / r + p.delta() / (r * r) + p.beta() * r * r + p.gamma().abs()
    }

    fn in_guard_band(&self, r: f64, factor: f64) -> bool {
        self.f(r) <= factor * GUARD_BAND * self.scale(r)
    }
}

/// Right side of the Friedmann equation, α/R + δ/R² + βR² − γ.
pub fn rhs_squared(r: f64, params: &ReducedParams) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("R must be finite and > 0, got {r}")));
    }
    Ok(Model(*params).f(r))
}

/// Zeros of f around a start with f < 0. f → +∞ at both ends of (0, ∞).
fn forbidden_bracket(model: &Model, r: f64) -> (f64, f64) {
    let bisect = |mut neg: f64, mut pos: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (neg + pos);
            if mid == neg || mid == pos {
                break;
            }
            if model.f(mid) < 0.0 {
                neg = mid;
            } else {
                pos = mid;
            }
        }
        0.5 * (neg + pos)
    };
    let mut lo = r;
    while model.f(lo) < 0.0 {
        lo *= 0.5;
    }
    let mut hi = r;
    while model.f(hi) < 0.0 {
        hi *= 2.0;
    }
    (bisect(r, lo), bisect(r, hi))
}

enum Mode {
    Root { sign: f64, k: [f64; 1] },
    Second { k: [f64; 2] },
}

struct Integrator {
    model: Model,
    tol: Tolerance,
    t: f64,
    r: f64,
    v: f64,
    mode: Mode,
}

enum Step {
    Accepted { err: f64, segment: Segment },
    Rejected { err: f64 },
}

impl Integrator {
    fn root_rhs(model: Model, sign: f64) -> impl Fn(f64, &[f64; 1]) -> Option<[f64; 1]> {
        move |_, y| {
            let r = y[0];
            if r.is_nan() || r <= 0.0 {
                return None;
            }
            let f = model.f(r);
            (f >= 0.0).then(|| [sign * f.sqrt()])
        }
    }

    fn second_rhs(model: Model) -> impl Fn(f64, &[f64; 2]) -> Option<[f64; 2]> {
        move |_, y| (y[0] > 0.0).then(|| [y[1], 0.5 * model.f_prime(y[0])])
    }

    fn enter_root(&mut self, sign: f64) {
        let k = Self::root_rhs(self.model, sign)(self.t, &[self.r]).unwrap_or([0.0]);
        self.v = k[0];
        self.mode = Mode::Root { sign, k };
    }

    fn enter_second(&mut self) {
        let k = Self::second_rhs(self.model)(self.t, &[self.r, self.v]).unwrap_or([0.0; 2]);
        self.mode = Mode::Second { k };
    }

    fn step(&mut self, h: f64) -> Step {
        match self.mode {
            Mode::Root { sign, k } => {
                let f = Self::root_rhs(self.model, sign);
                match rk::attempt(&f, self.t, &[self.r], &k, h, self.tol) {
                    Some(a) if a.err <= 1.0 => {
                        self.t += h;
                        self.r = a.y[0];
                        self.v = a.dy[0];
                        self.mode = Mode::Root { sign, k: a.dy };
                        Step::Accepted {
                            err: a.err,
                            segment: Segment::Root {
                                sign,
                                step: a.dense,
                            },
                        }
                    }
                    Some(a) => Step::Rejected { err: a.err },
                    None => Step::Rejected { err: f64::INFINITY },
                }
            }
            Mode::Second { k } => {
                let f = Self::second_rhs(self.model);
                match rk::attempt(&f, self.t, &[self.r, self.v], &k, h, self.tol) {
                    Some(a) if a.err <= 1.0 => {
                        self.t += h;
                        self.r = a.y[0];
                        self.v = a.y[1];
                        self.mode = Mode::Second { k: a.dy };
                        Step::Accepted {
                            err: a.err,
                            segment: Segment::Second { step: a.dense },
                        }
                    }
                    Some(a) => Step::Rejected { err: a.err },
                    None => Step::Rejected { err: f64::INFINITY },
                }
            }
        }
    }

    /// Switches between the first- and second-order forms after an
    /// accepted step.
    fn update_mode(&mut self) {
        match self.mode {
            Mode::Root { .. } if self.model.in_guard_band(self.r, 1.0) => {
                debug!(
                    "t = {:.6e}: entering second-order form at R = {:.6e}",
                    self.t, self.r
                );
                self.enter_second();
            }
            Mode::Second { .. } if !self.model.in_guard_band(self.r, 2.0) && self.v != 0.0 => {
                debug!(
                    "t = {:.6e}: back to first-order form at R = {:.6e}",
                    self.t, self.r
                );
                self.enter_root(self.v.signum());
            }
            _ => {}
        }
    }

    fn sample(&self) -> Sample {
        Sample {
            t: self.t,
            r: self.r,
            rdot: self.v,
            h: self.v / self.r,
        }
    }
}

fn default_floor(params: &ReducedParams) -> f64 {
    if params.gamma() > 0.0 {
        1e-8 * 1.5 * params.alpha() / params.gamma()
    } else {
        1e-8
    }
}

/// Integrates from `config.r_start` for `config.t_span` (or until `r_max`).
pub fn integrate(params: &ReducedParams, config: &IntegrationConfig) -> Result<Trajectory> {
    config.validate()?;
    if params.delta() == 0.0 {
        let regime = cubic::classify(params)?;
        if regime.tag == RegimeTag::Degenerate {
            let disc = cubic::discriminant(params);
            return Err(Error::DegenerateDiscriminant {
                d: disc.d,
                tolerance: disc.tolerance,
            });
        }
    }
    let model = Model(*params);
    let r0 = config.r_start;
    let f0 = model.f(r0);
    if f0 < -START_SLACK * model.scale(r0) {
        let (lower, upper) = forbidden_bracket(&model, r0);
        return Err(Error::ForbiddenStart {
            r_start: r0,
            lower,
            upper,
        });
    }

    let sign = config.direction.sign();
    let t_span = config.t_span;
    let max_step = config.max_step.unwrap_or(t_span / 100.0);
    let floor = config.r_floor.unwrap_or_else(|| default_floor(params));
    let refine_tol = config.event_refinement_tol.unwrap_or(1e-12 * t_span);

    let mut it = Integrator {
        model,
        tol: Tolerance {
            rel: config.rel_tol,
            abs: config.abs_tol,
        },
        t: 0.0,
        r: r0,
        v: sign * f0.max(0.0).sqrt(),
        mode: Mode::Second { k: [0.0; 2] },
    };
    if model.in_guard_band(r0, 1.0) {
        it.enter_second();
    } else {
        it.enter_root(sign);
    }

    let mut samples = vec![it.sample()];
    let mut segments: Vec<Segment> = Vec::new();
    let mut h = max_step
        .min(1e-4 * t_span)
        .min(1e-3 * r0 / model.scale(r0).sqrt());
    let mut rejected = 0usize;

    while it.t < t_span {
        h = h.min(max_step).min(t_span - it.t);
        let h_min = 16.0 * f64::EPSILON * it.t.abs().max(1e-300);
        if h <= h_min {
            return Err(Error::StepFailure {
                t: it.t,
                r: it.r,
                rdot: it.v,
            });
        }
        let err = match it.step(h) {
            Step::Rejected { err } => {
                rejected += 1;
                h *= if err.is_finite() {
                    rk::step_factor(err).min(0.9)
                } else {
                    0.25
                };
                continue;
            }
            Step::Accepted { err, segment } => {
                segments.push(segment);
                err
            }
        };

        if it.r < floor {
            let segment = *segments.last().expect("segment was just pushed");
            let (t0, t1) = segment.bounds();
            let t_floor = bisect(t0, t1, 0.0, |t| segment.state(&model, t).0 - floor);
            let (r, rdot) = segment.state(&model, t_floor);
            samples.push(Sample {
                t: t_floor,
                r,
                rdot,
                h: rdot / r,
            });
            let mut trajectory = Trajectory {
                samples,
                events: Vec::new(),
                params: *params,
                segments,
            };
            finish(&mut trajectory, refine_tol);
            trajectory.events.push(Event {
                kind: EventKind::SingularityApproach,
                t: t_floor,
                r,
                rdot,
                h: rdot / r,
            });
            return Err(Error::SingularityFloor {
                t: t_floor,
                floor,
                trajectory: Box::new(trajectory),
            });
        }

        samples.push(it.sample());
        it.update_mode();
        if config.r_max.is_some_and(|r_max| it.r >= r_max) {
            break;
        }
        h *= rk::step_factor(err);
    }
    debug!(
        "integration done: {} steps, {} rejected, t = {:.6e}, R = {:.6e}",
        segments.len(),
        rejected,
        it.t,
        it.r
    );

    let mut trajectory = Trajectory {
        samples,
        events: Vec::new(),
        params: *params,
        segments,
    };
    finish(&mut trajectory, refine_tol);
    Ok(trajectory)
}

/// Detects all events and merges the event states into the samples.
fn finish(traj: &mut Trajectory, refine_tol: f64) {
    let model = Model(traj.params);
    let mut events = Vec::new();
    events.extend(scan(
        traj,
        refine_tol,
        EventKind::Recollapse,
        |s| s.rdot,
        |_, _| true,
    ));
    events.extend(scan(
        traj,
        refine_tol,
        EventKind::RTurningPoint,
        |s| 0.5 * model.f_prime(s.r),
        |_, _| true,
    ));
    events.extend(hubble_minima(traj, refine_tol));
    events.extend(h_inflections(traj, refine_tol));
    events.sort_by(|a, b| a.t.total_cmp(&b.t));

    let mut merged = Vec::with_capacity(traj.samples.len() + events.len());
    let mut pending = events.iter().peekable();
    for s in &traj.samples {
        while let Some(e) = pending.next_if(|e| e.t < s.t) {
            if merged.last().is_none_or(|m: &Sample| e.t > m.t) {
                merged.push(Sample {
                    t: e.t,
                    r: e.r,
                    rdot: e.rdot,
                    h: e.h,
                });
            }
        }
        if merged.last().is_none_or(|m: &Sample| s.t > m.t) {
            merged.push(*s);
        }
    }
    traj.samples = merged;
    traj.events = events;
}

fn bisect(mut a: f64, mut b: f64, tol: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sign changes of `g` over the step boundaries, refined by bisection on
/// the continuous extension. `accept(before, after)` filters by direction.
fn scan(
    traj: &Trajectory,
    tol: f64,
    kind: EventKind,
    g: impl Fn(&Sample) -> f64,
    accept: impl Fn(f64, f64) -> bool,
) -> Vec<Event> {
    let mut out = Vec::new();
    let at = |t: f64| traj.state_at(t).expect("t inside the integrated span");
    for seg in &traj.segments {
        let (t0, t1) = seg.bounds();
        let (g0, g1) = (g(&at(t0)), g(&at(t1)));
        if g0 == 0.0 || (g0 > 0.0) == (g1 > 0.0) || !accept(g0, g1) {
            continue;
        }
        let t = bisect(t0, t1, tol, |t| g(&at(t)));
        let s = at(t);
        out.push(Event {
            kind,
            t,
            r: s.r,
            rdot: s.rdot,
            h: s.h,
        });
    }
    out
}

fn hubble_minima(traj: &Trajectory, tol: f64) -> Vec<Event> {
    let model = Model(traj.params);
    let hdot = |s: &Sample| (s.r * 0.5 * model.f_prime(s.r) - s.rdot * s.rdot) / (s.r * s.r);
    scan(
        traj,
        tol,
        EventKind::HubbleMinimum,
        hdot,
        |before, after| before < 0.0 && after > 0.0,
    )
}

/// d²H/dt² from a 5-point central stencil with spacing 1e-2/|H|, or `None`
/// when the stencil leaves the integrated span.
fn h_second_derivative(traj: &Trajectory, t: f64) -> Option<f64> {
    let h_here = traj.state_at(t)?.h;
    if h_here == 0.0 {
        return None;
    }
    let dt = 1e-2 / h_here.abs();
    if t - 2.0 * dt < traj.t_start() || t + 2.0 * dt > traj.t_end() {
        return None;
    }
    let hv = |k: f64| traj.state_at(t + k * dt).map(|s| s.h);
    let (m2, m1, c, p1, p2) = (hv(-2.0)?, hv(-1.0)?, hv(0.0)?, hv(1.0)?, hv(2.0)?);
    Some((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * dt * dt))
}

fn h_inflections(traj: &Trajectory, tol: f64) -> Vec<Event> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for seg in &traj.segments {
        let t = seg.bounds().1;
        let Some(d2) = h_second_derivative(traj, t) else {
            prev = None;
            continue;
        };
        if let Some((t_prev, d2_prev)) = prev {
            if d2_prev != 0.0 && (d2_prev > 0.0) != (d2 > 0.0) {
                let t_event = bisect(t_prev, t, tol, |t| {
                    h_second_derivative(traj, t).unwrap_or(d2_prev)
                });
                let s = traj.state_at(t_event).expect("inside span");
                out.push(Event {
                    kind: EventKind::HTurningPoint,
                    t: t_event,
                    r: s.r,
                    rdot: s.rdot,
                    h: s.h,
                });
            }
        }
        prev = Some((t, d2));
    }
    out
}

/// The Hubble minimum of an integrated trajectory.
///
/// Uses the refined event when one was detected; otherwise falls back to
/// the smallest interior sample of H with a parabolic correction.
pub fn locate_h_minimum(traj: &Trajectory) -> Result<Event> {
    if let Some(e) = traj.events_of(EventKind::HubbleMinimum).next() {
        return Ok(*e);
    }
    let s = &traj.samples;
    let i = (1..s.len().saturating_sub(1))
        .filter(|&i| s[i].h > 0.0 && s[i].h < s[i - 1].h && s[i].h <= s[i + 1].h)
        .min_by(|&a, &b| s[a].h.total_cmp(&s[b].h))
        .ok_or(Error::NoExtremumInSpan)?;
    let (a, b, c) = (s[i - 1], s[i], s[i + 1]);
    let denom = (b.t - a.t) * (b.h - c.h) - (b.t - c.t) * (b.h - a.h);
    let t = if denom != 0.0 {
        let num = (b.t - a.t).powi(2) * (b.h - c.h) - (b.t - c.t).powi(2) * (b.h - a.h);
        (b.t - 0.5 * num / denom).clamp(a.t, c.t)
    } else {
        b.t
    };
    let st = traj.state_at(t).unwrap_or(b);
    Ok(Event {
        kind: EventKind::HubbleMinimum,
        t,
        r: st.r,
        rdot: st.rdot,
        h: st.h,
    })
}

/// Turning points of R(t) and of H(t) along `traj`, evaluated with `params`.
pub fn locate_turning_points(traj: &Trajectory, params: &ReducedParams) -> Result<Vec<Event>> {
    let model = Model(*params);
    let tol = 1e-12 * (traj.t_end() - traj.t_start());
    let mut events = scan(
        traj,
        tol,
        EventKind::RTurningPoint,
        |s| 0.5 * model.f_prime(s.r),
        |_, _| true,
    );
    events.extend(h_inflections(traj, tol));
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    if events.is_empty() {
        return Err(Error::NoExtremumInSpan);
    }
    Ok(events)
}
