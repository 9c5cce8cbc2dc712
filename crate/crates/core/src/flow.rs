//! Weighted curve-shortening flow in support-function form.
//!
//! With flow weight `gamma = h~ (h~ + h~'')` the support function evolves by
//! `h_t = -gamma / (h + h'')`. The isoperimetrix shrinks self-similarly,
//! `A_t = -2 alpha`, and `L_t = -int (k / k~)^2 dsigma`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annulus::minimal_annulus;
use crate::bonnesen::positive_center_audit;
use crate::curve::SupportCurve;
use crate::error::{GeomError, Result};
use crate::gauge::{minkowski_length, Gauge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// Forward Euler.
    Euler,
    /// Heun's method (explicit trapezoid). Same stability interval as Euler
    /// on the negative real axis, second order in time.
    #[default]
    Heun,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub dt_safety: f64,
    /// Stop once the enclosed area is at or below this value.
    pub area_stop: f64,
    pub max_steps: usize,
    pub record_every: usize,
    pub integrator: Integrator,
    /// Keep a copy of the support samples at every record.
    pub keep_curves: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            dt_safety: 0.5,
            area_stop: 0.0,
            max_steps: 10_000_000,
            record_every: 10,
            integrator: Integrator::Heun,
            keep_curves: false,
        }
    }
}

impl FlowConfig {
    /// Default settings stopping at `fraction` of the initial area.
    pub fn until_area_fraction(curve: &SupportCurve, fraction: f64) -> Self {
        FlowConfig { area_stop: fraction * curve.scalars().area, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(GeomError::InvalidParameter(format!("dt_safety must lie in (0, 1], got {}", self.dt_safety)));
        }
        if self.record_every == 0 || self.max_steps == 0 {
            return Err(GeomError::InvalidParameter("record_every and max_steps must be positive".into()));
        }
        if !(self.area_stop >= 0.0) {
            return Err(GeomError::InvalidParameter(format!("area_stop must be non-negative, got {}", self.area_stop)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub curve: SupportCurve,
    pub gauge: Arc<Gauge>,
}

/// One recorded row of diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub step: usize,
    pub t: f64,
    /// Euclidean length.
    pub length: f64,
    pub area: f64,
    /// Minkowski length.
    pub minkowski_length: f64,
    /// `L^2 / A` in the gauge.
    pub ratio: f64,
    /// `int (k / k~)^2 dsigma`.
    pub dissipation: f64,
    /// `-2 (L / A) (D - alpha L / A)`.
    pub predicted_ratio_rate: f64,
    pub min_convexity_margin: f64,
    /// Mean of `h / h~`.
    pub homothety_scale: f64,
    /// `max |h / h~ - mean|`.
    pub homothety_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    AreaFloor,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub alpha: f64,
    pub rows: Vec<FlowRecord>,
    pub stop: StopReason,
    /// Support samples at each record when `keep_curves` is set.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub snapshots: Vec<Vec<f64>>,
}

/// A run that lost convexity. Carries the offending samples and everything
/// recorded before the failure.
#[derive(Debug, Clone, Error)]
#[error("flow aborted at step {step} (t = {t}): {source}")]
pub struct FlowAbort {
    pub source: GeomError,
    pub step: usize,
    pub t: f64,
    pub support: Vec<f64>,
    pub trace: Box<FlowTrace>,
}

impl FlowState {
    pub fn new(curve: SupportCurve, gauge: Arc<Gauge>) -> Result<Self> {
        curve.grid().check_same(gauge.grid())?;
        Ok(FlowState { t: 0.0, curve, gauge })
    }

    /// `h_t = -gamma / (h + h'')` at the current state.
    fn velocity(gamma: &[f64], h: &[f64], d2h: &[f64]) -> Vec<f64> {
        gamma.iter().zip(h.iter().zip(d2h)).map(|(g, (a, b))| -g / (a + b)).collect()
    }

    /// `Delta theta^2 min (h + h'')^2 / (4 max gamma)`, scaled by `safety`.
    pub fn stability_dt(&self, safety: f64) -> f64 {
        let dtheta = self.curve.grid().dtheta();
        let r = self.curve.min_radius_of_curvature();
        let gmax = self.gauge.gamma().iter().copied().fold(0.0, f64::max);
        safety * dtheta * dtheta * r * r / (4.0 * gmax)
    }

    fn check_dt(&self, dt: f64) -> Result<()> {
        if !(dt >= 0.0) || dt > self.stability_dt(1.0) * (1.0 + 1e-12) {
            return Err(GeomError::InvalidParameter(format!("time step {dt} outside [0, {}]", self.stability_dt(1.0))));
        }
        Ok(())
    }

    /// One forward-Euler step `h <- h - dt gamma / (h + h'')`.
    pub fn step(&self, dt: f64) -> Result<FlowState> {
        self.check_dt(dt)?;
        let h = self.curve.support();
        let (_, d2h) = self.curve.derivatives();
        let v = Self::velocity(self.gauge.gamma(), h, d2h);
        let next: Vec<f64> = h.iter().zip(&v).map(|(h, v)| h + dt * v).collect();
        self.advance(next, dt)
    }

    /// One Heun step.
    pub fn step_heun(&self, dt: f64) -> Result<FlowState> {
        self.check_dt(dt)?;
        let grid = self.curve.grid();
        let gamma = self.gauge.gamma();
        let h = self.curve.support();
        let (_, d2h) = self.curve.derivatives();
        let v1 = Self::velocity(gamma, h, d2h);
        let predictor: Vec<f64> = h.iter().zip(&v1).map(|(h, v)| h + dt * v).collect();
        let pd2 = grid.second_derivative(&predictor);
        let radius: Vec<f64> = predictor.iter().zip(&pd2).map(|(a, b)| a + b).collect();
        crate::curve::check_convexity(grid, &predictor, &radius)?;
        let v2 = Self::velocity(gamma, &predictor, &pd2);
        let next: Vec<f64> = h.iter().zip(v1.iter().zip(&v2)).map(|(h, (a, b))| h + 0.5 * dt * (a + b)).collect();
        self.advance(next, dt)
    }

    fn advance(&self, h: Vec<f64>, dt: f64) -> Result<FlowState> {
        let mut curve = SupportCurve::from_samples(self.curve.grid().clone(), h)?;
        if let Some(label) = self.curve.label() {
            curve = curve.with_label(label.to_string());
        }
        Ok(FlowState { t: self.t + dt, curve, gauge: self.gauge.clone() })
    }

    /// `int (k / k~)^2 dsigma = sum h~ (h~ + h~'')^2 / (h + h'') dtheta`.
    pub fn dissipation(&self) -> f64 {
        let (_, td2) = self.gauge.derivatives();
        let total: f64 = self
            .gauge
            .support()
            .iter()
            .zip(td2)
            .zip(self.curve.radius_of_curvature())
            .map(|((ht, d2), r)| {
                let rt = ht + d2;
                ht * rt * rt / r
            })
            .sum();
        total * self.curve.grid().dtheta()
    }

    pub fn record(&self, step: usize) -> Result<FlowRecord> {
        let euclid = self.curve.scalars();
        let mink = minkowski_length(&self.curve, &self.gauge)?;
        let dissipation = self.dissipation();
        let alpha = self.gauge.alpha();
        let lo_a = mink.length / mink.area;
        let rel: Vec<f64> = self.curve.support().iter().zip(self.gauge.support()).map(|(h, ht)| h / ht).collect();
        let mean = rel.iter().sum::<f64>() / rel.len() as f64;
        let defect = rel.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
        Ok(FlowRecord {
            step,
            t: self.t,
            length: euclid.length,
            area: euclid.area,
            minkowski_length: mink.length,
            ratio: mink.ratio,
            dissipation,
            predicted_ratio_rate: -2.0 * lo_a * (dissipation - alpha * lo_a),
            min_convexity_margin: self.curve.min_radius_of_curvature(),
            homothety_scale: mean,
            homothety_defect: defect,
        })
    }

    /// The Cauchy-Schwarz chain behind ratio monotonicity, with `h` based at
    /// the minimal-annulus center.
    pub fn dissipation_chain(&self) -> Result<DissipationChain> {
        let annulus = minimal_annulus(&self.curve, &self.gauge)?;
        let audit = positive_center_audit(&self.curve, &self.gauge, annulus.center)?;
        let mink = minkowski_length(&self.curve, &self.gauge)?;
        Ok(DissipationChain {
            length_sq: mink.length * mink.length,
            support_integral: audit.integral,
            dissipation: self.dissipation(),
            lower_bound: self.gauge.alpha() * mink.length / mink.area,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationChain {
    pub length_sq: f64,
    /// `int (h / h~)^2 dsigma` at the annulus center.
    pub support_integral: f64,
    pub dissipation: f64,
    /// `alpha L / A`.
    pub lower_bound: f64,
}

impl DissipationChain {
    /// `L^2 <= (int (h/h~)^2 dsigma)(int (k/k~)^2 dsigma)`.
    pub fn cauchy_schwarz_holds(&self, rel_tol: f64) -> bool {
        self.length_sq <= self.support_integral * self.dissipation * (1.0 + rel_tol)
    }

    /// `alpha L / A <= int (k/k~)^2 dsigma`.
    pub fn lower_bound_holds(&self, rel_tol: f64) -> bool {
        self.lower_bound <= self.dissipation * (1.0 + rel_tol)
    }
}

/// Integrates from `curve` until the area floor or the step limit.
pub fn run(curve: SupportCurve, gauge: Arc<Gauge>, config: &FlowConfig) -> std::result::Result<FlowTrace, FlowAbort> {
    let alpha = gauge.alpha();
    let mut trace = FlowTrace { alpha, rows: Vec::new(), stop: StopReason::MaxSteps, snapshots: Vec::new() };
    let abort = |source: GeomError, step: usize, state: &FlowState, trace: &FlowTrace| FlowAbort {
        source,
        step,
        t: state.t,
        support: state.curve.support().to_vec(),
        trace: Box::new(trace.clone()),
    };
    let mut state = match FlowState::new(curve, gauge).and_then(|s| config.validate().map(|_| s)) {
        Ok(s) => s,
        Err(e) => return Err(FlowAbort { source: e, step: 0, t: 0.0, support: Vec::new(), trace: Box::new(trace) }),
    };
    let keep = |state: &FlowState, step: usize, trace: &mut FlowTrace| -> Result<f64> {
        let row = state.record(step)?;
        trace.rows.push(row);
        if config.keep_curves {
            trace.snapshots.push(state.curve.support().to_vec());
        }
        Ok(row.area)
    };
    let mut area = match keep(&state, 0, &mut trace) {
        Ok(a) => a,
        Err(e) => return Err(abort(e, 0, &state, &trace)),
    };
    for step in 1..=config.max_steps {
        if area <= config.area_stop {
            trace.stop = StopReason::AreaFloor;
            break;
        }
        let dt = state.stability_dt(config.dt_safety);
        let next = match config.integrator {
            Integrator::Euler => state.step(dt),
            Integrator::Heun => state.step_heun(dt),
        };
        state = match next {
            Ok(s) => s,
            Err(e) => return Err(abort(e, step, &state, &trace)),
        };
        let area_now = state.curve.scalars().area;
        let at_floor = area_now <= config.area_stop;
        if step % config.record_every == 0 || at_floor || step == config.max_steps {
            if let Err(e) = keep(&state, step, &mut trace) {
                return Err(abort(e, step, &state, &trace));
            }
        }
        area = area_now;
    }
    if area <= config.area_stop {
        trace.stop = StopReason::AreaFloor;
    }
    Ok(trace)
}

/// Finite-difference check of the rate identities along a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// `max |dA/dt + 2 alpha| / 2 alpha`.
    pub area_rate_error: f64,
    /// `max |dL/dt + D| / D`.
    pub length_rate_error: f64,
    /// `max |d(L^2/A)/dt - predicted| / |predicted|`.
    pub ratio_rate_error: f64,
    /// Same residual scaled by `2 L D / A + 2 alpha L^2 / A^2`, the size of
    /// the two terms whose difference is the rate.
    pub ratio_rate_error_scaled: f64,
    pub samples: usize,
}

/// Second-order derivative at the middle of three unevenly spaced samples.
fn central_difference(t: [f64; 3], x: [f64; 3]) -> f64 {
    let (hm, hp) = (t[1] - t[0], t[2] - t[1]);
    (hm * hm * x[2] - hp * hp * x[0] + (hp * hp - hm * hm) * x[1]) / (hm * hp * (hm + hp))
}

/// Compares central differences of `A`, `L` and `L^2/A` at interior records
/// against the closed-form rates. Needs at least three rows.
pub fn verify_rates(trace: &FlowTrace) -> Result<RateReport> {
    let rows = &trace.rows;
    if rows.len() < 3 {
        return Err(GeomError::InvalidParameter(format!("need >= 3 records, got {}", rows.len())));
    }
    let alpha = trace.alpha;
    let mut report = RateReport {
        area_rate_error: 0.0,
        length_rate_error: 0.0,
        ratio_rate_error: 0.0,
        ratio_rate_error_scaled: 0.0,
        samples: 0,
    };
    for w in rows.windows(3) {
        let t = [w[0].t, w[1].t, w[2].t];
        let mid = &w[1];
        let da = central_difference(t, [w[0].area, w[1].area, w[2].area]);
        let dl = central_difference(t, [w[0].minkowski_length, w[1].minkowski_length, w[2].minkowski_length]);
        let dr = central_difference(t, [w[0].ratio, w[1].ratio, w[2].ratio]);
        let lo_a = mid.minkowski_length / mid.area;
        let scale = 2.0 * lo_a * mid.dissipation + 2.0 * alpha * lo_a * lo_a;
        let ratio_residual = (dr - mid.predicted_ratio_rate).abs();
        report.area_rate_error = report.area_rate_error.max((da + 2.0 * alpha).abs() / (2.0 * alpha));
        report.length_rate_error = report.length_rate_error.max((dl + mid.dissipation).abs() / mid.dissipation);
        report.ratio_rate_error = report.ratio_rate_error.max(ratio_residual / mid.predicted_ratio_rate.abs());
        report.ratio_rate_error_scaled = report.ratio_rate_error_scaled.max(ratio_residual / scale);
        report.samples += 1;
    }
    Ok(report)
}
