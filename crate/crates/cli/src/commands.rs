use std::sync::Arc;

use bonnesen_core::annulus::{certify_alternation, minimal_annulus, radii};
use bonnesen_core::bonnesen::{
    audit_rows, bonnesen, positive_center_audit, roots_and_deficit, strong_bonnesen_margin, BonnesenReport,
};
use bonnesen_core::flow::{run, verify_rates, StopReason};
use bonnesen_core::gauge::minkowski_length;
use bonnesen_core::integral_geometry::{
    averaging_balance, classify_samples, kinematic_tally, mc_crofton, translative_tally, translative_target,
    AnnulusSide, TranslativeKind,
};
use bonnesen_core::io::annulus_profile;
use bonnesen_core::{AnnulusResult, FlowTrace, MCReport, Point, RateReport};
use serde::Serialize;

use crate::error::CliError;
use crate::output::Artifact;
use crate::scenario::{side_name, McKind, Scenario, Setup};

/// Tolerance for the closed-form Bonnesen checks, relative to the area.
const AREA_TOL: f64 = 1e-9;
/// Largest accepted Monte Carlo z-score.
const Z_LIMIT: f64 = 4.0;
/// Rate identities are checked by finite differences to this relative error.
const RATE_TOL: f64 = 1e-3;

pub type Artifacts = Vec<Artifact>;

#[derive(Debug, Serialize)]
pub struct Info {
    pub label: Option<String>,
    pub n: usize,
    pub euclidean_length: f64,
    pub area: f64,
    pub minkowski_length: f64,
    pub alpha: f64,
    pub ratio: f64,
    pub deficit: f64,
    pub r_minus: Option<f64>,
    pub r_plus: Option<f64>,
}

pub fn info(setup: &Setup) -> Result<Artifacts, CliError> {
    let s = minkowski_length(&setup.curve, &setup.gauge)?;
    let report = roots_and_deficit(&s);
    let info = Info {
        label: setup.curve.label().map(str::to_owned),
        n: setup.grid.len(),
        euclidean_length: setup.curve.scalars().length,
        area: s.area,
        minkowski_length: s.length,
        alpha: s.alpha,
        ratio: s.ratio,
        deficit: report.deficit,
        r_minus: report.roots.map(|r| r.0),
        r_plus: report.roots.map(|r| r.1),
    };
    Ok(vec![Artifact::with_table("info", &info, &[&info])?])
}

#[derive(Debug, Serialize)]
struct FlowSummary {
    alpha: f64,
    stop: StopReason,
    records: usize,
    initial_ratio: f64,
    final_ratio: f64,
    limit_ratio: f64,
    final_area_fraction: f64,
    max_ratio_increase: f64,
    rates: Option<RateReport>,
}

fn summarize(trace: &FlowTrace) -> Result<FlowSummary, CliError> {
    let first = trace.rows.first().ok_or_else(|| CliError::Assertion("flow produced no records".into()))?;
    let last = trace.rows.last().unwrap_or(first);
    Ok(FlowSummary {
        alpha: trace.alpha,
        stop: trace.stop,
        records: trace.rows.len(),
        initial_ratio: first.ratio,
        final_ratio: last.ratio,
        limit_ratio: 4.0 * trace.alpha,
        final_area_fraction: last.area / first.area,
        max_ratio_increase: trace.rows.windows(2).map(|w| w[1].ratio - w[0].ratio).fold(f64::NEG_INFINITY, f64::max),
        rates: if trace.rows.len() >= 3 { Some(verify_rates(trace)?) } else { None },
    })
}

#[derive(Debug, Serialize)]
struct SnapshotRow {
    record: usize,
    theta: f64,
    h: f64,
}

fn run_flow(scenario: &Scenario, setup: &Setup) -> Result<FlowTrace, CliError> {
    let cfg = scenario.flow.config(setup.curve.scalars().area)?;
    Ok(run(setup.curve.clone(), Arc::clone(&setup.gauge), &cfg)?)
}

pub fn flow(scenario: &Scenario, setup: &Setup) -> Result<Artifacts, CliError> {
    let trace = run_flow(scenario, setup)?;
    let mut out = vec![
        Artifact::with_table("flow_trace", &trace, &trace.rows)?,
        Artifact::report("flow_summary", &summarize(&trace)?)?,
    ];
    if !trace.snapshots.is_empty() {
        let rows: Vec<SnapshotRow> = trace
            .snapshots
            .iter()
            .enumerate()
            .flat_map(|(record, h)| setup.grid.thetas().zip(h).map(move |(theta, &h)| SnapshotRow { record, theta, h }))
            .collect();
        out.push(Artifact::table("flow_curves", &rows)?);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct AnnulusReport<'a> {
    #[serde(flatten)]
    result: &'a AnnulusResult,
    alternating: bool,
    r_in: f64,
    r_out: f64,
}

pub fn annulus(setup: &Setup) -> Result<Artifacts, CliError> {
    let result = minimal_annulus(&setup.curve, &setup.gauge)?;
    let rr = radii(&setup.curve, &setup.gauge)?;
    let report = AnnulusReport {
        result: &result,
        alternating: certify_alternation(&result, setup.grid.len()),
        r_in: rr.r_in,
        r_out: rr.r_out,
    };
    let profile = annulus_profile(&setup.curve, &setup.gauge, &result)?;
    Ok(vec![Artifact::with_table("annulus", &report, &profile)?])
}

fn audit_origin(scenario: &Scenario, setup: &Setup) -> Result<Point, CliError> {
    Ok(match scenario.audit.origin {
        Some(p) => Point::from(p),
        None => minimal_annulus(&setup.curve, &setup.gauge)?.center,
    })
}

pub fn audit(scenario: &Scenario, setup: &Setup) -> Result<Artifacts, CliError> {
    let origin = audit_origin(scenario, setup)?;
    let audit = positive_center_audit(&setup.curve, &setup.gauge, origin)?;
    let rows = audit_rows(&setup.curve, &setup.gauge, origin)?;
    Ok(vec![Artifact::with_table("audit", &audit, &rows)?])
}

#[derive(Debug, Clone, Serialize)]
pub struct McRow {
    pub kind: &'static str,
    pub radius: Option<f64>,
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub target: f64,
    pub z: f64,
    pub pass: bool,
}

impl McRow {
    fn new(kind: &'static str, radius: Option<f64>, r: MCReport) -> Self {
        McRow {
            kind,
            radius,
            estimate: r.estimate,
            std_error: r.std_error,
            n_samples: r.n_samples,
            target: r.target,
            z: r.z,
            pass: r.z <= Z_LIMIT,
        }
    }
}

const TRANSLATIVE: [(TranslativeKind, &str); 3] = [
    (TranslativeKind::Poincare, "poincare"),
    (TranslativeKind::Blaschke, "blaschke"),
    (TranslativeKind::Bonnesen, "bonnesen"),
];

fn default_radius(scenario: &Scenario, setup: &Setup) -> Result<f64, CliError> {
    match scenario.mc.radius {
        Some(r) => Ok(r),
        None => {
            let rr = radii(&setup.curve, &setup.gauge)?;
            Ok(0.5 * (rr.r_in + rr.r_out))
        }
    }
}

pub fn mc(scenario: &Scenario, setup: &Setup) -> Result<Artifacts, CliError> {
    let cfg = scenario.mc.config(scenario.seed);
    let (curve, gauge) = (&setup.curve, &*setup.gauge);
    let mut out = Vec::new();
    let rows = match scenario.mc.kind {
        McKind::Translative => {
            let r = default_radius(scenario, setup)?;
            let tally = translative_tally(curve, gauge, r, &cfg)?;
            let rows = TRANSLATIVE
                .iter()
                .map(|&(kind, name)| {
                    Ok(McRow::new(name, Some(r), tally.report(kind, translative_target(curve, gauge, r, kind)?)))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            if scenario.mc.dump > 0 {
                out.push(Artifact::table("samples", &classify_samples(curve, gauge, r, &cfg, scenario.mc.dump)?)?);
            }
            rows
        }
        McKind::Kinematic => {
            if !gauge.is_euclidean() {
                return Err(CliError::Validation("kinematic Monte Carlo needs the Euclidean gauge".into()));
            }
            let partner = scenario.build_curve(&scenario.mc.partner, &setup.grid, gauge)?;
            let tally = kinematic_tally(curve, &partner, &cfg)?;
            let (s0, s1) = (curve.scalars(), partner.scalars());
            let poincare = 4.0 * s0.length * s1.length;
            let blaschke = 2.0 * std::f64::consts::PI * (s0.area + s1.area) + s0.length * s1.length;
            vec![
                McRow::new("kinematic_poincare", None, tally.report(TranslativeKind::Poincare, poincare)),
                McRow::new("kinematic_blaschke", None, tally.report(TranslativeKind::Blaschke, blaschke)),
            ]
        }
        McKind::Crofton => vec![McRow::new("crofton", None, mc_crofton(curve, &cfg)?)],
    };
    out.insert(0, Artifact::table("mc", &rows)?);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BalanceRow {
    pub side: &'static str,
    pub radius: f64,
    pub measure_neg: f64,
    pub measure_pos4: f64,
    pub sigma_neg: f64,
    pub sigma_pos4: f64,
    pub bonnesen: f64,
    pub balanced: bool,
}

fn balance_rows(scenario: &Scenario, setup: &Setup, annulus: &AnnulusResult) -> Result<Vec<BalanceRow>, CliError> {
    let s = minkowski_length(&setup.curve, &setup.gauge)?;
    [AnnulusSide::Inner, AnnulusSide::Outer]
        .into_iter()
        .enumerate()
        .map(|(i, side)| {
            let cfg = scenario.mc.config(scenario.seed.wrapping_add(i as u64));
            let t = averaging_balance(&setup.curve, &setup.gauge, annulus, side, &cfg)?;
            Ok(BalanceRow {
                side: side_name(side),
                radius: t.radius,
                measure_neg: t.measure_neg,
                measure_pos4: t.measure_pos4,
                sigma_neg: t.radius_neg,
                sigma_pos4: t.radius_pos4,
                bonnesen: bonnesen(t.radius, &s),
                balanced: t.balanced(),
            })
        })
        .collect()
}

pub fn balance(scenario: &Scenario, setup: &Setup) -> Result<Artifacts, CliError> {
    let annulus = minimal_annulus(&setup.curve, &setup.gauge)?;
    Ok(vec![Artifact::table("balance", &balance_rows(scenario, setup, &annulus)?)?])
}

#[derive(Debug, Serialize)]
struct SweepRow {
    r: f64,
    bonnesen: f64,
    estimate: Option<f64>,
    std_error: Option<f64>,
    z: Option<f64>,
}

pub fn sweep(scenario: &Scenario, setup: &Setup) -> Result<Artifacts, CliError> {
    let s = minkowski_length(&setup.curve, &setup.gauge)?;
    let report = BonnesenReport::at(0.0, &s);
    let vertex = s.length / (2.0 * s.alpha);
    let lo = scenario.sweep.r_min.unwrap_or(0.0);
    let hi = scenario.sweep.r_max.unwrap_or(1.25 * report.roots.map_or(2.0 * vertex, |r| r.1));
    let steps = scenario.sweep.steps;
    if steps < 2 || !(hi > lo) || lo < 0.0 {
        return Err(CliError::Validation(format!(
            "sweep needs steps >= 2 and 0 <= r_min < r_max, got {steps}, [{lo}, {hi}]"
        )));
    }
    let rows = (0..steps)
        .map(|i| {
            let r = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
            let mut row = SweepRow { r, bonnesen: bonnesen(r, &s), estimate: None, std_error: None, z: None };
            if scenario.sweep.monte_carlo && r > 0.0 {
                let cfg = scenario.mc.config(scenario.seed.wrapping_add(i as u64));
                let tally = translative_tally(&setup.curve, &setup.gauge, r, &cfg)?;
                let rep = tally.report(TranslativeKind::Bonnesen, row.bonnesen);
                row.estimate = Some(rep.estimate);
                row.std_error = Some(rep.std_error);
                row.z = Some(rep.z);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(vec![Artifact::table("sweep", &rows)?])
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

fn check(checks: &mut Vec<Check>, name: &str, pass: bool, detail: String) {
    checks.push(Check { check: name.into(), pass, detail });
}

/// Annulus, positive-center audit, flow and Monte Carlo in sequence. The
/// artifacts are produced even when a check fails; the caller turns a
/// failure into an assertion exit.
pub fn pipeline(scenario: &Scenario, setup: &Setup) -> Result<(Artifacts, bool), CliError> {
    let (curve, gauge) = (&setup.curve, &*setup.gauge);
    let s = minkowski_length(curve, gauge)?;
    let area_tol = AREA_TOL * s.area;
    let mut checks = Vec::new();

    let annulus = minimal_annulus(curve, gauge)?;
    check(
        &mut checks,
        "annulus_alternation",
        certify_alternation(&annulus, setup.grid.len()),
        format!("rho_in={} rho_out={} contacts={}", annulus.rho_in, annulus.rho_out, annulus.contacts.len()),
    );
    let (b_in, b_out) = (bonnesen(annulus.rho_in, &s), bonnesen(annulus.rho_out, &s));
    check(
        &mut checks,
        "bonnesen_at_annulus_radii",
        b_in >= -area_tol && b_out >= -area_tol,
        format!("B(rho_in)={b_in:e} B(rho_out)={b_out:e}"),
    );
    let margin = strong_bonnesen_margin(&s, annulus.rho_in, annulus.rho_out);
    check(
        &mut checks,
        "strong_bonnesen",
        margin >= -1e-8 * s.length * s.length,
        format!("deficit - alpha^2 (rho_out - rho_in)^2 = {margin:e}"),
    );

    let audit = positive_center_audit(curve, gauge, annulus.center)?;
    check(
        &mut checks,
        "positive_center",
        audit.min_value >= -area_tol && audit.integral_within_bound(),
        format!("min B(h/h~)={:e} integral={} bound={}", audit.min_value, audit.integral, audit.bound),
    );

    let trace = run_flow(scenario, setup)?;
    let summary = summarize(&trace)?;
    check(
        &mut checks,
        "flow_monotone",
        summary.max_ratio_increase <= 1e-9,
        format!("max ratio increase {:e} over {} records", summary.max_ratio_increase, summary.records),
    );
    let final_err = (summary.final_ratio / summary.limit_ratio - 1.0).abs();
    check(
        &mut checks,
        "flow_limit",
        summary.stop == StopReason::AreaFloor && final_err <= 0.01,
        format!("final ratio {} vs 4 alpha = {} ({:?})", summary.final_ratio, summary.limit_ratio, summary.stop),
    );
    match summary.rates {
        Some(r) => check(
            &mut checks,
            "rate_identities",
            r.area_rate_error <= RATE_TOL && r.length_rate_error <= RATE_TOL && r.ratio_rate_error <= RATE_TOL,
            format!(
                "dA/dt {:e}, dL/dt {:e}, d(ratio)/dt {:e}",
                r.area_rate_error, r.length_rate_error, r.ratio_rate_error
            ),
        ),
        None => check(&mut checks, "rate_identities", false, "fewer than three flow records".into()),
    }

    let cfg = scenario.mc.config(scenario.seed);
    let rr = radii(curve, gauge)?;
    let r = scenario.mc.radius.unwrap_or(0.5 * (rr.r_in + rr.r_out));
    let tally = translative_tally(curve, gauge, r, &cfg)?;
    for (kind, name) in TRANSLATIVE {
        let rep = tally.report(kind, translative_target(curve, gauge, r, kind)?);
        check(
            &mut checks,
            &format!("mc_{name}"),
            rep.z <= Z_LIMIT,
            format!("estimate {} +- {} vs {} (z = {:.2})", rep.estimate, rep.std_error, rep.target, rep.z),
        );
    }
    if rr.r_in < r && r < rr.r_out {
        let frac = tally.overlap_without_crossing_fraction();
        check(&mut checks, "santalo", frac < 1e-3, format!("fraction(nu = 1, n < 2) = {frac:e} at r = {r}"));
    }
    for row in balance_rows(scenario, setup, &annulus)? {
        check(
            &mut checks,
            &format!("balance_{}", row.side),
            row.balanced && row.bonnesen >= -area_tol,
            format!("neg {} +- {}, pos4 {} +- {}", row.measure_neg, row.sigma_neg, row.measure_pos4, row.sigma_pos4),
        );
    }

    let ok = checks.iter().all(|c| c.pass);
    Ok((vec![Artifact::table("pipeline", &checks)?], ok))
}

pub fn describe_failures(artifacts: &Artifacts) -> String {
    let failed: Vec<String> = artifacts
        .first()
        .and_then(|a| a.json.as_array())
        .map(|rows| {
            rows.iter()
                .filter(|r| r["pass"] == false)
                .map(|r| format!("{}: {}", r["check"].as_str().unwrap_or("?"), r["detail"].as_str().unwrap_or("")))
                .collect()
        })
        .unwrap_or_default();
    format!("pipeline checks failed: {}", failed.join("; "))
}
