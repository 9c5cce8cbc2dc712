//! Monte Carlo checks of the integral-geometry identities.
//!
//! Translative measure (any gauge), moving body `r T + c`:
//!
//! * `int n dc = 4 r L`
//! * `int nu dc = A + r L + r^2 alpha`
//! * `int (n/2 - nu) dc = B(r) = r L - A - alpha r^2`
//!
//! where `n` counts boundary crossings and `nu` is 1 when the bodies meet.
//! The Euclidean kinematic versions add a uniform rotation, and Crofton's
//! formula counts crossings with random lines.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::annulus::AnnulusResult;
use crate::curve::SupportCurve;
use crate::error::{GeomError, Result};
use crate::gauge::{minkowski_length, Gauge};
use crate::point::Point;
use crate::polygon::TangentPolygon;
use crate::rng::CounterRng;

/// Angular range of unoriented lines in Crofton's formula. With `[0, pi)`
/// the identity reads `int n dp dtheta = 2 L`; the target scales with this
/// span.
pub const CROFTON_ANGLE_SPAN: f64 = PI;

/// Samples per reduction chunk. Chunks are reduced in index order, so
/// results do not depend on the number of workers.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MCConfig {
    pub n_samples: u64,
    pub seed: u64,
    /// Points probed on the moving boundary for crossing counts.
    pub probes: usize,
    /// Relative padding of the sampling box.
    pub pad_fraction: f64,
    pub workers: usize,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig { n_samples: 100_000, seed: 0, probes: 512, pad_fraction: 0.01, workers: 1 }
    }
}

impl MCConfig {
    fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(GeomError::InvalidParameter("need at least two samples".into()));
        }
        if self.probes < 4 || !self.probes.is_multiple_of(2) {
            return Err(GeomError::InvalidParameter(format!("probe count must be even and >= 4, got {}", self.probes)));
        }
        if !(self.pad_fraction >= 0.0) {
            return Err(GeomError::InvalidParameter("pad_fraction must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub target: f64,
    pub z: f64,
}

impl MCReport {
    fn from_moments(sum: f64, sum_sq: f64, n: u64, measure: f64, target: f64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        let estimate = measure * mean;
        let std_error = measure * (var / nf).sqrt();
        let diff = (estimate - target).abs();
        let z = if std_error > 0.0 {
            diff / std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        MCReport { estimate, std_error, n_samples: n, target, z }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslativeKind {
    Poincare,
    Blaschke,
    Bonnesen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KinematicKind {
    Poincare,
    Blaschke,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnulusSide {
    Inner,
    Outer,
}

/// Areas of the placement regions `{n = 0, nu = 1}` and `{n >= 4, nu = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionTally {
    pub radius: f64,
    pub measure_neg: f64,
    pub measure_pos4: f64,
    /// Binomial standard errors of the two measures.
    pub radius_neg: f64,
    pub radius_pos4: f64,
    pub n_samples: u64,
    pub degenerate: bool,
}

impl RegionTally {
    /// `measure_pos4 >= measure_neg - 3 sigma` with the two errors combined.
    pub fn balanced(&self) -> bool {
        let sigma = self.radius_neg.hypot(self.radius_pos4);
        self.measure_pos4 >= self.measure_neg - 3.0 * sigma
    }
}

/// Raw counts from one sampling pass over placements.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlacementTally {
    pub n_samples: u64,
    /// Measure of the sampled placement set (box area, times `2 pi` with rotation).
    pub measure: f64,
    pub sum_n: f64,
    pub sum_n_sq: f64,
    pub sum_nu: f64,
    pub sum_half_n_minus_nu_sq: f64,
    /// `nu = 1` and `n = 0`.
    pub neg: u64,
    /// `nu = 1` and `n >= 4`.
    pub pos4: u64,
    /// `nu = 1` and `n < 2`.
    pub overlap_without_crossing: u64,
}

impl PlacementTally {
    fn merge(&mut self, other: &PlacementTally) {
        self.n_samples += other.n_samples;
        self.sum_n += other.sum_n;
        self.sum_n_sq += other.sum_n_sq;
        self.sum_nu += other.sum_nu;
        self.sum_half_n_minus_nu_sq += other.sum_half_n_minus_nu_sq;
        self.neg += other.neg;
        self.pos4 += other.pos4;
        self.overlap_without_crossing += other.overlap_without_crossing;
    }

    fn add(&mut self, n: u32, nu: u32) {
        let (nf, nuf) = (n as f64, nu as f64);
        let b = 0.5 * nf - nuf;
        self.n_samples += 1;
        self.sum_n += nf;
        self.sum_n_sq += nf * nf;
        self.sum_nu += nuf;
        self.sum_half_n_minus_nu_sq += b * b;
        if nu == 1 {
            match n {
                0 => self.neg += 1,
                n if n >= 4 => self.pos4 += 1,
                _ => {}
            }
            if n < 2 {
                self.overlap_without_crossing += 1;
            }
        }
    }

    pub fn report(&self, kind: TranslativeKind, target: f64) -> MCReport {
        let n = self.n_samples;
        // nu is 0/1 so its square sums to sum_nu
        let (sum, sum_sq) = match kind {
            TranslativeKind::Poincare => (self.sum_n, self.sum_n_sq),
            TranslativeKind::Blaschke => (self.sum_nu, self.sum_nu),
            TranslativeKind::Bonnesen => (0.5 * self.sum_n - self.sum_nu, self.sum_half_n_minus_nu_sq),
        };
        MCReport::from_moments(sum, sum_sq, n, self.measure, target)
    }

    fn region(&self, radius: f64, degenerate: bool) -> RegionTally {
        let n = self.n_samples as f64;
        let measure = |count: u64| self.measure * count as f64 / n;
        let stderr = |count: u64| {
            let p = count as f64 / n;
            self.measure * (p * (1.0 - p) / n).sqrt()
        };
        RegionTally {
            radius,
            measure_neg: measure(self.neg),
            measure_pos4: measure(self.pos4),
            radius_neg: stderr(self.neg),
            radius_pos4: stderr(self.pos4),
            n_samples: self.n_samples,
            degenerate,
        }
    }

    /// Fraction of all samples with `nu = 1` and `n < 2`.
    pub fn overlap_without_crossing_fraction(&self) -> f64 {
        self.overlap_without_crossing as f64 / self.n_samples as f64
    }
}

/// Counts sign changes of the containment indicator around a closed loop.
fn count_alternations(fixed: &TangentPolygon, probes: &[Point], offset: Point) -> u32 {
    let mut hint = 0;
    let first = fixed.contains_from(probes[0] + offset, &mut hint);
    let mut prev = first;
    let mut n = 0;
    for &p in &probes[1..] {
        let inside = fixed.contains_from(p + offset, &mut hint);
        n += (inside != prev) as u32;
        prev = inside;
    }
    n + (prev != first) as u32
}

/// Boundary tolerance for probe containment, so that probes on a shared
/// boundary do not flicker.
fn boundary_polygon(curve: &SupportCurve) -> TangentPolygon {
    let scale = curve.support().iter().fold(0.0f64, |m, h| m.max(h.abs()));
    TangentPolygon::new(curve.support(), curve.grid().units()).with_slack(1e-9 * scale.max(f64::MIN_POSITIVE))
}

/// Fixed body `K` and a moving body `M`; placement `c` moves `M` to `M + c`.
struct Placement {
    fixed: TangentPolygon,
    /// Support of `K + (-M)` at the grid nodes: `c` meets iff `c . u_j <= sum_j`.
    difference_support: Vec<f64>,
    units: Vec<Point>,
    probes: Vec<Point>,
}

impl Placement {
    fn new(fixed: &SupportCurve, moving_support: &[f64], probes: Vec<Point>) -> Self {
        let grid = fixed.grid();
        let difference_support =
            (0..grid.len()).map(|j| fixed.support()[j] + moving_support[grid.antipode(j)]).collect();
        Placement { fixed: boundary_polygon(fixed), difference_support, units: grid.units().to_vec(), probes }
    }

    fn overlaps(&self, c: Point) -> bool {
        self.difference_support.iter().zip(&self.units).all(|(s, &u)| s - c.dot(u) >= 0.0)
    }

    fn classify(&self, c: Point) -> (u32, u32) {
        if !self.overlaps(c) {
            return (0, 0);
        }
        (count_alternations(&self.fixed, &self.probes, c), 1)
    }

    /// Padded bounding box `(min, max)` of the placements that can overlap.
    fn bounding_box(&self, pad_fraction: f64) -> (Point, Point) {
        let poly = TangentPolygon::new(&self.difference_support, &self.units);
        let (mut lo, mut hi) =
            (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for v in poly.vertices() {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let pad = Point::new(hi.x - lo.x, hi.y - lo.y) * (0.5 * pad_fraction);
        (lo - pad, hi + pad)
    }
}

fn gauge_probes(gauge: &Gauge, r: f64, count: usize) -> Result<Vec<Point>> {
    let t = gauge.isoperimetrix(1.0)?;
    Ok(probe_points(&t, count).into_iter().map(|p| p * r).collect())
}

fn probe_points(curve: &SupportCurve, count: usize) -> Vec<Point> {
    let interp = curve.grid().interpolant(curve.support());
    (0..count)
        .map(|i| {
            let theta = TAU * i as f64 / count as f64;
            let (h, dh) = interp.eval_with_derivative(theta);
            let u = Point::unit(theta);
            u * h + u.perp() * dh
        })
        .collect()
}

/// Runs `sample(index)` over all indices in fixed chunks, optionally on
/// several threads, merging chunk tallies in index order.
fn sample_chunks<F>(cfg: &MCConfig, sample: F) -> PlacementTally
where
    F: Fn(u64, &mut PlacementTally) + Sync,
{
    let chunks: Vec<(u64, u64)> =
        (0..cfg.n_samples.div_ceil(CHUNK)).map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(cfg.n_samples))).collect();
    let run_chunk = |&(start, end): &(u64, u64)| {
        let mut t = PlacementTally::default();
        (start..end).for_each(|i| sample(i, &mut t));
        t
    };
    let workers = cfg.workers.max(1).min(chunks.len().max(1));
    let partials: Vec<PlacementTally> = if workers == 1 {
        chunks.iter().map(run_chunk).collect()
    } else {
        let mut partials = vec![PlacementTally::default(); chunks.len()];
        std::thread::scope(|scope| {
            let per = chunks.len().div_ceil(workers);
            for (slots, work) in partials.chunks_mut(per).zip(chunks.chunks(per)) {
                let run_chunk = &run_chunk;
                scope.spawn(move || {
                    for (slot, chunk) in slots.iter_mut().zip(work) {
                        *slot = run_chunk(chunk);
                    }
                });
            }
        });
        partials
    };
    let mut total = PlacementTally::default();
    partials.iter().for_each(|p| total.merge(p));
    total
}

fn uniform_in(lo: Point, hi: Point, a: f64, b: f64) -> Point {
    Point::new(lo.x + a * (hi.x - lo.x), lo.y + b * (hi.y - lo.y))
}

/// `nu` for `K` and `r T + c`.
pub fn overlap(curve: &SupportCurve, gauge: &Gauge, r: f64, c: Point) -> Result<u32> {
    curve.grid().check_same(gauge.grid())?;
    let ht = gauge.support();
    let grid = curve.grid();
    let meets = (0..grid.len()).all(|j| curve.support()[j] + r * ht[grid.antipode(j)] - c.dot(grid.units()[j]) >= 0.0);
    Ok(meets as u32)
}

/// Number of crossings of `boundary K` with `boundary (r T + c)`, from
/// `probes` points on the moving boundary. Always even.
pub fn crossing_count(curve: &SupportCurve, gauge: &Gauge, r: f64, c: Point, probes: usize) -> Result<u32> {
    curve.grid().check_same(gauge.grid())?;
    if probes < 4 || !probes.is_multiple_of(2) {
        return Err(GeomError::InvalidParameter(format!("probe count must be even and >= 4, got {probes}")));
    }
    let fixed = boundary_polygon(curve);
    Ok(count_alternations(&fixed, &gauge_probes(gauge, r, probes)?, c))
}

/// Samples translative placements of `r T` relative to `K`.
pub fn translative_tally(curve: &SupportCurve, gauge: &Gauge, r: f64, cfg: &MCConfig) -> Result<PlacementTally> {
    cfg.validate()?;
    curve.grid().check_same(gauge.grid())?;
    if !(r > 0.0) {
        return Err(GeomError::NonPositiveRadius(r));
    }
    let moving: Vec<f64> = gauge.support().iter().map(|h| r * h).collect();
    let placement = Placement::new(curve, &moving, gauge_probes(gauge, r, cfg.probes)?);
    let (lo, hi) = placement.bounding_box(cfg.pad_fraction);
    let rng = CounterRng::new(cfg.seed);
    let mut tally = sample_chunks(cfg, |i, t| {
        let [a, b] = rng.uniforms(i);
        let (n, nu) = placement.classify(uniform_in(lo, hi, a, b));
        t.add(n, nu);
    });
    tally.measure = (hi.x - lo.x) * (hi.y - lo.y);
    Ok(tally)
}

/// Closed-form value of a translative integral.
pub fn translative_target(curve: &SupportCurve, gauge: &Gauge, r: f64, kind: TranslativeKind) -> Result<f64> {
    let s = minkowski_length(curve, gauge)?;
    Ok(match kind {
        TranslativeKind::Poincare => 4.0 * r * s.length,
        TranslativeKind::Blaschke => s.area + r * s.length + r * r * s.alpha,
        TranslativeKind::Bonnesen => r * s.length - s.area - r * r * s.alpha,
    })
}

pub fn mc_translative(
    curve: &SupportCurve,
    gauge: &Gauge,
    r: f64,
    kind: TranslativeKind,
    cfg: &MCConfig,
) -> Result<MCReport> {
    let tally = translative_tally(curve, gauge, r, cfg)?;
    Ok(tally.report(kind, translative_target(curve, gauge, r, kind)?))
}

/// All three translative reports from one set of samples.
pub fn mc_translative_all(curve: &SupportCurve, gauge: &Gauge, r: f64, cfg: &MCConfig) -> Result<[MCReport; 3]> {
    let tally = translative_tally(curve, gauge, r, cfg)?;
    let kinds = [TranslativeKind::Poincare, TranslativeKind::Blaschke, TranslativeKind::Bonnesen];
    let mut out = [MCReport { estimate: 0.0, std_error: 0.0, n_samples: 0, target: 0.0, z: 0.0 }; 3];
    for (slot, kind) in out.iter_mut().zip(kinds) {
        *slot = tally.report(kind, translative_target(curve, gauge, r, kind)?);
    }
    Ok(out)
}

/// Samples Euclidean rigid placements (translation and rotation) of `moving`.
pub fn kinematic_tally(fixed: &SupportCurve, moving: &SupportCurve, cfg: &MCConfig) -> Result<PlacementTally> {
    cfg.validate()?;
    fixed.grid().check_same(moving.grid())?;
    let reach = |c: &SupportCurve| c.boundary_points().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let extent = (reach(fixed) + reach(moving)) * (1.0 + cfg.pad_fraction);
    let (lo, hi) = (Point::new(-extent, -extent), Point::new(extent, extent));
    let base_probes = probe_points(moving, cfg.probes);
    let fixed_poly = boundary_polygon(fixed);
    let grid = fixed.grid();
    let rng = CounterRng::new(cfg.seed);
    let mut tally = sample_chunks(cfg, |i, t| {
        let [a, b, w] = rng.uniforms(i);
        let phi = TAU * w;
        let c = uniform_in(lo, hi, a, b);
        let rotated = grid.rotate_samples(moving.support(), phi);
        let meets =
            (0..grid.len()).all(|j| fixed.support()[j] + rotated[grid.antipode(j)] - c.dot(grid.units()[j]) >= 0.0);
        if !meets {
            t.add(0, 0);
            return;
        }
        let probes: Vec<Point> = base_probes.iter().map(|p| p.rotate(phi)).collect();
        t.add(count_alternations(&fixed_poly, &probes, c), 1);
    });
    tally.measure = (hi.x - lo.x) * (hi.y - lo.y) * TAU;
    Ok(tally)
}

pub fn mc_euclidean_kinematic(
    fixed: &SupportCurve,
    moving: &SupportCurve,
    kind: KinematicKind,
    cfg: &MCConfig,
) -> Result<MCReport> {
    let tally = kinematic_tally(fixed, moving, cfg)?;
    let (s0, s1) = (fixed.scalars(), moving.scalars());
    Ok(match kind {
        KinematicKind::Poincare => tally.report(TranslativeKind::Poincare, 4.0 * s0.length * s1.length),
        KinematicKind::Blaschke => {
            tally.report(TranslativeKind::Blaschke, TAU * (s0.area + s1.area) + s0.length * s1.length)
        }
    })
}

/// Crofton's formula with lines `x . u(theta) = p`, `theta` uniform on
/// `[0, CROFTON_ANGLE_SPAN)`, `p` uniform on the padded width interval.
pub fn mc_crofton(curve: &SupportCurve, cfg: &MCConfig) -> Result<MCReport> {
    cfg.validate()?;
    let interp = curve.grid().interpolant(curve.support());
    let hmax = curve.support().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = cfg.pad_fraction * hmax.abs();
    let rng = CounterRng::new(cfg.seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..cfg.n_samples {
        let [a, b] = rng.uniforms(i);
        let theta = CROFTON_ANGLE_SPAN * a;
        let (front, back) = (interp.eval(theta), interp.eval(theta + PI));
        let lo = -back - pad;
        let width = front + back + 2.0 * pad;
        let p = lo + b * width;
        let n = if -back < p && p < front { 2.0 } else { 0.0 };
        let f = n * width;
        sum += f;
        sum_sq += f * f;
    }
    let target = 2.0 * curve.scalars().length * CROFTON_ANGLE_SPAN / PI;
    Ok(MCReport::from_moments(sum, sum_sq, cfg.n_samples, CROFTON_ANGLE_SPAN, target))
}

/// Region balance for the averaging argument at `r = rho_in` or
/// `r = rho_out`, with `K` re-based at the annulus center.
pub fn averaging_balance(
    curve: &SupportCurve,
    gauge: &Gauge,
    annulus: &AnnulusResult,
    side: AnnulusSide,
    cfg: &MCConfig,
) -> Result<RegionTally> {
    let r = match side {
        AnnulusSide::Inner => annulus.rho_in,
        AnnulusSide::Outer => annulus.rho_out,
    };
    let based = curve.rebase(annulus.center);
    let tally = translative_tally(&based, gauge, r, cfg)?;
    Ok(tally.region(r, annulus.degenerate))
}

/// One classified placement, for region plots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleClass {
    pub x: f64,
    pub y: f64,
    pub n: u32,
    pub nu: u32,
}

/// The first `limit` translative samples with their classification; same
/// sample stream as [`translative_tally`].
pub fn classify_samples(
    curve: &SupportCurve,
    gauge: &Gauge,
    r: f64,
    cfg: &MCConfig,
    limit: u64,
) -> Result<Vec<SampleClass>> {
    cfg.validate()?;
    curve.grid().check_same(gauge.grid())?;
    let moving: Vec<f64> = gauge.support().iter().map(|h| r * h).collect();
    let placement = Placement::new(curve, &moving, gauge_probes(gauge, r, cfg.probes)?);
    let (lo, hi) = placement.bounding_box(cfg.pad_fraction);
    let rng = CounterRng::new(cfg.seed);
    Ok((0..limit.min(cfg.n_samples))
        .map(|i| {
            let [a, b] = rng.uniforms(i);
            let c = uniform_in(lo, hi, a, b);
            let (n, nu) = placement.classify(c);
            SampleClass { x: c.x, y: c.y, n, nu }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AngleGrid;

    fn setup() -> (AngleGrid, SupportCurve, Gauge) {
        let grid = AngleGrid::new(256).unwrap();
        let c = SupportCurve::circle(&grid, 1.0, Point::ORIGIN).unwrap();
        let g = Gauge::euclidean(&grid);
        (grid, c, g)
    }

    #[test]
    fn overlap_examples() {
        let (_, c, g) = setup();
        assert_eq!(overlap(&c, &g, 1.0, Point::ORIGIN).unwrap(), 1);
        assert_eq!(overlap(&c, &g, 1.0, Point::new(3.0, 0.0)).unwrap(), 0);
        assert_eq!(overlap(&c, &g, 1.0, Point::new(2.0, 0.0)).unwrap(), 1);
    }

    #[test]
    fn crossing_examples() {
        let (_, c, g) = setup();
        assert_eq!(crossing_count(&c, &g, 1.0, Point::new(1.0, 0.0), 512).unwrap(), 2);
        assert_eq!(crossing_count(&c, &g, 1.0, Point::ORIGIN, 512).unwrap(), 0);
        assert!(crossing_count(&c, &g, 1.0, Point::ORIGIN, 511).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let (grid, _, _) = setup();
        let k = SupportCurve::random_convex(&grid, 5, 5, 0.3).unwrap();
        let g = Gauge::random(&grid, 5, 4, 0.4).unwrap();
        let base = MCConfig { n_samples: 20_000, seed: 9, ..Default::default() };
        let one = translative_tally(&k, &g, 0.8, &base).unwrap();
        let three = translative_tally(&k, &g, 0.8, &MCConfig { workers: 3, ..base }).unwrap();
        assert_eq!(one, three);
        let again = translative_tally(&k, &g, 0.8, &base).unwrap();
        assert_eq!(one, again);
    }

    #[test]
    fn classification_matches_tally_stream() {
        let (_, c, g) = setup();
        let cfg = MCConfig { n_samples: 500, seed: 3, ..Default::default() };
        let samples = classify_samples(&c, &g, 0.5, &cfg, 500).unwrap();
        let tally = translative_tally(&c, &g, 0.5, &cfg).unwrap();
        let nu: u32 = samples.iter().map(|s| s.nu).sum();
        assert_eq!(nu as f64, tally.sum_nu);
        assert!(samples.iter().all(|s| s.n % 2 == 0));
    }

    #[test]
    fn crofton_padding_only_adds_noise() {
        let grid = AngleGrid::new(256).unwrap();
        let e = SupportCurve::ellipse(&grid, 2.0, 1.0).unwrap();
        let a = mc_crofton(&e, &MCConfig { n_samples: 50_000, seed: 1, ..Default::default() }).unwrap();
        let b =
            mc_crofton(&e, &MCConfig { n_samples: 50_000, seed: 1, pad_fraction: 0.02, ..Default::default() }).unwrap();
        assert!((a.target - 19.376_896_441_095_35).abs() < 1e-8);
        assert!(a.z < 4.0 && b.z < 4.0);
        assert!((a.estimate - b.estimate).abs() < 4.0 * a.std_error.hypot(b.std_error));
    }
}
