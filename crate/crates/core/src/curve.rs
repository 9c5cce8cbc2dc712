//! Convex curves stored as support-function samples.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;
use crate::point::Point;

/// Relative threshold on `h + h''` below which a curve is rejected as non-convex.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// A smooth strictly convex closed curve given by its support function
/// `h(theta_j)` on a uniform grid. Derivatives are computed once at
/// construction.
#[derive(Debug, Clone)]
pub struct SupportCurve {
    grid: AngleGrid,
    h: Vec<f64>,
    dh: Vec<f64>,
    d2h: Vec<f64>,
    label: Option<String>,
    offset: Point,
}

/// Perimeter, area and curvature extremes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveScalars {
    pub length: f64,
    pub area: f64,
    pub k_min: f64,
    pub k_max: f64,
}

impl CurveScalars {
    pub fn isoperimetric_ratio(&self) -> f64 {
        self.length * self.length / self.area
    }

    /// `L^2 - 4 pi A`.
    pub fn deficit(&self) -> f64 {
        self.length * self.length - 4.0 * PI * self.area
    }
}

/// Returns the first node where `r = h + h''` falls below `tol * max|h|`.
pub(crate) fn check_convexity(grid: &AngleGrid, h: &[f64], radius: &[f64]) -> Result<()> {
    let scale = h.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let floor = CONVEXITY_TOL * scale;
    match radius.iter().position(|&r| !(r > floor)) {
        Some(index) => Err(GeomError::ConvexityViolation { index, theta: grid.theta(index), value: radius[index] }),
        None => Ok(()),
    }
}

impl SupportCurve {
    /// Builds a curve from raw samples, rejecting non-convex data.
    pub fn from_samples(grid: AngleGrid, h: Vec<f64>) -> Result<Self> {
        grid.check_len(&h)?;
        if let Some(bad) = h.iter().position(|x| !x.is_finite()) {
            return Err(GeomError::InvalidParameter(format!("non-finite support sample at node {bad}")));
        }
        let (dh, d2h) = grid.derivatives(&h);
        let radius: Vec<f64> = h.iter().zip(&d2h).map(|(a, b)| a + b).collect();
        check_convexity(&grid, &h, &radius)?;
        Ok(SupportCurve { grid, h, dh, d2h, label: None, offset: Point::ORIGIN })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Circle of `radius` centered at `center`: `h = R + c . u`.
    pub fn circle(grid: &AngleGrid, radius: f64, center: Point) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::NonPositiveRadius(radius));
        }
        let h = grid.units().iter().map(|&u| radius + center.dot(u)).collect();
        Ok(Self::from_samples(grid.clone(), h)?.with_label(format!("circle(r={radius})")))
    }

    /// Axis-aligned ellipse centered at the origin.
    pub fn ellipse(grid: &AngleGrid, a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0 && a >= b) {
            return Err(GeomError::InvalidSemiAxes { a, b });
        }
        let h = grid.units().iter().map(|u| (a * a * u.x * u.x + b * b * u.y * u.y).sqrt()).collect();
        Ok(Self::from_samples(grid.clone(), h)?.with_label(format!("ellipse(a={a}, b={b})")))
    }

    /// Seeded random smooth convex curve.
    ///
    /// `h = 1 + sum_{m=2..M} (a_m cos m t + b_m sin m t)`. The perturbation is
    /// scaled so that `min (h + h'')` equals `margin`. Harmonic 1 is a pure
    /// translation and is never drawn.
    pub fn random_convex(grid: &AngleGrid, seed: u64, max_harmonic: usize, margin: f64) -> Result<Self> {
        if max_harmonic < 2 {
            return Err(GeomError::InvalidParameter(format!("max_harmonic must be >= 2, got {max_harmonic}")));
        }
        if !(margin > 0.0 && margin < 1.0) {
            return Err(GeomError::InvalidParameter(format!("margin must lie in (0, 1), got {margin}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<(usize, f64, f64)> = (2..=max_harmonic)
            .map(|m| {
                let w = 1.0 / m as f64;
                (m, w * rng.random_range(-1.0..1.0), w * rng.random_range(-1.0..1.0))
            })
            .collect();
        let h = perturbed_unit(grid, &coeffs, margin);
        Ok(Self::from_samples(grid.clone(), h)?.with_label(format!("random(seed={seed}, M={max_harmonic})")))
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Accumulated translation applied through [`SupportCurve::translate`].
    pub fn offset(&self) -> Point {
        self.offset
    }

    pub fn support(&self) -> &[f64] {
        &self.h
    }

    /// Spectral `(h', h'')`.
    pub fn derivatives(&self) -> (&[f64], &[f64]) {
        (&self.dh, &self.d2h)
    }

    /// Radius of curvature `1/k = h + h''` at each node.
    pub fn radius_of_curvature(&self) -> Vec<f64> {
        self.h.iter().zip(&self.d2h).map(|(a, b)| a + b).collect()
    }

    pub fn curvature(&self) -> Vec<f64> {
        self.radius_of_curvature().into_iter().map(|r| 1.0 / r).collect()
    }

    /// Smallest `h + h''` over the grid.
    pub fn min_radius_of_curvature(&self) -> f64 {
        self.h.iter().zip(&self.d2h).map(|(a, b)| a + b).fold(f64::INFINITY, f64::min)
    }

    /// Cauchy length `sum h dtheta`, area `1/2 sum (h^2 - h'^2) dtheta`.
    pub fn scalars(&self) -> CurveScalars {
        let length = self.grid.integrate(&self.h);
        let area = 0.5 * self.h.iter().zip(&self.dh).map(|(h, d)| h * h - d * d).sum::<f64>() * self.grid.dtheta();
        let (k_min, k_max) =
            self.curvature().into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(k), hi.max(k)));
        CurveScalars { length, area, k_min, k_max }
    }

    /// Area from Green's theorem, `1/2 int h ds = 1/2 sum h (h + h'') dtheta`.
    pub fn area_from_arclength(&self) -> f64 {
        0.5 * self.h.iter().zip(&self.d2h).map(|(h, d)| h * (h + d)).sum::<f64>() * self.grid.dtheta()
    }

    /// `int h k ds`, evaluated through the curvature samples.
    pub fn integral_h_curvature(&self) -> f64 {
        let r = self.radius_of_curvature();
        let total: f64 = self.h.iter().zip(&r).map(|(h, r)| h * (1.0 / r) * r).sum();
        total * self.grid.dtheta()
    }

    /// Support value off the grid by trigonometric interpolation.
    pub fn eval(&self, theta: f64) -> f64 {
        self.grid.interpolant(&self.h).eval(theta)
    }

    /// Boundary point with outward normal `u(theta_j)`.
    pub fn boundary_point_at(&self, j: usize) -> Point {
        let u = self.grid.units()[j];
        u * self.h[j] + u.perp() * self.dh[j]
    }

    /// Boundary point `X = h u + h' u_perp` with outward normal `u(theta)`.
    /// Off-grid angles use the trigonometric interpolant.
    pub fn boundary_point(&self, theta: f64) -> Point {
        let pos = theta.rem_euclid(std::f64::consts::TAU) / self.grid.dtheta();
        let j = pos.round();
        if (pos - j).abs() < 1e-9 {
            return self.boundary_point_at(j as usize % self.len());
        }
        let (h, dh) = self.grid.interpolant(&self.h).eval_with_derivative(theta);
        let u = Point::unit(theta);
        u * h + u.perp() * dh
    }

    pub fn boundary_points(&self) -> Vec<Point> {
        (0..self.len()).map(|j| self.boundary_point_at(j)).collect()
    }

    /// Moves the curve by `v`: `h -> h + v . u`.
    pub fn translate(&self, v: Point) -> SupportCurve {
        let units = self.grid.units();
        let h = self.h.iter().zip(units).map(|(h, &u)| h + v.dot(u)).collect();
        let dh = self.dh.iter().zip(units).map(|(d, &u)| d + v.dot(u.perp())).collect();
        let d2h = self.d2h.iter().zip(units).map(|(d, &u)| d - v.dot(u)).collect();
        SupportCurve { grid: self.grid.clone(), h, dh, d2h, label: self.label.clone(), offset: self.offset + v }
    }

    /// Support function based at `origin`: the curve translated by `-origin`.
    pub fn rebase(&self, origin: Point) -> SupportCurve {
        self.translate(-origin)
    }

    /// Homothety about the origin.
    pub fn scale(&self, factor: f64) -> Result<SupportCurve> {
        if !(factor > 0.0) {
            return Err(GeomError::InvalidParameter(format!("scale factor must be positive, got {factor}")));
        }
        let scaled = |v: &[f64]| v.iter().map(|x| x * factor).collect::<Vec<_>>();
        Ok(SupportCurve {
            grid: self.grid.clone(),
            h: scaled(&self.h),
            dh: scaled(&self.dh),
            d2h: scaled(&self.d2h),
            label: self.label.clone(),
            offset: self.offset * factor,
        })
    }

    /// The curve rotated by `phi` about the origin: `h(theta - phi)`.
    pub fn rotate(&self, phi: f64) -> Result<SupportCurve> {
        let h = self.grid.rotate_samples(&self.h, phi);
        Ok(Self::from_samples(self.grid.clone(), h)?.with_label_opt(self.label.clone()))
    }

    fn with_label_opt(mut self, label: Option<String>) -> Self {
        self.label = label;
        self
    }

    /// Signed support gap `min_j (h_j - p . u_j)`; non-negative iff `p` is
    /// inside the circumscribed grid polygon.
    pub fn support_gap(&self, p: Point) -> f64 {
        self.h.iter().zip(self.grid.units()).map(|(h, &u)| h - p.dot(u)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.support_gap(p) >= 0.0
    }
}

/// `1 + s * sum (a_m cos m t + b_m sin m t)` with `s` chosen so that the
/// minimum radius of curvature over the grid equals `margin`.
pub(crate) fn perturbed_unit(grid: &AngleGrid, coeffs: &[(usize, f64, f64)], margin: f64) -> Vec<f64> {
    let eval = |t: f64, weight: fn(usize) -> f64| -> f64 {
        coeffs
            .iter()
            .map(|&(m, a, b)| {
                let (s, c) = (m as f64 * t).sin_cos();
                weight(m) * (a * c + b * s)
            })
            .sum()
    };
    let thetas: Vec<f64> = grid.thetas().collect();
    let pert: Vec<f64> = thetas.iter().map(|&t| eval(t, |_| 1.0)).collect();
    let radius_pert: Vec<f64> = thetas.iter().map(|&t| eval(t, |m| 1.0 - (m * m) as f64)).collect();
    let worst = radius_pert.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = if worst < 0.0 { (1.0 - margin) / -worst } else { 0.0 };
    pert.iter().map(|p| 1.0 + scale * p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn grid() -> AngleGrid {
        AngleGrid::new(256).unwrap()
    }

    #[test]
    fn circle_scalars() {
        let g = grid();
        let s = SupportCurve::circle(&g, 1.0, Point::ORIGIN).unwrap().scalars();
        assert!((s.length - TAU).abs() < 1e-12);
        assert!((s.area - PI).abs() < 1e-12);
        let s2 = SupportCurve::circle(&g, 2.0, Point::ORIGIN).unwrap().scalars();
        assert!((s2.length - 4.0 * PI).abs() < 1e-12);
        assert!((s2.area - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn offset_circle_support_values() {
        let g = grid();
        let c = SupportCurve::circle(&g, 1.0, Point::new(3.0, 0.0)).unwrap();
        assert!((c.support()[0] - 4.0).abs() < 1e-14);
        assert!((c.support()[128] + 2.0).abs() < 1e-12);
        let s = c.scalars();
        assert!((s.length - TAU).abs() < 1e-12);
        assert!((s.area - PI).abs() < 1e-11);
    }

    #[test]
    fn constructor_errors() {
        let g = grid();
        assert!(matches!(SupportCurve::circle(&g, 0.0, Point::ORIGIN), Err(GeomError::NonPositiveRadius(_))));
        assert!(matches!(SupportCurve::ellipse(&g, 1.0, 2.0), Err(GeomError::InvalidSemiAxes { .. })));
        assert!(matches!(SupportCurve::ellipse(&g, 1.0, -1.0), Err(GeomError::InvalidSemiAxes { .. })));
        assert!(SupportCurve::random_convex(&g, 1, 1, 0.2).is_err());
        assert!(SupportCurve::from_samples(g.clone(), vec![1.0; 10]).is_err());
    }

    #[test]
    fn non_convex_samples_rejected() {
        let g = grid();
        let h: Vec<f64> = g.thetas().map(|t| 1.0 + 0.2 * (3.0 * t).cos()).collect();
        let err = SupportCurve::from_samples(g, h).unwrap_err();
        assert!(matches!(err, GeomError::ConvexityViolation { .. }));
        assert!(err.to_string().contains("convexity violation"));
    }

    #[test]
    fn degenerate_ellipse_is_circle() {
        let g = grid();
        let e = SupportCurve::ellipse(&g, 1.0, 1.0).unwrap();
        let c = SupportCurve::circle(&g, 1.0, Point::ORIGIN).unwrap();
        for (a, b) in e.support().iter().zip(c.support()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn ellipse_derivative_matches_analytic() {
        let g = grid();
        let (a, b) = (2.0_f64, 1.0_f64);
        let e = SupportCurve::ellipse(&g, a, b).unwrap();
        let (_, d2) = e.derivatives();
        let worst = g
            .thetas()
            .zip(d2)
            .map(|(t, d)| {
                let q = a * a * t.cos().powi(2) + b * b * t.sin().powi(2);
                let dq = (b * b - a * a) * (2.0 * t).sin();
                let d2q = 2.0 * (b * b - a * a) * (2.0 * t).cos();
                let exact = d2q / (2.0 * q.sqrt()) - dq * dq / (4.0 * q.powf(1.5));
                (d - exact).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "max error {worst:e}");
    }

    #[test]
    fn boundary_points() {
        let g = grid();
        let c = SupportCurve::circle(&g, 1.0, Point::ORIGIN).unwrap();
        let p = c.boundary_point(0.0);
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        let e = SupportCurve::ellipse(&g, 2.0, 1.0).unwrap();
        let p = e.boundary_point(0.0);
        assert!((p.x - 2.0).abs() < 1e-14 && p.y.abs() < 1e-12);
        let p = e.boundary_point(PI / 2.0);
        assert!(p.x.abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12);
        // off-grid: X = (a^2 cos t, b^2 sin t) / h(t)
        let t = 0.3;
        let p = e.boundary_point(t);
        let h = (4.0 * t.cos().powi(2) + t.sin().powi(2)).sqrt();
        assert!((p.x - 4.0 * t.cos() / h).abs() < 1e-9);
        assert!((p.y - t.sin() / h).abs() < 1e-9);
    }

    #[test]
    fn translation_matches_constructor_and_keeps_scalars() {
        let g = grid();
        let moved = SupportCurve::circle(&g, 1.0, Point::ORIGIN).unwrap().translate(Point::new(3.0, 0.0));
        let direct = SupportCurve::circle(&g, 1.0, Point::new(3.0, 0.0)).unwrap();
        for (a, b) in moved.support().iter().zip(direct.support()) {
            assert!((a - b).abs() < 1e-14);
        }
        let e = SupportCurve::ellipse(&g, 2.0, 1.0).unwrap();
        let same = e.translate(Point::ORIGIN);
        assert_eq!(same.support(), e.support());
        let s0 = e.scalars();
        let s1 = e.translate(Point::new(0.3, -0.2)).scalars();
        assert!((s0.length - s1.length).abs() <= 1e-12 * s0.length);
        assert!((s0.area - s1.area).abs() <= 1e-12 * s0.area);
    }

    #[test]
    fn containment() {
        let g = grid();
        let c = SupportCurve::circle(&g, 1.0, Point::ORIGIN).unwrap();
        assert!(c.contains_point(Point::ORIGIN));
        assert!(!c.contains_point(Point::new(2.0, 0.0)));
        let e = SupportCurve::ellipse(&g, 2.0, 1.0).unwrap();
        assert!(e.contains_point(Point::new(1.9, 0.0)));
        assert!(!e.contains_point(Point::new(0.0, 1.1)));
    }

    #[test]
    fn random_curve_margin_and_determinism() {
        let g = grid();
        let a = SupportCurve::random_convex(&g, 7, 6, 0.2).unwrap();
        let b = SupportCurve::random_convex(&g, 7, 6, 0.2).unwrap();
        assert_eq!(a.support(), b.support());
        assert!(a.min_radius_of_curvature() >= 0.2 - 1e-9);
    }

    #[test]
    fn h_times_curvature_integrates_to_length() {
        let g = grid();
        let c = SupportCurve::random_convex(&g, 3, 8, 0.3).unwrap();
        let s = c.scalars();
        assert!((c.integral_h_curvature() - s.length).abs() <= 1e-12 * s.length);
    }
}
