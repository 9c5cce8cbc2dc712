//! Bonnesen functionals and positive-center audits.

use serde::{Deserialize, Serialize};

use crate::curve::SupportCurve;
use crate::error::{GeomError, Result};
use crate::gauge::{minkowski_length, Gauge, MinkowskiScalars};
use crate::point::Point;

/// Relative tolerance (times area) for calling a center positive.
pub const POSITIVE_CENTER_TOL: f64 = 1e-9;

/// Deficits above `-DEFICIT_ROUNDING * L^2` are treated as zero when solving for roots.
pub const DEFICIT_ROUNDING: f64 = 1e-12;

/// `B(r) = r L - A - alpha r^2`. The Euclidean functional is `alpha = pi`.
pub fn bonnesen_value(r: f64, length: f64, area: f64, alpha: f64) -> f64 {
    r * length - area - alpha * r * r
}

pub fn bonnesen(r: f64, scalars: &MinkowskiScalars) -> f64 {
    bonnesen_value(r, scalars.length, scalars.area, scalars.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BonnesenReport {
    /// Evaluation radius; [`roots_and_deficit`] uses the vertex `L / 2 alpha`.
    pub r: f64,
    pub value: f64,
    /// `(r_-, r_+)`, present iff the deficit is non-negative.
    pub roots: Option<(f64, f64)>,
    pub deficit: f64,
}

impl BonnesenReport {
    pub fn at(r: f64, scalars: &MinkowskiScalars) -> Self {
        let deficit = scalars.deficit();
        // a deficit within rounding of zero is a double root
        let floor = -DEFICIT_ROUNDING * scalars.length * scalars.length;
        let roots = (deficit >= floor).then(|| {
            let d = deficit.max(0.0).sqrt();
            let lo = (scalars.length - d) / (2.0 * scalars.alpha);
            // product of roots is A / alpha; avoids cancellation in r_-
            let hi = (scalars.length + d) / (2.0 * scalars.alpha);
            let lo = if lo > 0.0 && hi > 0.0 { scalars.area / (scalars.alpha * hi) } else { lo };
            (lo.min(hi), hi)
        });
        BonnesenReport { r, value: bonnesen(r, scalars), roots, deficit }
    }
}

/// Roots `r_{+-} = (L +- sqrt(L^2 - 4 alpha A)) / 2 alpha` and the deficit.
/// A negative deficit is reported, never raised.
pub fn roots_and_deficit(scalars: &MinkowskiScalars) -> BonnesenReport {
    BonnesenReport::at(scalars.length / (2.0 * scalars.alpha), scalars)
}

/// `deficit - alpha^2 (rho_out - rho_in)^2`; non-negative by the strong
/// Bonnesen inequality.
pub fn strong_bonnesen_margin(scalars: &MinkowskiScalars, rho_in: f64, rho_out: f64) -> f64 {
    let w = rho_out - rho_in;
    scalars.deficit() - scalars.alpha * scalars.alpha * w * w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositiveCenterAudit {
    pub origin: Point,
    /// `min_j B((h / h~)(theta_j))` with `h` based at `origin`.
    pub min_value: f64,
    pub argmin_theta: f64,
    /// `int (h / h~)^2 dsigma`.
    pub integral: f64,
    /// `L A / alpha`.
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl PositiveCenterAudit {
    /// `integral <= bound (1 + 1e-9)`.
    pub fn integral_within_bound(&self) -> bool {
        self.integral <= self.bound * (1.0 + 1e-9)
    }
}

/// One boundary row of the audit: `(theta, h, h~, h/h~, B(h/h~))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub theta: f64,
    pub h: f64,
    pub h_tilde: f64,
    pub relative: f64,
    pub bonnesen: f64,
}

/// Checks whether `origin` is a (relative) positive center of `curve`.
pub fn positive_center_audit(curve: &SupportCurve, gauge: &Gauge, origin: Point) -> Result<PositiveCenterAudit> {
    curve.grid().check_same(gauge.grid())?;
    if !(curve.support_gap(origin) > 0.0) {
        return Err(GeomError::OriginOutside { x: origin.x, y: origin.y });
    }
    let based = curve.rebase(origin);
    let scalars = minkowski_length(&based, gauge)?;
    let radius = based.radius_of_curvature();
    let ht = gauge.support();
    let mut min_value = f64::INFINITY;
    let mut argmin = 0;
    let mut integral = 0.0;
    for (j, (&h, &r)) in based.support().iter().zip(&radius).enumerate() {
        let rel = h / ht[j];
        let b = bonnesen(rel, &scalars);
        if b < min_value {
            min_value = b;
            argmin = j;
        }
        // dsigma = h~ ds = h~ (h + h'') dtheta
        integral += rel * rel * ht[j] * r;
    }
    integral *= curve.grid().dtheta();
    let tolerance = POSITIVE_CENTER_TOL * scalars.area;
    Ok(PositiveCenterAudit {
        origin,
        min_value,
        argmin_theta: curve.grid().theta(argmin),
        integral,
        bound: scalars.length * scalars.area / scalars.alpha,
        tolerance,
        pass: min_value >= -tolerance,
    })
}

/// Per-node audit rows for plotting the functional along the boundary.
pub fn audit_rows(curve: &SupportCurve, gauge: &Gauge, origin: Point) -> Result<Vec<AuditRow>> {
    curve.grid().check_same(gauge.grid())?;
    let based = curve.rebase(origin);
    let scalars = minkowski_length(&based, gauge)?;
    Ok(based
        .support()
        .iter()
        .zip(gauge.support())
        .enumerate()
        .map(|(j, (&h, &ht))| AuditRow {
            theta: curve.grid().theta(j),
            h,
            h_tilde: ht,
            relative: h / ht,
            bonnesen: bonnesen(h / ht, &scalars),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AngleGrid;
    use std::f64::consts::PI;

    const ELLIPSE_LENGTH: f64 = 9.688_448_220_547_676;

    fn euclid(length: f64, area: f64) -> MinkowskiScalars {
        MinkowskiScalars { length, length_by_arc: length, area, alpha: PI, ratio: length * length / area }
    }

    #[test]
    fn circle_equality_case() {
        let r = 1.7;
        let s = euclid(2.0 * PI * r, PI * r * r);
        assert!(bonnesen(r, &s).abs() < 1e-12);
        let rep = roots_and_deficit(&s);
        assert!(rep.deficit.abs() < 1e-10);
        let (lo, hi) = rep.roots.unwrap();
        assert!((lo - r).abs() < 1e-5 && (hi - r).abs() < 1e-5);
    }

    #[test]
    fn ellipse_values() {
        let s = euclid(ELLIPSE_LENGTH, 2.0 * PI);
        assert!((bonnesen(1.0, &s) - 0.263_670_259_778_296).abs() < 1e-12);
        assert!((bonnesen(2.0, &s) - 0.527_340_519_556_593).abs() < 1e-12);
        let rep = roots_and_deficit(&s);
        assert!((rep.deficit - 14.909_193_713_518_564).abs() < 1e-10);
        let (lo, hi) = rep.roots.unwrap();
        assert!((lo - 0.927_428_593_401_811).abs() < 1e-12);
        assert!((hi - 2.156_500_256_978_269).abs() < 1e-12);
    }

    #[test]
    fn negative_deficit_reports_no_roots() {
        let s = euclid(1.0, 1.0);
        let rep = roots_and_deficit(&s);
        assert!(rep.deficit < 0.0);
        assert!(rep.roots.is_none());
    }

    #[test]
    fn audit_circle_center() {
        let grid = AngleGrid::new(256).unwrap();
        let c = SupportCurve::circle(&grid, 1.0, Point::new(0.5, -0.25)).unwrap();
        let a = positive_center_audit(&c, &Gauge::euclidean(&grid), Point::new(0.5, -0.25)).unwrap();
        assert!(a.min_value.abs() < 1e-12);
        assert!((a.integral - 2.0 * PI).abs() < 1e-12);
        assert!((a.bound - 2.0 * PI).abs() < 1e-12);
        assert!(a.pass);
    }

    #[test]
    fn audit_ellipse_center_and_off_center() {
        let grid = AngleGrid::new(256).unwrap();
        let e = SupportCurve::ellipse(&grid, 2.0, 1.0).unwrap();
        let eu = Gauge::euclidean(&grid);
        let a = positive_center_audit(&e, &eu, Point::ORIGIN).unwrap();
        // h ranges over [1, 2] and B is concave, so the minimum sits at an end
        let s = euclid(ELLIPSE_LENGTH, 2.0 * PI);
        assert!((a.min_value - bonnesen(1.0, &s).min(bonnesen(2.0, &s))).abs() < 1e-8);
        assert!(a.pass && a.integral_within_bound());

        let off = positive_center_audit(&e, &eu, Point::new(1.5, 0.0)).unwrap();
        assert!(off.min_value < 0.0);
        assert!(!off.pass);

        assert!(matches!(positive_center_audit(&e, &eu, Point::new(3.0, 0.0)), Err(GeomError::OriginOutside { .. })));
    }

    #[test]
    fn audit_rows_match_audit_minimum() {
        let grid = AngleGrid::new(128).unwrap();
        let k = SupportCurve::random_convex(&grid, 4, 6, 0.3).unwrap();
        let g = Gauge::random(&grid, 4, 4, 0.4).unwrap();
        let a = positive_center_audit(&k, &g, Point::ORIGIN).unwrap();
        let rows = audit_rows(&k, &g, Point::ORIGIN).unwrap();
        let m = rows.iter().map(|r| r.bonnesen).fold(f64::INFINITY, f64::min);
        assert_eq!(m, a.min_value);
    }
}
