//! Inradius, outradius and the minimal-width annulus of a convex curve
//! relative to a gauge.
//!
//! With the curve based at a candidate center `c`, the relative support
//! function is `g_j(c) = (h_j - c . u_j) / h~_j`, affine in `c`. The inradius
//! maximizes `min_j g_j`, the outradius minimizes `max_j g_j`, and the
//! minimal annulus minimizes the range `max_j g_j - min_j g_j`. Each is a
//! linear program in the center and one or two levels.

use serde::{Deserialize, Serialize};

use crate::curve::SupportCurve;
use crate::error::Result;
use crate::gauge::Gauge;
use crate::lp::LinearProgram;
use crate::point::Point;

/// Relative width below which an annulus is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactKind {
    Inner,
    Outer,
    /// Degenerate annulus: the node touches both circles.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub theta: f64,
    #[serde(rename = "type")]
    pub kind: ContactKind,
    #[serde(skip)]
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusResult {
    pub center: Point,
    pub rho_in: f64,
    pub rho_out: f64,
    pub contacts: Vec<Contact>,
    pub objective: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiiResult {
    pub r_in: f64,
    pub r_out: f64,
    pub in_center: Point,
    pub out_center: Point,
}

/// `g_j(c) = (h_j - c . u_j) / h~_j`.
pub fn relative_support(curve: &SupportCurve, gauge: &Gauge, center: Point) -> Result<Vec<f64>> {
    curve.grid().check_same(gauge.grid())?;
    Ok(curve
        .support()
        .iter()
        .zip(gauge.support())
        .zip(curve.grid().units())
        .map(|((h, ht), &u)| (h - center.dot(u)) / ht)
        .collect())
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Affine data `(a_j, w_j)` with `g_j(c) = a_j - w_j . c`.
fn affine_terms(curve: &SupportCurve, gauge: &Gauge) -> Result<Vec<(f64, Point)>> {
    curve.grid().check_same(gauge.grid())?;
    Ok(curve
        .support()
        .iter()
        .zip(gauge.support())
        .zip(curve.grid().units())
        .map(|((h, ht), &u)| (h / ht, u * (1.0 / ht)))
        .collect())
}

/// Solves an LP whose first two variables are the center and returns the
/// midpoint of the optimal face's extent in those coordinates.
///
/// On the grid the max-min problems are often flat along a short segment
/// (width `O(dtheta)`) around the continuous optimum; the midpoint is the
/// deterministic and symmetry-respecting choice. Falls back to the simplex
/// vertex when the midpoint is not optimal.
fn central_optimum(lp: &LinearProgram) -> Result<Point> {
    let sol = lp.solve()?;
    let level = sol.value + FACE_SLACK * (1.0 + sol.value.abs());
    let mut face = lp.clone();
    face.constrain(lp.objective().to_vec(), level);
    let vertex = Point::new(sol.x[0], sol.x[1]);
    let extent = |axis: usize, sign: f64| -> Option<f64> {
        let mut dir = vec![0.0; lp.dim()];
        dir[axis] = sign;
        face.with_objective(dir).solve().ok().map(|s| s.x[axis])
    };
    let mut mid = [0.0; 2];
    for (axis, m) in mid.iter_mut().enumerate() {
        match (extent(axis, 1.0), extent(axis, -1.0)) {
            (Some(lo), Some(hi)) => *m = 0.5 * (lo + hi),
            _ => return Ok(vertex),
        }
    }
    let candidate = Point::new(mid[0], mid[1]);
    let mut probe = face.clone();
    let pinned = vec![1.0, 0.0].into_iter().chain(std::iter::repeat(0.0)).take(lp.dim()).collect::<Vec<_>>();
    probe.constrain(pinned.clone(), candidate.x);
    probe.constrain(pinned.iter().map(|v| -v).collect(), -candidate.x);
    let pinned_y: Vec<f64> = (0..lp.dim()).map(|i| if i == 1 { 1.0 } else { 0.0 }).collect();
    probe.constrain(pinned_y.clone(), candidate.y);
    probe.constrain(pinned_y.iter().map(|v| -v).collect(), -candidate.y);
    match probe.solve() {
        Ok(_) => Ok(candidate),
        Err(_) => Ok(vertex),
    }
}

/// Slack on the optimal value when describing the optimal face.
const FACE_SLACK: f64 = 1e-11;

/// Largest `r` with `r T + c` inside the curve, and its center.
pub fn inradius(curve: &SupportCurve, gauge: &Gauge) -> Result<(f64, Point)> {
    let terms = affine_terms(curve, gauge)?;
    // max s  s.t.  w_j . c + s <= a_j
    let mut lp = LinearProgram::new(vec![0.0, 0.0, -1.0]);
    for &(a, w) in &terms {
        lp.constrain(vec![w.x, w.y, 1.0], a);
    }
    let center = central_optimum(&lp)?;
    let (lo, _) = min_max(&relative_support(curve, gauge, center)?);
    Ok((lo, center))
}

/// Smallest `r` with `r T + c` enclosing the curve, and its center.
pub fn outradius(curve: &SupportCurve, gauge: &Gauge) -> Result<(f64, Point)> {
    let terms = affine_terms(curve, gauge)?;
    // min t  s.t.  -w_j . c - t <= -a_j
    let mut lp = LinearProgram::new(vec![0.0, 0.0, 1.0]);
    for &(a, w) in &terms {
        lp.constrain(vec![-w.x, -w.y, -1.0], -a);
    }
    let center = central_optimum(&lp)?;
    let (_, hi) = min_max(&relative_support(curve, gauge, center)?);
    Ok((hi, center))
}

pub fn radii(curve: &SupportCurve, gauge: &Gauge) -> Result<RadiiResult> {
    let (r_in, in_center) = inradius(curve, gauge)?;
    let (r_out, out_center) = outradius(curve, gauge)?;
    Ok(RadiiResult { r_in, r_out, in_center, out_center })
}

/// Minimal-width annulus `rho_in T + c subset K subset rho_out T + c`.
pub fn minimal_annulus(curve: &SupportCurve, gauge: &Gauge) -> Result<AnnulusResult> {
    let terms = affine_terms(curve, gauge)?;
    // min t - s  s.t.  w_j . c + s <= a_j,  -w_j . c - t <= -a_j
    let mut lp = LinearProgram::new(vec![0.0, 0.0, -1.0, 1.0]);
    for &(a, w) in &terms {
        lp.constrain(vec![w.x, w.y, 1.0, 0.0], a);
        lp.constrain(vec![-w.x, -w.y, 0.0, -1.0], -a);
    }
    let center = central_optimum(&lp)?;
    AnnulusResult::at_center(curve, gauge, center)
}

impl AnnulusResult {
    /// The annulus about a prescribed center: radii are the extremes of the
    /// relative support there, contacts the nodes attaining them.
    pub fn at_center(curve: &SupportCurve, gauge: &Gauge, center: Point) -> Result<AnnulusResult> {
        let g = relative_support(curve, gauge, center)?;
        let (rho_in, rho_out) = min_max(&g);
        let width = rho_out - rho_in;
        let degenerate = width < DEGENERACY_TOL * rho_out.abs();
        let grid = curve.grid();
        let contacts = if degenerate {
            (0..g.len()).map(|j| Contact { theta: grid.theta(j), kind: ContactKind::Both, index: j }).collect()
        } else {
            let tol = (1e-6 * width).max(1e-9);
            g.iter()
                .enumerate()
                .filter_map(|(j, &v)| {
                    let kind = if v <= rho_in + tol {
                        ContactKind::Inner
                    } else if v >= rho_out - tol {
                        ContactKind::Outer
                    } else {
                        return None;
                    };
                    Some(Contact { theta: grid.theta(j), kind, index: j })
                })
                .collect()
        };
        Ok(AnnulusResult { center, rho_in, rho_out, contacts, objective: width, degenerate })
    }

    /// Contact runs after merging grid-adjacent nodes of the same kind.
    pub fn contact_clusters(&self, n: usize) -> Vec<ContactKind> {
        let mut clusters: Vec<(usize, ContactKind)> = Vec::new();
        for c in &self.contacts {
            match clusters.last_mut() {
                Some((last, kind)) if *kind == c.kind && c.index == *last + 1 => *last = c.index,
                _ => clusters.push((c.index, c.kind)),
            }
        }
        // wrap-around: first and last runs may be one cluster
        if clusters.len() > 1 {
            let first = self.contacts[0];
            let (last_idx, last_kind) = clusters[clusters.len() - 1];
            if first.index == 0 && last_idx == n - 1 && last_kind == first.kind {
                clusters.pop();
            }
        }
        clusters.into_iter().map(|(_, k)| k).collect()
    }
}

/// True iff the contacts, walked by angle, alternate inner/outer with at
/// least two of each. Degenerate annuli pass vacuously.
pub fn certify_alternation(result: &AnnulusResult, n: usize) -> bool {
    if result.degenerate {
        return true;
    }
    let kinds = result.contact_clusters(n);
    let inner = kinds.iter().filter(|&&k| k == ContactKind::Inner).count();
    let outer = kinds.iter().filter(|&&k| k == ContactKind::Outer).count();
    if inner < 2 || outer < 2 {
        return false;
    }
    (0..kinds.len()).all(|i| kinds[i] != kinds[(i + 1) % kinds.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AngleGrid;
    use std::f64::consts::PI;

    fn grid() -> AngleGrid {
        AngleGrid::new(256).unwrap()
    }

    #[test]
    fn relative_support_examples() {
        let gr = grid();
        let eu = Gauge::euclidean(&gr);
        let c = SupportCurve::circle(&gr, 1.5, Point::new(0.2, 0.1)).unwrap();
        let g = relative_support(&c, &eu, Point::new(0.2, 0.1)).unwrap();
        assert!(g.iter().all(|v| (v - 1.5).abs() < 1e-14));
        let e = SupportCurve::ellipse(&gr, 2.0, 1.0).unwrap();
        let (lo, hi) = min_max(&relative_support(&e, &eu, Point::ORIGIN).unwrap());
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 2.0).abs() < 1e-14);

        let gauge = Gauge::random(&gr, 3, 4, 0.4).unwrap();
        let delta = Point::new(0.05, -0.02);
        let g0 = relative_support(&e, &gauge, Point::ORIGIN).unwrap();
        let g1 = relative_support(&e, &gauge, delta).unwrap();
        for j in 0..gr.len() {
            let expected = -delta.dot(gr.units()[j]) / gauge.support()[j];
            assert!((g1[j] - g0[j] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn ellipse_radii_and_annulus() {
        let gr = grid();
        let eu = Gauge::euclidean(&gr);
        let e = SupportCurve::ellipse(&gr, 2.0, 1.0).unwrap();
        let r = radii(&e, &eu).unwrap();
        assert!((r.r_in - 1.0).abs() < 1e-9 && (r.r_out - 2.0).abs() < 1e-9);

        assert!(r.in_center.norm() < 1e-9 && r.out_center.norm() < 1e-9);

        let a = minimal_annulus(&e, &eu).unwrap();
        assert!(a.center.norm() < 1e-6);
        assert!((a.rho_in - 1.0).abs() < 1e-6 && (a.rho_out - 2.0).abs() < 1e-6);
        let thetas: Vec<(f64, ContactKind)> = a.contacts.iter().map(|c| (c.theta, c.kind)).collect();
        assert_eq!(
            thetas,
            vec![
                (0.0, ContactKind::Outer),
                (PI / 2.0, ContactKind::Inner),
                (PI, ContactKind::Outer),
                (3.0 * PI / 2.0, ContactKind::Inner)
            ]
        );
        assert!(certify_alternation(&a, gr.len()));
    }

    #[test]
    fn translated_ellipse_moves_center() {
        let gr = grid();
        let eu = Gauge::euclidean(&gr);
        let e = SupportCurve::ellipse(&gr, 2.0, 1.0).unwrap().translate(Point::new(0.4, -0.1));
        let a = minimal_annulus(&e, &eu).unwrap();
        assert!((a.center.x - 0.4).abs() < 1e-6 && (a.center.y + 0.1).abs() < 1e-6);
        assert!((a.rho_in - 1.0).abs() < 1e-6 && (a.rho_out - 2.0).abs() < 1e-6);
    }

    #[test]
    fn circle_and_isoperimetrix_are_degenerate() {
        let gr = grid();
        let eu = Gauge::euclidean(&gr);
        let c = SupportCurve::circle(&gr, 1.3, Point::new(0.5, 0.5)).unwrap();
        let a = minimal_annulus(&c, &eu).unwrap();
        assert!(a.degenerate && a.objective.abs() < 1e-9);
        assert!((a.rho_in - 1.3).abs() < 1e-9);
        assert_eq!(a.contacts.len(), gr.len());
        assert!(certify_alternation(&a, gr.len()));
        let r = radii(&c, &eu).unwrap();
        assert!((r.r_in - 1.3).abs() < 1e-9 && (r.r_out - 1.3).abs() < 1e-9);

        let gauge = Gauge::random(&gr, 8, 4, 0.4).unwrap();
        let t = gauge.isoperimetrix(0.7).unwrap();
        let r = radii(&t, &gauge).unwrap();
        assert!((r.r_in - 0.7).abs() < 1e-9 && (r.r_out - 0.7).abs() < 1e-9);
    }

    #[test]
    fn inradius_and_outradius_centers_do_not_alternate() {
        let gr = grid();
        let eu = Gauge::euclidean(&gr);
        let k = SupportCurve::random_convex(&gr, 21, 5, 0.3).unwrap();
        let r = radii(&k, &eu).unwrap();
        let at_in = AnnulusResult::at_center(&k, &eu, r.in_center).unwrap();
        assert!(!certify_alternation(&at_in, gr.len()));
        let best = minimal_annulus(&k, &eu).unwrap();
        assert!(certify_alternation(&best, gr.len()));
        assert!(best.objective <= at_in.objective + 1e-12);
    }
}
