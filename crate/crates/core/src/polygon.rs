//! The circumscribed grid polygon of a support function, with a walking
//! point-location query for long sequences of nearby points.
//!
//! A point is inside iff `h_j - p . u_j >= 0` for every node `j`. For a
//! convex polygon only the edge facing `p` matters, found by angular wedge
//! search around an interior reference point.

use crate::point::Point;

#[derive(Debug, Clone)]
pub struct TangentPolygon {
    h: Vec<f64>,
    units: Vec<Point>,
    /// `vertices[j]` joins support lines `j` and `j + 1`.
    vertices: Vec<Point>,
    /// Vertices relative to `reference`.
    spokes: Vec<Point>,
    reference: Point,
    /// Whether every edge has positive length; otherwise queries fall back to
    /// the full scan.
    regular: bool,
    /// Points with support gap down to `-slack` count as inside.
    slack: f64,
}

impl TangentPolygon {
    pub fn new(h: &[f64], units: &[Point]) -> Self {
        let n = h.len();
        let vertices: Vec<Point> = (0..n)
            .map(|j| {
                let k = (j + 1) % n;
                let (a, b) = (units[j], units[k]);
                let det = a.cross(b);
                Point::new((h[j] * b.y - h[k] * a.y) / det, (a.x * h[k] - b.x * h[j]) / det)
            })
            .collect();
        let reference = vertices.iter().fold(Point::ORIGIN, |acc, &v| acc + v) * (1.0 / n as f64);
        let spokes = vertices.iter().map(|&v| v - reference).collect();
        let regular = (0..n).all(|j| {
            let prev = vertices[(j + n - 1) % n];
            (vertices[j] - prev).dot(units[j].perp()) > 0.0
        });
        TangentPolygon { h: h.to_vec(), units: units.to_vec(), vertices, spokes, reference, regular, slack: 0.0 }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// `min_j (h_j - p . u_j)`.
    pub fn support_gap(&self, p: Point) -> f64 {
        self.h.iter().zip(&self.units).map(|(h, &u)| h - p.dot(u)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point) -> bool {
        let mut hint = 0;
        self.contains_from(p, &mut hint)
    }

    /// Point test starting the wedge search at `hint`, which is updated to
    /// the wedge containing `p`.
    pub fn contains_from(&self, p: Point, hint: &mut usize) -> bool {
        if !self.regular {
            return self.support_gap(p) >= -self.slack;
        }
        let n = self.h.len();
        let d = p - self.reference;
        if d.x == 0.0 && d.y == 0.0 {
            return true;
        }
        let mut k = *hint % n;
        for _ in 0..n {
            // wedge k spans spokes[k - 1] .. spokes[k]
            if self.spokes[k].cross(d) >= 0.0 {
                k = (k + 1) % n;
            } else if self.spokes[(k + n - 1) % n].cross(d) < 0.0 {
                k = (k + n - 1) % n;
            } else {
                *hint = k;
                return self.h[k] - p.dot(self.units[k]) >= -self.slack;
            }
        }
        self.support_gap(p) >= -self.slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::SupportCurve;
    use crate::grid::AngleGrid;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn walking_test_agrees_with_full_scan(seed in 0u64..1000, x in -2.5f64..2.5, y in -2.5f64..2.5) {
            let grid = AngleGrid::new(64).unwrap();
            let k = SupportCurve::random_convex(&grid, seed, 5, 0.3).unwrap();
            let poly = TangentPolygon::new(k.support(), grid.units());
            let p = Point::new(x, y);
            let gap = poly.support_gap(p);
            prop_assume!(gap.abs() > 1e-12);
            let mut hint = (seed % 64) as usize;
            prop_assert_eq!(poly.contains_from(p, &mut hint), gap >= 0.0);
            prop_assert_eq!(poly.contains(p), k.contains_point(p));
        }
    }

    #[test]
    fn square_like_polygon_of_circle() {
        let grid = AngleGrid::new(16).unwrap();
        let c = SupportCurve::circle(&grid, 1.0, Point::ORIGIN).unwrap();
        let poly = TangentPolygon::new(c.support(), grid.units());
        assert!(poly.contains(Point::new(0.99, 0.0)));
        assert!(!poly.contains(Point::new(1.01, 0.0)));
        for v in poly.vertices() {
            assert!((v.norm() - 1.0 / (std::f64::consts::PI / 16.0).cos()).abs() < 1e-12);
        }
    }
}
