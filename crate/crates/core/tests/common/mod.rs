#![allow(dead_code)]

use bonnesen_core::{AngleGrid, Gauge, SupportCurve};

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}

/// Perimeter of the ellipse with semi-axes `a`, `b` by arclength quadrature.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let speed = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
    4.0 * adaptive_simpson(&speed, 0.0, std::f64::consts::FRAC_PI_2, 1e-14)
}

pub fn grid() -> AngleGrid {
    AngleGrid::new(bonnesen_core::DEFAULT_GRID).unwrap()
}

/// Seeded random curve and gauge; even seeds use the Euclidean gauge.
pub fn random_pair(grid: &AngleGrid, seed: u64) -> (SupportCurve, Gauge) {
    let curve = SupportCurve::random_convex(grid, seed, 6, 0.3).unwrap();
    let gauge =
        if seed.is_multiple_of(2) { Gauge::euclidean(grid) } else { Gauge::random(grid, seed, 6, 0.5).unwrap() };
    (curve, gauge)
}
