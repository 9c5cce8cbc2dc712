//! Shared fixtures for the benchmarks.

use bonnesen_core::{AngleGrid, Gauge, SupportCurve};

pub fn fixture(n: usize) -> (SupportCurve, Gauge) {
    let grid = AngleGrid::new(n).expect("valid grid");
    let curve = SupportCurve::random_convex(&grid, 7, 6, 0.3).expect("random curve");
    let gauge = Gauge::random(&grid, 7, 4, 0.5).expect("random gauge");
    (curve, gauge)
}
