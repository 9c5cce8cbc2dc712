//! Minkowski geometries given by a centrally symmetric isoperimetrix.
//!
//! The gauge is defined directly by the Euclidean support function `h~` of
//! the isoperimetrix on the normal-angle grid. The unit-ball radial function
//! is `r = 1/h~` on the same grid. Areas follow the half-mixed-area
//! convention `alpha = V(T, T) / 2`, so the Euclidean gauge has `alpha = pi`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{check_convexity, perturbed_unit, SupportCurve};
use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;

/// Allowed deviation of `h~(t)` from `h~(t + pi)`, relative to `max h~`.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Gauge {
    grid: AngleGrid,
    h: Vec<f64>,
    dh: Vec<f64>,
    d2h: Vec<f64>,
    radial: Vec<f64>,
    alpha: f64,
    gamma: Vec<f64>,
    label: Option<String>,
}

/// Minkowski perimeter and Euclidean area of a curve under a gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiScalars {
    /// `V(K, T)` by the mixed-area formula.
    pub length: f64,
    /// `int h~ (h + h'') dtheta`, the same length after integration by parts.
    pub length_by_arc: f64,
    pub area: f64,
    pub alpha: f64,
    pub ratio: f64,
}

impl MinkowskiScalars {
    /// `L^2 - 4 alpha A`.
    pub fn deficit(&self) -> f64 {
        self.length * self.length - 4.0 * self.alpha * self.area
    }
}

/// Read access to support samples and their spectral derivatives.
pub trait SupportSamples {
    fn grid(&self) -> &AngleGrid;
    fn support(&self) -> &[f64];
    fn first_derivative(&self) -> &[f64];
}

impl SupportSamples for SupportCurve {
    fn grid(&self) -> &AngleGrid {
        SupportCurve::grid(self)
    }
    fn support(&self) -> &[f64] {
        SupportCurve::support(self)
    }
    fn first_derivative(&self) -> &[f64] {
        self.derivatives().0
    }
}

impl SupportSamples for Gauge {
    fn grid(&self) -> &AngleGrid {
        &self.grid
    }
    fn support(&self) -> &[f64] {
        &self.h
    }
    fn first_derivative(&self) -> &[f64] {
        &self.dh
    }
}

/// Mixed area `V(P, Q) = int (h_P h_Q - h_P' h_Q') dtheta`.
pub fn mixed_area<P: SupportSamples + ?Sized, Q: SupportSamples + ?Sized>(p: &P, q: &Q) -> Result<f64> {
    p.grid().check_same(q.grid())?;
    let sum: f64 = p
        .support()
        .iter()
        .zip(p.first_derivative())
        .zip(q.support().iter().zip(q.first_derivative()))
        .map(|((hp, dp), (hq, dq))| hp * hq - dp * dq)
        .sum();
    Ok(sum * p.grid().dtheta())
}

/// Minkowski length of `curve` under `gauge`, with both length formulas.
pub fn minkowski_length(curve: &SupportCurve, gauge: &Gauge) -> Result<MinkowskiScalars> {
    let length = mixed_area(curve, gauge)?;
    let by_arc: f64 =
        curve.radius_of_curvature().iter().zip(&gauge.h).map(|(r, ht)| ht * r).sum::<f64>() * gauge.grid.dtheta();
    let area = curve.scalars().area;
    Ok(MinkowskiScalars { length, length_by_arc: by_arc, area, alpha: gauge.alpha, ratio: length * length / area })
}

impl Gauge {
    /// The Euclidean geometry: `h~ = r = gamma = 1`, `alpha = pi`.
    pub fn euclidean(grid: &AngleGrid) -> Gauge {
        let n = grid.len();
        Gauge {
            grid: grid.clone(),
            h: vec![1.0; n],
            dh: vec![0.0; n],
            d2h: vec![0.0; n],
            radial: vec![1.0; n],
            alpha: PI,
            gamma: vec![1.0; n],
            label: Some("euclidean".into()),
        }
    }

    /// Builds a gauge from isoperimetrix support samples.
    pub fn from_support(grid: &AngleGrid, h: Vec<f64>) -> Result<Gauge> {
        grid.check_len(&h)?;
        let min = h.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(GeomError::NonPositiveGauge(min));
        }
        let max = h.iter().copied().fold(0.0, f64::max);
        let asym = (0..h.len()).map(|j| (h[j] - h[grid.antipode(j)]).abs()).fold(0.0, f64::max);
        if asym > SYMMETRY_TOL * max {
            return Err(GeomError::SymmetryViolation(asym));
        }
        let (dh, d2h) = grid.derivatives(&h);
        let radius: Vec<f64> = h.iter().zip(&d2h).map(|(a, b)| a + b).collect();
        check_convexity(grid, &h, &radius)?;
        let gamma: Vec<f64> = h.iter().zip(&radius).map(|(a, r)| a * r).collect();
        let alpha = 0.5 * h.iter().zip(&dh).map(|(a, d)| a * a - d * d).sum::<f64>() * grid.dtheta();
        let radial = h.iter().map(|x| 1.0 / x).collect();
        Ok(Gauge { grid: grid.clone(), h, dh, d2h, radial, alpha, gamma, label: None })
    }

    /// `h~ = 1 + sum (a_m cos m t + b_m sin m t)` over even harmonics `m`.
    pub fn from_harmonics(grid: &AngleGrid, harmonics: &[(usize, f64, f64)]) -> Result<Gauge> {
        if let Some(&(m, _, _)) = harmonics.iter().find(|(m, _, _)| m % 2 != 0 || *m == 0) {
            return Err(GeomError::InvalidParameter(format!("gauge harmonics must be even and positive, got {m}")));
        }
        let h = grid
            .thetas()
            .map(|t| {
                1.0 + harmonics
                    .iter()
                    .map(|&(m, a, b)| {
                        let (s, c) = (m as f64 * t).sin_cos();
                        a * c + b * s
                    })
                    .sum::<f64>()
            })
            .collect();
        Ok(Self::from_support(grid, h)?.with_label("harmonic"))
    }

    /// Seeded random gauge with even harmonics only, scaled so that
    /// `min (h~ + h~'') = margin`.
    pub fn random(grid: &AngleGrid, seed: u64, max_even_harmonic: usize, margin: f64) -> Result<Gauge> {
        if max_even_harmonic < 2 || !max_even_harmonic.is_multiple_of(2) {
            return Err(GeomError::InvalidParameter(format!(
                "max_even_harmonic must be even and >= 2, got {max_even_harmonic}"
            )));
        }
        if !(margin > 0.0 && margin < 1.0) {
            return Err(GeomError::InvalidParameter(format!("margin must lie in (0, 1), got {margin}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
        let coeffs: Vec<(usize, f64, f64)> = (2..=max_even_harmonic)
            .step_by(2)
            .map(|m| {
                let w = 1.0 / m as f64;
                (m, w * rng.random_range(-1.0..1.0), w * rng.random_range(-1.0..1.0))
            })
            .collect();
        let mut h = perturbed_unit(grid, &coeffs, margin);
        // Even harmonics are pi-periodic analytically; copy halves so the
        // samples are exactly symmetric.
        let half = grid.len() / 2;
        for j in 0..half {
            h[j + half] = h[j];
        }
        Ok(Self::from_support(grid, h)?.with_label(format!("random(seed={seed}, M={max_even_harmonic})")))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    /// Isoperimetrix support samples `h~`.
    pub fn support(&self) -> &[f64] {
        &self.h
    }

    pub fn derivatives(&self) -> (&[f64], &[f64]) {
        (&self.dh, &self.d2h)
    }

    /// Unit-ball radial samples `r = 1/h~`.
    pub fn radial(&self) -> &[f64] {
        &self.radial
    }

    /// Half mixed area `V(T, T) / 2`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Flow weight `gamma = h~ (h~ + h~'') = h~ / k~`.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Euclidean curvature of the isoperimetrix, `k~ = 1/(h~ + h~'')`.
    pub fn curvature(&self) -> Vec<f64> {
        self.h.iter().zip(&self.d2h).map(|(a, b)| 1.0 / (a + b)).collect()
    }

    pub fn is_euclidean(&self) -> bool {
        self.h.iter().all(|&x| x == 1.0)
    }

    pub fn max_asymmetry(&self) -> f64 {
        (0..self.h.len()).map(|j| (self.h[j] - self.h[self.grid.antipode(j)]).abs()).fold(0.0, f64::max)
    }

    /// The isoperimetrix scaled by `lambda` as a curve.
    pub fn isoperimetrix(&self, lambda: f64) -> Result<SupportCurve> {
        if !(lambda > 0.0) {
            return Err(GeomError::NonPositiveRadius(lambda));
        }
        let h = self.h.iter().map(|x| lambda * x).collect();
        Ok(SupportCurve::from_samples(self.grid.clone(), h)?.with_label("isoperimetrix"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point;

    fn grid() -> AngleGrid {
        AngleGrid::new(256).unwrap()
    }

    #[test]
    fn euclidean_gauge_constants() {
        let g = Gauge::euclidean(&grid());
        assert!((g.alpha() - PI).abs() < 1e-12);
        assert!(g.gamma().iter().all(|&x| x == 1.0));
        let built = Gauge::from_support(&grid(), vec![1.0; 256]).unwrap();
        assert!((built.alpha() - PI).abs() < 1e-12);
        assert_eq!(built.gamma(), g.gamma());
    }

    #[test]
    fn harmonic_gauge_alpha_and_gamma() {
        let g = Gauge::from_harmonics(&grid(), &[(2, 0.1, 0.0)]).unwrap();
        // 1/2 int ((1 + e cos 2t)^2 - (2 e sin 2t)^2) dt = pi (1 - 3 e^2 / 2)
        assert!((g.alpha() - 3.094_468_763_785_946).abs() < 1e-12);
        let g = Gauge::from_harmonics(&grid(), &[(2, 0.2, 0.0)]).unwrap();
        // h~(0) = 1.2, h~''(0) = -0.8
        assert!((g.gamma()[0] - 0.48).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_gauges() {
        let gr = grid();
        let odd: Vec<f64> = gr.thetas().map(|t| 1.0 + 0.1 * (3.0 * t).cos()).collect();
        assert!(matches!(Gauge::from_support(&gr, odd), Err(GeomError::SymmetryViolation(_))));
        let concave: Vec<f64> = gr.thetas().map(|t| 1.0 + 0.5 * (2.0 * t).cos()).collect();
        assert!(matches!(Gauge::from_support(&gr, concave), Err(GeomError::ConvexityViolation { .. })));
        assert!(matches!(Gauge::from_support(&gr, vec![-1.0; 256]), Err(GeomError::NonPositiveGauge(_))));
        assert!(Gauge::from_harmonics(&gr, &[(3, 0.1, 0.0)]).is_err());
    }

    #[test]
    fn random_gauge_properties() {
        let gr = grid();
        let a = Gauge::random(&gr, 11, 4, 0.3).unwrap();
        let b = Gauge::random(&gr, 11, 4, 0.3).unwrap();
        assert_eq!(a.support(), b.support());
        assert!(a.max_asymmetry() <= 1e-15);
        let hmax = a.support().iter().copied().fold(0.0, f64::max);
        assert!(a.alpha() > 0.0 && a.alpha() <= PI * hmax * hmax);
        assert!((gr.integrate(a.gamma()) - 2.0 * a.alpha()).abs() < 1e-10);
    }

    #[test]
    fn mixed_area_examples() {
        let gr = grid();
        let c1 = SupportCurve::circle(&gr, 1.5, Point::ORIGIN).unwrap();
        let c2 = SupportCurve::circle(&gr, 2.5, Point::ORIGIN).unwrap();
        assert!((mixed_area(&c1, &c2).unwrap() - 2.0 * PI * 1.5 * 2.5).abs() < 1e-12);
        let e = SupportCurve::ellipse(&gr, 2.0, 1.0).unwrap();
        assert!((mixed_area(&e, &e).unwrap() - 4.0 * PI).abs() < 1e-10);
        let p = SupportCurve::random_convex(&gr, 1, 6, 0.3).unwrap();
        let q = SupportCurve::random_convex(&gr, 2, 6, 0.3).unwrap();
        assert!((mixed_area(&p, &q).unwrap() - mixed_area(&q, &p).unwrap()).abs() < 1e-12);
        let other = SupportCurve::circle(&AngleGrid::new(128).unwrap(), 1.0, Point::ORIGIN).unwrap();
        assert!(matches!(mixed_area(&p, &other), Err(GeomError::GridMismatch { .. })));
    }

    #[test]
    fn minkowski_length_examples() {
        let gr = grid();
        let eu = Gauge::euclidean(&gr);
        let e = SupportCurve::ellipse(&gr, 2.0, 1.0).unwrap();
        let m = minkowski_length(&e, &eu).unwrap();
        assert!((m.length - e.scalars().length).abs() < 1e-12);
        assert!((m.length - 9.688_448_220_547_676).abs() < 1e-8);

        let g = Gauge::random(&gr, 5, 6, 0.3).unwrap();
        let t = g.isoperimetrix(1.0).unwrap();
        let m = minkowski_length(&t, &g).unwrap();
        assert!((m.length - 2.0 * g.alpha()).abs() < 1e-10);
        assert!(m.deficit().abs() < 1e-8 * m.length * m.length);

        let k = SupportCurve::random_convex(&gr, 9, 6, 0.3).unwrap();
        let m1 = minkowski_length(&k, &g).unwrap();
        let m3 = minkowski_length(&k.scale(3.0).unwrap(), &g).unwrap();
        assert!((m3.length - 3.0 * m1.length).abs() < 1e-11 * m3.length);
        assert!((m3.area - 9.0 * m1.area).abs() < 1e-11 * m3.area);
        assert!((m1.length - m1.length_by_arc).abs() < 1e-10 * m1.length);
    }
}
