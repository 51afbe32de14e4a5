//! Two planar fixtures, differentiated only through the finite-difference
//! oracle:
//!
//! ```text
//! w(x, y)  = (x² - y²) ln(-ln(x² + y²))
//! ψ(x, y)  = (x² - y²) sin(ln(-ln(x² + y²)))
//! ```
//!
//! both extended by 0 at the origin and considered on `x² + y² <= 1/4`.
//!
//! Since `x² - y² = 2ξη` in the frame rotated by 45°, the interesting mixed
//! entry is the one in that frame, `(∂xx - ∂yy)/2`. The Cartesian `∂xy` vanishes
//! identically on the axes and on the diagonals.

use serde::Serialize;

use crate::block::PointEval;
use crate::error::{LabError, Result};
use crate::fd::{fd_gradient, fd_hessian, FdConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GalleryExample {
    /// `(x² - y²) ln(-ln r²)`.
    W,
    /// `(x² - y²) sin(ln(-ln r²))`.
    Phi,
}

impl GalleryExample {
    pub fn name(&self) -> &'static str {
        match self {
            GalleryExample::W => "w",
            GalleryExample::Phi => "phi",
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        if r2 == 0.0 {
            return 0.0;
        }
        let l = (-r2.ln()).ln();
        let radial = match self {
            GalleryExample::W => l,
            GalleryExample::Phi => l.sin(),
        };
        (x * x - y * y) * radial
    }
}

/// Value plus finite-difference derivatives at `point`.
pub fn gallery_eval(which: GalleryExample, point: [f64; 2]) -> Result<PointEval> {
    let [x, y] = point;
    let r2 = x * x + y * y;
    if r2 > 0.25 {
        return Err(LabError::OutsideDisk(x, y));
    }
    if r2 == 0.0 {
        return Ok(PointEval::zeros(&point));
    }
    // Steps follow |p| so that every probe radius sees the same relative stencil.
    let cfg = FdConfig::default().with_scale_floor(0.5 * r2.sqrt());
    let f = |p: &[f64]| which.value(p[0], p[1]);
    let gradient = fd_gradient(f, &point, &cfg)?;
    let hessian = fd_hessian(f, &point, &cfg)?;
    Ok(PointEval::new(&point, which.value(x, y), gradient, hessian))
}

/// Mixed entry in the frame rotated by 45°.
pub fn rotated_cross(pe: &PointEval) -> f64 {
    0.5 * (pe.hessian[(0, 0)] - pe.hessian[(1, 1)])
}

/// Radii `10^{-1}, …, 10^{-6}` with `per_decade` points per decade.
pub fn gallery_radii(per_decade: usize) -> Vec<f64> {
    let steps = 5 * per_decade;
    (0..=steps)
        .map(|i| 10f64.powf(-1.0 - 5.0 * i as f64 / steps as f64))
        .collect()
}

/// Angles at which each radius is sampled.
const ANGLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GalleryRow {
    pub r: f64,
    /// `|value| / r²` along the positive `x` axis.
    pub taylor_ratio: f64,
    /// `(∂xx - ∂yy)/2` on the positive `x` axis.
    pub rotated_cross: f64,
    /// Cartesian `∂xy` on the diagonal `(r, r)/√2`.
    pub diagonal_cross: f64,
    /// Largest `|Δ|` over the sampled angles.
    pub max_abs_laplacian: f64,
    /// Largest hessian entry over the sampled angles.
    pub max_abs_hessian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalleryReport {
    pub schema: u32,
    pub example: String,
    pub rows: Vec<GalleryRow>,
    pub max_abs_cross: f64,
    /// The rotated cross entry grows strictly as `r` decreases.
    pub cross_increasing: bool,
    pub cross_spread: f64,
    pub max_abs_laplacian: f64,
    /// `|Δ|` at the smallest radius relative to the largest.
    pub laplacian_shrink: f64,
    pub hessian_sup: f64,
}

pub fn gallery_report(which: GalleryExample) -> Result<GalleryReport> {
    let mut rows = Vec::new();
    for r in gallery_radii(4) {
        let axis = gallery_eval(which, [r, 0.0])?;
        let d = r * std::f64::consts::FRAC_1_SQRT_2;
        let diag = gallery_eval(which, [d, d])?;
        let mut max_lap: f64 = 0.0;
        let mut max_hess: f64 = 0.0;
        for a in 0..ANGLES {
            let th = std::f64::consts::PI * a as f64 / ANGLES as f64;
            let pe = gallery_eval(which, [r * th.cos(), r * th.sin()])?;
            max_lap = max_lap.max(pe.laplacian.abs());
            max_hess = max_hess.max(pe.max_abs_hessian());
        }
        rows.push(GalleryRow {
            r,
            taylor_ratio: axis.value.abs() / (r * r),
            rotated_cross: rotated_cross(&axis),
            diagonal_cross: diag.hessian[(0, 1)],
            max_abs_laplacian: max_lap,
            max_abs_hessian: max_hess,
        });
    }
    let cross: Vec<f64> = rows.iter().map(|r| r.rotated_cross).collect();
    let max_abs_cross = cross.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let spread = cross.iter().copied().fold(f64::MIN, f64::max) - cross.iter().copied().fold(f64::MAX, f64::min);
    let laps: Vec<f64> = rows.iter().map(|r| r.max_abs_laplacian).collect();
    Ok(GalleryReport {
        schema: 1,
        example: which.name().to_string(),
        cross_increasing: cross.windows(2).all(|w| w[1] > w[0]),
        max_abs_cross,
        cross_spread: spread,
        max_abs_laplacian: laps.iter().copied().fold(0.0, f64::max),
        laplacian_shrink: laps[laps.len() - 1] / laps[0],
        hessian_sup: rows.iter().map(|r| r.max_abs_hessian).fold(0.0, f64::max),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_origin_and_diagonal() {
        assert_eq!(GalleryExample::W.value(0.0, 0.0), 0.0);
        assert_eq!(GalleryExample::W.value(0.2, 0.2), 0.0);
        assert_eq!(gallery_eval(GalleryExample::Phi, [0.0, 0.0]).unwrap().value, 0.0);
    }

    #[test]
    fn disk_is_enforced() {
        assert!(matches!(
            gallery_eval(GalleryExample::W, [0.5, 0.1]),
            Err(LabError::OutsideDisk(..))
        ));
    }

    #[test]
    fn axis_remainder() {
        let r: f64 = 1e-3;
        let ratio = GalleryExample::W.value(r, 0.0) / (r * r);
        assert!((ratio - (6.0 * 10f64.ln()).ln()).abs() < 1e-12);
        assert!((ratio - 2.626).abs() < 1e-3);
    }

    #[test]
    fn laplacian_closed_form_on_axis() {
        // Δw = cos 2θ (-8/q - 4/q²) with q = -ln r².
        for r in [1e-1, 1e-3, 1e-6] {
            let q = -2.0 * f64::ln(r);
            let pe = gallery_eval(GalleryExample::W, [r, 0.0]).unwrap();
            let exact = -8.0 / q - 4.0 / (q * q);
            assert!((pe.laplacian - exact).abs() < 1e-5, "{r}: {} vs {exact}", pe.laplacian);
        }
    }

    #[test]
    fn reports_have_expected_shape() {
        let w = gallery_report(GalleryExample::W).unwrap();
        assert!(w.cross_increasing);
        assert!(w.rows.iter().all(|r| r.diagonal_cross.abs() < 1e-4));
        let p = gallery_report(GalleryExample::Phi).unwrap();
        assert!(p.hessian_sup < 10.0 && p.cross_spread >= 0.5);
    }
}
