//! Sampled suprema of `u_t` and its derivatives over `|x| <= 2/3`, used as
//! numerical stand-ins for the constants `C_{η,φ}` of the bound estimates.

use serde::Serialize;

use crate::block::{block_eval, cross12_remainder, BlockParams};
use crate::cutoff::SUPPORT_END;
use crate::error::Result;
use crate::ladder::Ladder;
use crate::phi::{log_spaced, AdmissiblePhi};
use crate::sampling::{special_directions, sphere_directions};

/// Parameter values at which the bounds are certified.
pub const DEFAULT_T_GRID: [f64; 4] = [0.25, 0.1, 0.01, 0.001];

/// Allowed growth of a bounded supremum relative to its value at the first `t`.
pub const T_STABILITY_FACTOR: f64 = 2.0;

/// Smallest radius sampled; `-2 ln ρ` stays well inside the `f64` range.
const RHO_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub t: f64,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub diagonal: Vec<f64>,
    /// Off-diagonal suprema in row-major upper-triangle order, `(1,2)` excluded.
    pub off_diagonal: Vec<((usize, usize), f64)>,
    pub cross12: f64,
    /// `sup |h|`: the `(1,2)` entry minus its leading term.
    pub remainder: f64,
    pub laplacian: f64,
    pub determinant: f64,
    pub points: usize,
}

impl BoundRow {
    /// Largest supremum over every entry except `(1,2)`.
    pub fn max_entry_without_cross12(&self) -> f64 {
        self.diagonal
            .iter()
            .copied()
            .chain(self.off_diagonal.iter().map(|(_, v)| *v))
            .fold(0.0, f64::max)
    }

    fn bounded_quantities(&self) -> Vec<f64> {
        let mut v = vec![self.value, self.remainder, self.laplacian];
        v.extend(&self.gradient);
        v.extend(&self.diagonal);
        v.extend(self.off_diagonal.iter().map(|(_, x)| *x));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub phi: String,
    pub rows: Vec<BoundRow>,
    /// Every quantity expected to be bounded stays within
    /// [`T_STABILITY_FACTOR`] times its value in the first row.
    pub t_stable: bool,
    /// `sup |∂²u_t/∂x₁∂x₂|` increases along the rows.
    pub cross12_grows: bool,
}

impl BoundReport {
    fn max_over_rows(&self, f: impl Fn(&BoundRow) -> f64) -> f64 {
        self.rows.iter().map(f).fold(0.0, f64::max)
    }

    /// `C_{η,φ}` for `|u_t|`.
    pub fn c_value(&self) -> f64 {
        self.max_over_rows(|r| r.value)
    }

    /// `C_{η,φ}` for the laplacian.
    pub fn c_laplacian(&self) -> f64 {
        self.max_over_rows(|r| r.laplacian)
    }

    /// `C_{η,φ}` for the remainder `h`.
    pub fn c_remainder(&self) -> f64 {
        self.max_over_rows(|r| r.remainder)
    }

    pub fn c_gradient(&self) -> f64 {
        self.max_over_rows(|r| r.gradient.iter().copied().fold(0.0, f64::max))
    }

    pub fn c_other_entries(&self) -> f64 {
        self.max_over_rows(BoundRow::max_entry_without_cross12)
    }

    pub fn c_determinant(&self) -> f64 {
        self.max_over_rows(|r| r.determinant)
    }
}

/// Sample points: radii log-spaced in `s = -2 ln ρ` out past the maximiser of
/// `ρ^{2t} φ`, a dense linear layer through the η shell, crossed with
/// quasi-random and special directions.
pub fn sample_points(n: usize, t: f64) -> Vec<Vec<f64>> {
    let s0 = -2.0 * SUPPORT_END.ln();
    let s_max = (40.0 / t).clamp(50.0, -2.0 * RHO_FLOOR.ln());
    let mut radii: Vec<f64> = log_spaced(s0, s_max, 32)
        .into_iter()
        .map(|s| (-0.5 * s).exp())
        .filter(|&r| r < SUPPORT_END)
        .collect();
    radii.extend((0..160).map(|i| 0.4 + (SUPPORT_END - 0.4) * i as f64 / 160.0));
    let mut dirs = special_directions(n);
    dirs.extend(sphere_directions(n, 40, 0));
    let mut pts = Vec::with_capacity(radii.len() * dirs.len());
    for r in &radii {
        for d in &dirs {
            pts.push(d.iter().map(|v| r * v).collect());
        }
    }
    pts
}

fn row_for(n: usize, phi: AdmissiblePhi, t: f64) -> Result<BoundRow> {
    let params = BlockParams::new(t, n, phi)?;
    let pts = sample_points(n, t);
    let mut row = BoundRow {
        t,
        value: 0.0,
        gradient: vec![0.0; n],
        diagonal: vec![0.0; n],
        off_diagonal: (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&p| p != (0, 1))
            .map(|p| (p, 0.0))
            .collect(),
        cross12: 0.0,
        remainder: 0.0,
        laplacian: 0.0,
        determinant: 0.0,
        points: pts.len(),
    };
    for x in &pts {
        let e = block_eval(&params, x);
        row.value = row.value.max(e.value.abs());
        for i in 0..n {
            row.gradient[i] = row.gradient[i].max(e.gradient[i].abs());
            row.diagonal[i] = row.diagonal[i].max(e.hessian[(i, i)].abs());
        }
        for ((i, j), v) in row.off_diagonal.iter_mut() {
            *v = v.max(e.hessian[(*i, *j)].abs());
        }
        row.cross12 = row.cross12.max(e.hessian[(0, 1)].abs());
        row.remainder = row.remainder.max(cross12_remainder(&params, x).abs());
        row.laplacian = row.laplacian.max(e.laplacian.abs());
        row.determinant = row.determinant.max(e.hessian.clone().determinant().abs());
    }
    Ok(row)
}

/// Sampled suprema for each `t` in `ts` (the first entry is the reference row
/// for the stability check).
pub fn block_term_bounds(n: usize, phi: AdmissiblePhi, ts: &[f64]) -> Result<BoundReport> {
    let rows = ts
        .iter()
        .map(|&t| row_for(n, phi, t))
        .collect::<Result<Vec<_>>>()?;
    let reference = rows[0].bounded_quantities();
    let t_stable = rows.iter().all(|r| {
        r.bounded_quantities()
            .iter()
            .zip(&reference)
            .all(|(v, r0)| *v <= T_STABILITY_FACTOR * r0)
    });
    let cross12_grows = rows.windows(2).all(|w| w[1].cross12 > w[0].cross12);
    Ok(BoundReport {
        n,
        phi: phi.name(),
        rows,
        t_stable,
        cross12_grows,
    })
}

/// Sampled constants for a whole ladder, over [`DEFAULT_T_GRID`] together with
/// every `t_k` of the ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderConstants {
    pub c_value: f64,
    pub c_gradient: f64,
    pub c_laplacian: f64,
    /// Bound on the remainder `h` of the `(1,2)` entry.
    pub c_remainder: f64,
    /// Bound on every hessian entry other than `(1,2)`.
    pub c_other: f64,
    pub c_determinant: f64,
    /// `max_k max(1 + ε_k C_h, ε_k C_other)`: a bound on every entry of `Hess u`.
    pub c_bound: f64,
    /// Bound on `|H| / ε_k` for the mean curvature of the graph.
    pub c_mean_curvature: f64,
    pub report: BoundReport,
}

pub fn ladder_constants(ladder: &Ladder) -> Result<LadderConstants> {
    let n = ladder.params.n;
    let mut ts = DEFAULT_T_GRID.to_vec();
    ts.extend(ladder.levels.iter().map(|l| l.t));
    let report = block_term_bounds(n, ladder.params.phi, &ts)?;
    let c_remainder = report.c_remainder();
    let c_other = report.c_other_entries();
    let c_bound = ladder
        .levels
        .iter()
        .map(|l| (1.0 + l.eps * c_remainder).max(l.eps * c_other))
        .fold(0.0, f64::max);
    let c_gradient = report.c_gradient();
    // |H| <= |Δu| + |∇u|² n max|∂ᵢ∂ⱼu|, with |∇u| <= √n ε_k r_k C_grad.
    let scale = ladder
        .levels
        .iter()
        .map(|l| l.eps * l.small_r * l.small_r)
        .fold(0.0, f64::max);
    let nf = n as f64;
    Ok(LadderConstants {
        c_value: report.c_value(),
        c_gradient,
        c_laplacian: report.c_laplacian(),
        c_remainder,
        c_other,
        c_determinant: report.c_determinant(),
        c_bound,
        c_mean_curvature: report.c_laplacian() + nf * nf * c_gradient * c_gradient * c_bound * scale,
        report,
    })
}
