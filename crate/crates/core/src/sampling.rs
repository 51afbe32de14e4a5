//! Low-discrepancy point sets.
//!
//! The additive recurrence `x_k = frac(1/2 + k·α)` with `α_i = g^{-(i+1)}`,
//! where `g` is the positive root of `g^{d+1} = g + 1` (Roberts' R_d sequence).
//! A seed is an offset into the sequence, so every point set is a pure
//! function of `(dimension, count, seed)`.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct Rd {
    alpha: Vec<f64>,
    index: u64,
}

impl Rd {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim > 0);
        let mut g = 2.0f64;
        for _ in 0..64 {
            g = (1.0 + g).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|i| g.powi(-(i as i32))).collect();
        Self { alpha, index: seed }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }
}

impl Iterator for Rd {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let k = self.index as f64 + 1.0;
        self.index += 1;
        Some(self.alpha.iter().map(|a| (0.5 + k * a).fract()).collect())
    }
}

/// Box–Muller on consecutive coordinate pairs, normalised to the unit sphere.
fn to_sphere(u: &[f64], n: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(n + 1);
    for pair in u.chunks(2) {
        let r = (-2.0 * pair[0].max(1e-300).ln()).sqrt();
        let th = 2.0 * PI * pair[1];
        g.push(r * th.cos());
        g.push(r * th.sin());
    }
    g.truncate(n);
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        return e;
    }
    g.iter().map(|v| v / norm).collect()
}

/// Quasi-uniform directions on the unit sphere in `R^n`.
pub fn sphere_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let pairs = n.div_ceil(2);
    Rd::new(2 * pairs, seed)
        .take(count)
        .map(|u| to_sphere(&u, n))
        .collect()
}

/// Quasi-uniform points in the closed ball of the given radius about the origin.
pub fn ball_points(n: usize, radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let pairs = n.div_ceil(2);
    Rd::new(2 * pairs + 1, seed)
        .take(count)
        .map(|u| {
            let dir = to_sphere(&u[..2 * pairs], n);
            let r = radius * u[2 * pairs].powf(1.0 / n as f64);
            dir.into_iter().map(|v| r * v).collect()
        })
        .collect()
}

/// Quasi-uniform points in the spherical shell `lo <= |x| <= hi`, with the
/// radius spread uniformly in `ln |x|` so every decade gets equal weight.
pub fn shell_points(n: usize, lo: f64, hi: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!(lo > 0.0 && hi >= lo);
    let pairs = n.div_ceil(2);
    let (a, b) = (lo.ln(), hi.ln());
    Rd::new(2 * pairs + 1, seed)
        .take(count)
        .map(|u| {
            let dir = to_sphere(&u[..2 * pairs], n);
            let r = (a + (b - a) * u[2 * pairs]).exp();
            dir.into_iter().map(|v| r * v).collect()
        })
        .collect()
}

/// Coordinate axes, the `(x1, x2)` diagonals and the all-ones diagonals: the
/// directions where the building block's hessian entries tend to peak.
pub fn special_directions(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        out.push(e);
    }
    for (a, b) in [(1.0, 1.0), (1.0, -1.0)] {
        let mut d = vec![0.0; n];
        d[0] = a / 2f64.sqrt();
        d[1] = b / 2f64.sqrt();
        out.push(d);
    }
    let c = 1.0 / (n as f64).sqrt();
    out.push(vec![c; n]);
    if n >= 3 {
        let mut d = vec![c; n];
        d[2] = -c;
        out.push(d);
    }
    out
}
