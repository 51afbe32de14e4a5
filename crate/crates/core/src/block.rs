//! The building block
//!
//! ```text
//! u_t(x) = η(|x|) x₁ x₂ |x|^{2t} φ(-ln |x|²)     (0 < |x| < 1, zero elsewhere)
//! ```
//!
//! with analytic gradient and hessian.
//!
//! Writing `u_t = x₁x₂ F(ρ)` with `ρ = |x|`, `ω = x/ρ` and the scaled radial jet
//! `A = F`, `B = ρF'`, `C = ρ²F''`, every derivative is a polynomial in `ω`
//! times one of `A, B, C`:
//!
//! ```text
//! u        = ρ² ω₁ω₂ A
//! ∂ᵢu      = ρ [(δᵢ₁ω₂ + δᵢ₂ω₁) A + ω₁ω₂ωᵢ B]
//! ∂ᵢ∂ⱼu    = (δᵢ₁δⱼ₂ + δᵢ₂δⱼ₁) A
//!          + (δᵢ₁ω₂ωⱼ + δᵢ₂ω₁ωⱼ + δⱼ₁ω₂ωᵢ + δⱼ₂ω₁ωᵢ) B
//!          + ω₁ω₂ [ωᵢωⱼ (C - B) + δᵢⱼ B]
//! ```
//!
//! For `g(ρ) = ρ^{2t} φ(s)`, `s = -2 ln ρ`, the jet is
//! `ρ^{2t} (φ, 2tφ - 2φ', 2t(2t-1)φ + (2-8t)φ' + 4φ'')`. All negative powers of
//! `ρ` cancel against the `ω` factors, so nothing overflows as `ρ → 0`; the only
//! power of `ρ` left is `ρ^{2t} = exp(2t ln ρ)`, which is bounded by 1.
//!
//! [`cross12_terms`], [`plateau_terms_1j`] and [`plateau_terms_ij`] expose the
//! classical term-by-term expansions of the off-diagonal entries so each term
//! can be checked against the assembled hessian.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cutoff::{SmoothCutoff, SUPPORT_END};
use crate::error::{LabError, Result};
use crate::phi::AdmissiblePhi;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockParams {
    pub t: f64,
    pub n: usize,
    pub phi: AdmissiblePhi,
    pub eta: SmoothCutoff,
}

impl BlockParams {
    pub fn new(t: f64, n: usize, phi: AdmissiblePhi) -> Result<Self> {
        if !(t > 0.0 && t <= 0.5) {
            return Err(LabError::InvalidParameter {
                name: "t",
                value: t,
                reason: "must lie in (0, 1/2]",
            });
        }
        if n < 2 {
            return Err(LabError::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "dimension must be at least 2",
            });
        }
        Ok(Self {
            t,
            n,
            phi,
            eta: SmoothCutoff::new(),
        })
    }
}

/// Value, gradient and hessian of a scalar field at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEval {
    pub point: DVector<f64>,
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
    pub laplacian: f64,
}

impl PointEval {
    pub fn zeros(point: &[f64]) -> Self {
        let n = point.len();
        Self {
            point: DVector::from_column_slice(point),
            value: 0.0,
            gradient: DVector::zeros(n),
            hessian: DMatrix::zeros(n, n),
            laplacian: 0.0,
        }
    }

    /// Assembles a record, setting the laplacian to the trace of `hessian`.
    pub fn new(point: &[f64], value: f64, gradient: DVector<f64>, hessian: DMatrix<f64>) -> Self {
        let laplacian = hessian.trace();
        Self {
            point: DVector::from_column_slice(point),
            value,
            gradient,
            hessian,
            laplacian,
        }
    }

    /// Multiplies value, gradient and hessian by separate factors, as produced
    /// by composing with an affine change of variables.
    pub fn scaled(mut self, point: &[f64], value: f64, grad: f64, hess: f64) -> Self {
        self.point = DVector::from_column_slice(point);
        self.value *= value;
        self.gradient *= grad;
        self.hessian *= hess;
        self.laplacian *= hess;
        self
    }

    pub fn max_abs_hessian(&self) -> f64 {
        self.hessian.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Euclidean norm with scaling, safe for very small and very large entries.
pub fn stable_norm(x: &[f64]) -> f64 {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
}

/// Scaled radial jet `(F, ρF', ρ²F'')` of `F = η(ρ) ρ^{2t} φ(-2 ln ρ)`.
#[derive(Debug, Clone, Copy)]
struct RadialJet {
    a: f64,
    b: f64,
    c: f64,
}

/// Quantities shared by the assembled hessian and the term lists.
#[derive(Debug, Clone, Copy)]
struct Radial {
    rho: f64,
    /// `ρ^{2t}`.
    p: f64,
    phi: f64,
    dphi: f64,
    ddphi: f64,
    eta: f64,
    deta: f64,
    ddeta: f64,
}

impl Radial {
    fn at(params: &BlockParams, rho: f64) -> Self {
        let ln_rho = rho.ln();
        let s = -2.0 * ln_rho;
        let eta = params.eta.jet(rho);
        Radial {
            rho,
            p: (2.0 * params.t * ln_rho).exp(),
            phi: params.phi.value(s),
            dphi: params.phi.d1(s),
            ddphi: params.phi.d2(s),
            eta: eta.value,
            deta: eta.d1,
            ddeta: eta.d2,
        }
    }

    fn jet(&self, t: f64) -> RadialJet {
        let ag = self.p * self.phi;
        let bg = self.p * (2.0 * t * self.phi - 2.0 * self.dphi);
        let cg = self.p
            * (2.0 * t * (2.0 * t - 1.0) * self.phi + (2.0 - 8.0 * t) * self.dphi + 4.0 * self.ddphi);
        let r = self.rho;
        RadialJet {
            a: self.eta * ag,
            b: r * self.deta * ag + self.eta * bg,
            c: r * r * self.ddeta * ag + 2.0 * r * self.deta * bg + self.eta * cg,
        }
    }
}

fn unit(x: &[f64], rho: f64) -> Vec<f64> {
    x.iter().map(|v| v / rho).collect()
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Value, gradient and hessian of `u_t` at `x`. Total on `R^n`: exact zeros at
/// the origin and for `|x| >= 2/3`.
pub fn block_eval(params: &BlockParams, x: &[f64]) -> PointEval {
    assert_eq!(x.len(), params.n, "point dimension mismatch");
    let rho = stable_norm(x);
    if rho == 0.0 || rho >= SUPPORT_END {
        return PointEval::zeros(x);
    }
    let n = params.n;
    let w = unit(x, rho);
    let RadialJet { a, b, c } = Radial::at(params, rho).jet(params.t);
    let w12 = w[0] * w[1];

    let value = rho * rho * w12 * a;
    let gradient = DVector::from_fn(n, |i, _| {
        rho * ((delta(i, 0) * w[1] + delta(i, 1) * w[0]) * a + w12 * w[i] * b)
    });
    let mut hessian = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let pair = delta(i, 0) * delta(j, 1) + delta(i, 1) * delta(j, 0);
            let mixed = delta(i, 0) * w[1] * w[j]
                + delta(i, 1) * w[0] * w[j]
                + delta(j, 0) * w[1] * w[i]
                + delta(j, 1) * w[0] * w[i];
            let v = pair * a + mixed * b + w12 * (w[i] * w[j] * (c - b) + delta(i, j) * b);
            hessian[(i, j)] = v;
            hessian[(j, i)] = v;
        }
    }
    PointEval::new(x, value, gradient, hessian)
}

/// The value of `u_t` alone; what the finite-difference oracle differentiates.
pub fn block_value(params: &BlockParams, x: &[f64]) -> f64 {
    let rho = stable_norm(x);
    if rho == 0.0 || rho >= SUPPORT_END {
        return 0.0;
    }
    let ln_rho = rho.ln();
    params.eta.value(rho) * x[0] * x[1] * (2.0 * params.t * ln_rho).exp() * params.phi.value(-2.0 * ln_rho)
}

/// The ten terms of the expansion of `∂²u_t/∂x₁∂x₂`, valid on all of `0 < |x| < 2/3`:
///
/// ```text
///  0: η ρ^{2t} φ                        5: 2t η (x₁²+x₂²) ρ^{2t-2} φ
///  1: η'' x₁²x₂² ρ^{2t-2} φ             6: -4 η' x₁²x₂² ρ^{2t-3} φ'
///  2: η' (x₁²+x₂²) ρ^{2t-1} φ           7: -2 η (x₁²+x₂²) ρ^{2t-2} φ'
///  3: (4t-1) η' x₁²x₂² ρ^{2t-3} φ       8: (4-8t) η x₁²x₂² ρ^{2t-4} φ'
///  4: 2t(2t-2) η x₁²x₂² ρ^{2t-4} φ      9: 4 η x₁²x₂² ρ^{2t-4} φ''
/// ```
///
/// Term 0 is the leading term; the rest add up to the remainder `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cross12Terms {
    pub terms: [f64; 10],
}

impl Cross12Terms {
    pub fn leading(&self) -> f64 {
        self.terms[0]
    }

    pub fn remainder(&self) -> f64 {
        self.terms[1..].iter().sum()
    }

    pub fn sum(&self) -> f64 {
        self.leading() + self.remainder()
    }
}

pub fn cross12_terms(params: &BlockParams, x: &[f64]) -> Cross12Terms {
    let rho = stable_norm(x);
    if rho == 0.0 || rho >= SUPPORT_END {
        return Cross12Terms { terms: [0.0; 10] };
    }
    let w = unit(x, rho);
    let r = Radial::at(params, rho);
    let t = params.t;
    let q = w[0] * w[0] * w[1] * w[1];
    let l = w[0] * w[0] + w[1] * w[1];
    let (p, ph, d1, d2) = (r.p, r.phi, r.dphi, r.ddphi);
    Cross12Terms {
        terms: [
            r.eta * p * ph,
            r.ddeta * q * rho * rho * p * ph,
            r.deta * l * rho * p * ph,
            (4.0 * t - 1.0) * r.deta * q * rho * p * ph,
            2.0 * t * (2.0 * t - 2.0) * r.eta * q * p * ph,
            2.0 * t * r.eta * l * p * ph,
            -4.0 * r.deta * q * rho * p * d1,
            -2.0 * r.eta * l * p * d1,
            (4.0 - 8.0 * t) * r.eta * q * p * d1,
            4.0 * r.eta * q * p * d2,
        ],
    }
}

/// The remainder `h(y)`: everything in `∂²u_t/∂x₁∂x₂` except the leading term.
pub fn cross12_remainder(params: &BlockParams, y: &[f64]) -> f64 {
    cross12_terms(params, y).remainder()
}

/// Expansion of `∂²u_t/∂x_a∂x_j` on the plateau `|x| <= 1/2`, with `a ∈ {1, 2}`
/// and `j >= 3` (1-based in the formulas, 0-based in the arguments).
///
/// `listed` holds the four classical terms
///
/// ```text
/// 2t x_b x_j ρ^{2t-2} φ,  2t(2t-2) x_a² x_b x_j ρ^{2t-4} φ,
/// (4-8t) x_a² x_b x_j ρ^{2t-4} φ',  4 x_a² x_b x_j ρ^{2t-4} φ''
/// ```
///
/// (`b` the other of 1, 2). Differentiating `x_b ρ^{2t}` also produces
/// `-2 x_b x_j ρ^{2t-2} φ'`, reported separately as `extra`; the entry equals
/// the sum of all five.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateauTerms1j {
    pub listed: [f64; 4],
    pub extra: f64,
}

impl PlateauTerms1j {
    pub fn sum(&self) -> f64 {
        self.listed.iter().sum::<f64>() + self.extra
    }
}

fn plateau_radial(params: &BlockParams, x: &[f64]) -> Result<(f64, Vec<f64>, Radial)> {
    let rho = stable_norm(x);
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(LabError::RadiusOutOfRange(rho));
    }
    Ok((rho, unit(x, rho), Radial::at(params, rho)))
}

pub fn plateau_terms_1j(params: &BlockParams, x: &[f64], a: usize, j: usize) -> Result<PlateauTerms1j> {
    assert!(a < 2 && j >= 2 && j < params.n);
    let (_, w, r) = plateau_radial(params, x)?;
    let b = 1 - a;
    let t = params.t;
    let cubic = w[a] * w[a] * w[b] * w[j] * r.p;
    let lin = w[b] * w[j] * r.p;
    Ok(PlateauTerms1j {
        listed: [
            2.0 * t * lin * r.phi,
            2.0 * t * (2.0 * t - 2.0) * cubic * r.phi,
            (4.0 - 8.0 * t) * cubic * r.dphi,
            4.0 * cubic * r.ddphi,
        ],
        extra: -2.0 * lin * r.dphi,
    })
}

/// Expansion of `∂²u_t/∂x_i∂x_j` on the plateau for distinct `i, j >= 3`:
///
/// ```text
/// 2t(2t-2) x₁x₂x_ix_j ρ^{2t-4} φ,  (4-8t) x₁x₂x_ix_j ρ^{2t-4} φ',  4 x₁x₂x_ix_j ρ^{2t-4} φ''
/// ```
pub fn plateau_terms_ij(params: &BlockParams, x: &[f64], i: usize, j: usize) -> Result<[f64; 3]> {
    assert!(i >= 2 && j >= 2 && i != j && i.max(j) < params.n);
    let (_, w, r) = plateau_radial(params, x)?;
    let t = params.t;
    let q = w[0] * w[1] * w[i] * w[j] * r.p;
    Ok([
        2.0 * t * (2.0 * t - 2.0) * q * r.phi,
        (4.0 - 8.0 * t) * q * r.dphi,
        4.0 * q * r.ddphi,
    ])
}
