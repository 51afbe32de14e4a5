//! Radial functions `ω(x) = ψ(|x|)` and a probe-based classifier of their
//! regularity at the origin.
//!
//! Away from the origin
//!
//! ```text
//! ∂ᵢ∂ⱼω = ψ'' xᵢxⱼ/|x|² - ψ' xᵢxⱼ/|x|³            (i ≠ j)
//! ∂ᵢ²ω  = ψ'/|x| + (xᵢ²/|x|²)(ψ'' - ψ'/|x|)
//! Δω    = ψ'' + (n - 1) ψ'/|x|
//! ```
//!
//! so everything at the origin is governed by the behaviour of `ψ'(s)/s` and
//! `ψ''(s)` as `s → 0`:
//!
//! | `ψ'/s`  | `ψ''`              | class                                  |
//! |---------|--------------------|----------------------------------------|
//! | no limit| any                | not twice differentiable               |
//! | limit   | limit              | `C²`                                   |
//! | limit   | bounded, no limit  | twice differentiable, bounded Hessian  |
//! | limit   | unbounded          | twice differentiable, unbounded Hessian|
//!
//! A limit is never decided exactly. The probes sit at `s = 2^{-j}` and the
//! verdicts are thresholds on the spread of the tail.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::block::{stable_norm, PointEval};
use crate::error::{LabError, Result};

/// First and last dyadic exponent of the probe grid.
pub const PROBE_EXPONENTS: (u32, u32) = (4, 40);

/// Probes with exponent at least this form the tail examined for limits.
pub const TAIL_START: u32 = 20;

/// Tail spread below which a limit is declared.
pub const CONVERGED_SPREAD: f64 = 1e-3;

/// Tail spread at or above which the sequence is declared oscillating.
pub const OSCILLATING_SPREAD: f64 = 0.1;

/// Growth of the tail envelope (last third over first third) that counts as
/// unbounded.
const ENVELOPE_GROWTH: f64 = 10.0;

type RealFn = fn(f64) -> f64;

/// `ψ` with closed-form first and second derivatives.
#[derive(Debug, Clone, Copy)]
pub struct RadialProfile {
    pub name: &'static str,
    pub psi: RealFn,
    pub psi1: RealFn,
    pub psi2: RealFn,
}

impl RadialProfile {
    /// `ψ(s) = s²`.
    pub fn quadratic() -> Self {
        Self {
            name: "s^2",
            psi: |s| s * s,
            psi1: |s| 2.0 * s,
            psi2: |_| 2.0,
        }
    }

    /// `ψ(s) = s⁴ sin(1/s)`.
    pub fn quartic_sine() -> Self {
        Self {
            name: "s^4 sin(1/s)",
            psi: |s| s.powi(4) * (1.0 / s).sin(),
            psi1: |s| 4.0 * s.powi(3) * (1.0 / s).sin() - s * s * (1.0 / s).cos(),
            psi2: |s| {
                let (sn, cs) = (1.0 / s).sin_cos();
                12.0 * s * s * sn - 6.0 * s * cs - sn
            },
        }
    }

    /// `ψ(s) = s³ sin(1/s)`.
    pub fn cubic_sine() -> Self {
        Self {
            name: "s^3 sin(1/s)",
            psi: |s| s.powi(3) * (1.0 / s).sin(),
            psi1: |s| 3.0 * s * s * (1.0 / s).sin() - s * (1.0 / s).cos(),
            psi2: |s| {
                let (sn, cs) = (1.0 / s).sin_cos();
                6.0 * s * sn - 4.0 * cs - sn / s
            },
        }
    }

    /// `ψ(s) = s⁵ sin(1/s²)`: `ψ'/s → 0` while `ψ''` oscillates with an
    /// envelope of order `1/s`.
    pub fn quintic_fast_sine() -> Self {
        Self {
            name: "s^5 sin(1/s^2)",
            psi: |s| s.powi(5) * (1.0 / (s * s)).sin(),
            psi1: |s| {
                let (sn, cs) = (1.0 / (s * s)).sin_cos();
                5.0 * s.powi(4) * sn - 2.0 * s * s * cs
            },
            psi2: |s| {
                let (sn, cs) = (1.0 / (s * s)).sin_cos();
                20.0 * s.powi(3) * sn - 14.0 * s * cs - 4.0 * sn / s
            },
        }
    }

    /// `ψ(s) = s² ln(-ln s)` on `0 < s < 1`, the radial analogue of a
    /// logarithmically divergent second derivative.
    pub fn quadratic_loglog() -> Self {
        Self {
            name: "s^2 ln(-ln s)",
            psi: |s| s * s * (-s.ln()).ln(),
            psi1: |s| {
                let l = -s.ln();
                2.0 * s * l.ln() - s / l
            },
            psi2: |s| {
                let l = -s.ln();
                2.0 * l.ln() - 3.0 / l - 1.0 / (l * l)
            },
        }
    }

    pub fn builtins() -> Vec<Self> {
        vec![
            Self::quadratic(),
            Self::quartic_sine(),
            Self::cubic_sine(),
            Self::quintic_fast_sine(),
            Self::quadratic_loglog(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::builtins().into_iter().find(|p| p.name == name)
    }
}

/// Value, gradient and hessian of `ω = ψ(|x|)` at `x ≠ 0`.
pub fn radial_hessian(profile: &RadialProfile, x: &[f64]) -> Result<PointEval> {
    let rho = stable_norm(x);
    if rho == 0.0 {
        return Err(LabError::Origin);
    }
    let n = x.len();
    let (d1, d2) = ((profile.psi1)(rho), (profile.psi2)(rho));
    let w: Vec<f64> = x.iter().map(|v| v / rho).collect();
    let gradient = DVector::from_fn(n, |i, _| d1 * w[i]);
    let hessian = DMatrix::from_fn(n, n, |i, j| {
        let outer = w[i] * w[j] * (d2 - d1 / rho);
        if i == j {
            d1 / rho + outer
        } else {
            outer
        }
    });
    let mut pe = PointEval::new(x, (profile.psi)(rho), gradient, hessian);
    pe.laplacian = d2 + (n as f64 - 1.0) * d1 / rho;
    Ok(pe)
}

/// Verdict on a probed sequence as `s → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LimitVerdict {
    Finite(f64),
    AbsentBounded,
    AbsentUnbounded,
    Inconclusive,
}

impl LimitVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, LimitVerdict::Finite(_))
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, LimitVerdict::Finite(_) | LimitVerdict::AbsentBounded)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadialClass {
    NotTwiceDifferentiable,
    C2,
    TwiceDiffBoundedDiscontinuousHessian,
    TwiceDiffUnboundedHessian,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub s: f64,
    pub psi: f64,
    pub psi1: f64,
    pub psi1_over_s: f64,
    pub psi2: f64,
    /// `Δω` in dimension three.
    pub laplacian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialReport {
    pub schema: u32,
    pub profile: String,
    /// Probes per dyadic step.
    pub refinement: u32,
    pub lim_psi1_over_s: LimitVerdict,
    pub lim_psi2: LimitVerdict,
    pub lim_laplacian: LimitVerdict,
    pub classification: RadialClass,
    /// `ψ → 0` and `ψ' → 0` on the probes.
    pub hypotheses_hold: bool,
    /// The limit of `Δω` is detected exactly when the class is `C²`.
    pub laplacian_matches_c2: bool,
    /// A detected limit of `ψ''` comes with the same limit of `ψ'/s`.
    pub lhopital_consistent: bool,
    /// Twice differentiable with bounded `Δω` forces bounded `ψ''`.
    pub bounded_laplacian_forces_bounded_hessian: bool,
    /// Same class with twice as many probes.
    pub refinement_stable: bool,
    pub probes: Vec<ProbeRow>,
}

/// Probe radii `2^{-j/refine}` for `j` covering [`PROBE_EXPONENTS`].
pub fn probe_grid(refine: u32) -> Vec<f64> {
    let (a, b) = PROBE_EXPONENTS;
    (a * refine..=b * refine)
        .map(|j| 2f64.powf(-(j as f64) / refine as f64))
        .collect()
}

/// Classifies the tail of `values` (ordered by decreasing `s`).
pub fn limit_verdict(values: &[f64]) -> LimitVerdict {
    let spread = values.iter().copied().fold(f64::MIN, f64::max) - values.iter().copied().fold(f64::MAX, f64::min);
    if !spread.is_finite() {
        return LimitVerdict::Inconclusive;
    }
    if spread < CONVERGED_SPREAD {
        return LimitVerdict::Finite(*values.last().expect("non-empty tail"));
    }
    if spread < OSCILLATING_SPREAD {
        return LimitVerdict::Inconclusive;
    }
    let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let third = abs.len() / 3;
    let head = abs[..third].iter().copied().fold(0.0, f64::max);
    let tail = abs[abs.len() - third..].iter().copied().fold(0.0, f64::max);
    let monotone = abs.windows(2).all(|w| w[1] >= w[0]);
    if monotone || tail > ENVELOPE_GROWTH * head {
        LimitVerdict::AbsentUnbounded
    } else if tail <= 2.0 * head {
        LimitVerdict::AbsentBounded
    } else {
        LimitVerdict::Inconclusive
    }
}

fn classify(psi1_over_s: LimitVerdict, psi2: LimitVerdict) -> RadialClass {
    use LimitVerdict::*;
    match (psi1_over_s, psi2) {
        (Inconclusive, _) => RadialClass::Inconclusive,
        (AbsentBounded | AbsentUnbounded, _) => RadialClass::NotTwiceDifferentiable,
        (Finite(_), Finite(_)) => RadialClass::C2,
        (Finite(_), AbsentBounded) => RadialClass::TwiceDiffBoundedDiscontinuousHessian,
        (Finite(_), AbsentUnbounded) => RadialClass::TwiceDiffUnboundedHessian,
        (Finite(_), Inconclusive) => RadialClass::Inconclusive,
    }
}

/// Classification on the probe grid refined `refine` times.
pub fn classify_radial_with(profile: &RadialProfile, refine: u32) -> RadialReport {
    assert!(refine >= 1);
    let probes: Vec<ProbeRow> = probe_grid(refine)
        .into_iter()
        .map(|s| {
            let (psi, psi1, psi2) = ((profile.psi)(s), (profile.psi1)(s), (profile.psi2)(s));
            ProbeRow {
                s,
                psi,
                psi1,
                psi1_over_s: psi1 / s,
                psi2,
                laplacian: psi2 + 2.0 * psi1 / s,
            }
        })
        .collect();
    let tail: Vec<&ProbeRow> = probes
        .iter()
        .filter(|p| p.s <= 2f64.powi(-(TAIL_START as i32)))
        .collect();
    let col = |f: fn(&ProbeRow) -> f64| -> Vec<f64> { tail.iter().map(|p| f(p)).collect() };
    let lim_psi1_over_s = limit_verdict(&col(|p| p.psi1_over_s));
    let lim_psi2 = limit_verdict(&col(|p| p.psi2));
    let lim_laplacian = limit_verdict(&col(|p| p.laplacian));
    let classification = classify(lim_psi1_over_s, lim_psi2);

    let last = tail.last().expect("non-empty tail");
    let hypotheses_hold = last.psi.abs() < 1e-9 && last.psi1.abs() < 1e-9;
    let laplacian_matches_c2 = lim_laplacian.is_finite() == (classification == RadialClass::C2);
    let lhopital_consistent = match (lim_psi2, lim_psi1_over_s) {
        (LimitVerdict::Finite(a), LimitVerdict::Finite(b)) => (a - b).abs() < CONVERGED_SPREAD,
        (LimitVerdict::Finite(_), _) => false,
        _ => true,
    };
    let bounded_laplacian_forces_bounded_hessian =
        !(lim_psi1_over_s.is_finite() && lim_laplacian.is_bounded()) || lim_psi2.is_bounded();

    RadialReport {
        schema: 1,
        profile: profile.name.to_string(),
        refinement: refine,
        lim_psi1_over_s,
        lim_psi2,
        lim_laplacian,
        classification,
        hypotheses_hold,
        laplacian_matches_c2,
        lhopital_consistent,
        bounded_laplacian_forces_bounded_hessian,
        refinement_stable: true,
        probes,
    }
}

/// Classification on the base grid, cross-checked against the grid refined ×2.
pub fn classify_radial(profile: &RadialProfile) -> RadialReport {
    let mut rep = classify_radial_with(profile, 1);
    rep.refinement_stable = classify_radial_with(profile, 2).classification == rep.classification;
    rep
}
