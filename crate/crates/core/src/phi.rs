//! Slowly growing profiles `φ` with `φ → ∞` and `φ', φ'' → 0` at infinity.
//!
//! The profiles are composed as `φ(-ln |x|²)` throughout the crate, which turns
//! the growth at `s → ∞` into a controlled blow-up at the origin. Each built-in
//! profile carries closed-form first and second derivatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Probe abscissae used to certify the decay conditions at infinity.
pub const DECAY_PROBES: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6];

/// Allowed growth factor between consecutive probes for `|φ'|` and `|φ''|`.
pub const DECAY_SLACK: f64 = 1.05;

/// Upper bound required of `|φ'|`, `|φ''|` at the last probe.
pub const DECAY_TAIL: f64 = 1e-3;

/// Default log-grid resolution.
pub const POINTS_PER_DECADE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhiKind {
    /// `s^α` with `0 < α < 1`.
    Power(f64),
    /// `ln s`.
    Log,
    /// `ln(ln(s + e))`: the iterated logarithm shifted so it is defined for all `s > 0`.
    ShiftedLogLog,
}

/// An admissible profile together with its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePhi {
    kind: PhiKind,
}

impl AdmissiblePhi {
    /// Builds a profile, rejecting power exponents outside `(0, 1)`.
    pub fn new(kind: PhiKind) -> Result<Self> {
        if let PhiKind::Power(alpha) = kind {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(LabError::ExponentOutOfRange(alpha));
            }
        }
        Ok(Self { kind })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(PhiKind::Power(alpha))
    }

    pub fn log() -> Self {
        Self { kind: PhiKind::Log }
    }

    pub fn shifted_loglog() -> Self {
        Self {
            kind: PhiKind::ShiftedLogLog,
        }
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    /// Selector string, the same syntax accepted by [`FromStr`].
    pub fn name(&self) -> String {
        match self.kind {
            PhiKind::Power(a) => format!("pow:{a}"),
            PhiKind::Log => "log".to_string(),
            PhiKind::ShiftedLogLog => "loglog".to_string(),
        }
    }

    /// The profile is defined for `s > s_min`.
    pub fn s_min(&self) -> f64 {
        0.0
    }

    pub fn value(&self, s: f64) -> f64 {
        match self.kind {
            PhiKind::Power(a) => s.powf(a),
            PhiKind::Log => s.ln(),
            PhiKind::ShiftedLogLog => (s + std::f64::consts::E).ln().ln(),
        }
    }

    pub fn d1(&self, s: f64) -> f64 {
        match self.kind {
            PhiKind::Power(a) => a * s.powf(a - 1.0),
            PhiKind::Log => 1.0 / s,
            PhiKind::ShiftedLogLog => {
                let u = s + std::f64::consts::E;
                1.0 / (u * u.ln())
            }
        }
    }

    pub fn d2(&self, s: f64) -> f64 {
        match self.kind {
            PhiKind::Power(a) => a * (a - 1.0) * s.powf(a - 2.0),
            PhiKind::Log => -1.0 / (s * s),
            PhiKind::ShiftedLogLog => {
                let u = s + std::f64::consts::E;
                let l = u.ln();
                -(l + 1.0) / (u * u * l * l)
            }
        }
    }

    /// Whether `φ^{n-1} φ' → 0` and `φ^{n-1} φ'' → 0` at infinity.
    ///
    /// For `s^α` the two products are `α s^{nα-1}` and `α(α-1) s^{nα-2}`, so the
    /// flag holds exactly when `nα < 1`. Logarithmic profiles qualify for every `n`.
    pub fn ma_ready(&self, n: usize) -> bool {
        match self.kind {
            PhiKind::Power(a) => (n as f64) * a < 1.0,
            PhiKind::Log | PhiKind::ShiftedLogLog => true,
        }
    }

    /// Probe-grid certificate for the growth and decay conditions at infinity.
    pub fn certify_decay(&self) -> DecayReport {
        let values: Vec<f64> = DECAY_PROBES.iter().map(|&s| self.value(s)).collect();
        let d1: Vec<f64> = DECAY_PROBES.iter().map(|&s| self.d1(s).abs()).collect();
        let d2: Vec<f64> = DECAY_PROBES.iter().map(|&s| self.d2(s).abs()).collect();
        let finite = values
            .iter()
            .chain(&d1)
            .chain(&d2)
            .all(|v| v.is_finite());
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let decaying = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] * DECAY_SLACK);
        let last = DECAY_PROBES.len() - 1;
        let passed = finite
            && increasing
            && decaying(&d1)
            && decaying(&d2)
            && d1[last] < DECAY_TAIL
            && d2[last] < DECAY_TAIL;
        DecayReport {
            probes: DECAY_PROBES.to_vec(),
            values,
            abs_d1: d1,
            abs_d2: d2,
            increasing,
            passed,
        }
    }
}

impl fmt::Display for AdmissiblePhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for AdmissiblePhi {
    type Err = LabError;

    /// Accepts `log`, `loglog` and `pow:<alpha>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "log" => Ok(Self::log()),
            "loglog" => Ok(Self::shifted_loglog()),
            other => {
                let alpha = other
                    .strip_prefix("pow:")
                    .ok_or_else(|| LabError::Config(format!("unknown profile `{other}`")))?;
                let alpha: f64 = alpha
                    .parse()
                    .map_err(|_| LabError::Config(format!("bad exponent in `{other}`")))?;
                Self::power(alpha)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub probes: Vec<f64>,
    pub values: Vec<f64>,
    pub abs_d1: Vec<f64>,
    pub abs_d2: Vec<f64>,
    pub increasing: bool,
    pub passed: bool,
}

/// `n` points per decade from `lo` to `hi` inclusive, geometrically spaced.
pub fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_decade > 0);
    let (a, b) = (lo.log10(), hi.log10());
    let steps = ((b - a) * per_decade as f64).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / steps as f64))
        .collect()
}

/// `|x|^β φ(-ln |x|²)` for each radius.
pub fn weighted_profile(phi: &AdmissiblePhi, beta: f64, radii: &[f64]) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return Err(LabError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must be positive",
        });
    }
    for (i, &r) in radii.iter().enumerate() {
        if !(r > 0.0 && r < 1.0) {
            return Err(LabError::RadiusOutOfRange(r));
        }
        if i > 0 && r >= radii[i - 1] {
            return Err(LabError::InvalidParameter {
                name: "radius",
                value: r,
                reason: "radii must be strictly decreasing",
            });
        }
    }
    Ok(radii
        .iter()
        .map(|&r| (beta * r.ln()).exp() * phi.value(-2.0 * r.ln()))
        .collect())
}

/// Sampled `sup β ρ^β |φ(-ln ρ²)|` over the product of both grids.
pub fn weighted_sup(phi: &AdmissiblePhi, betas: &[f64], radii: &[f64]) -> Result<f64> {
    if betas.is_empty() || radii.is_empty() {
        return Err(LabError::InvalidParameter {
            name: "grid",
            value: 0.0,
            reason: "grids must be non-empty",
        });
    }
    if let Some(&b) = betas.iter().find(|&&b| !(b > 0.0 && b <= 1.0)) {
        return Err(LabError::InvalidParameter {
            name: "beta",
            value: b,
            reason: "must lie in (0, 1]",
        });
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r <= 2.0 / 3.0)) {
        return Err(LabError::RadiusOutOfRange(r));
    }
    // Precompute (ln ρ, |φ(-2 ln ρ)|) once per radius.
    let cols: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let l = r.ln();
            (l, phi.value(-2.0 * l).abs())
        })
        .collect();
    let mut best = 0.0f64;
    for &b in betas {
        for &(l, p) in &cols {
            best = best.max(b * (b * l).exp() * p);
        }
    }
    Ok(best)
}

/// Default grids for [`weighted_sup`]: `β ∈ [10⁻³, 1]` and `ρ ∈ [10⁻³⁰⁰, 2/3]`.
///
/// `beta_per_decade` and `rho_per_decade` control the resolution; the radius
/// floor keeps `ρ` representable while still reaching the maximiser for every
/// `β` in the grid.
pub fn weighted_sup_default_grids(beta_per_decade: usize, rho_per_decade: usize) -> (Vec<f64>, Vec<f64>) {
    (
        log_spaced(1e-3, 1.0, beta_per_decade),
        log_spaced(1e-300, 2.0 / 3.0, rho_per_decade),
    )
}

/// The divergence witness: radius `e^{-1/β}` and the value `e^{-1} φ(2/β)` there.
pub fn divergence_witness(phi: &AdmissiblePhi, beta: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(LabError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must lie in (0, 1)",
        });
    }
    Ok(((-1.0 / beta).exp(), (-1.0f64).exp() * phi.value(2.0 / beta)))
}
