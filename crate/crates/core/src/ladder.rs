//! The full construction
//!
//! ```text
//! u(x) = Σ_k ε_k r_k² [ u_{t_k}((x - R_k ζ₀)/r_k) - u_{t_k}((x + R_k ζ₀)/r_k) ]
//! ```
//!
//! with `R_k = 10^{-k}`, `r_k = 10^{-(k+1)}`, `ζ₀ = (1/√2, …, 1/√2)` and
//! `ε_k = 1/M_k`, truncated at level `K`. The single-sum variant keeps only the
//! balls around `+R_k ζ₀`.
//!
//! `M_k` is the supremum of `|x|^{2t_k} φ(-ln |x|²)` over `|x| <= 2/3`. That
//! expression depends on `|x|` alone, so with `s = -ln |x|²` it reduces to the
//! one-dimensional problem `max e^{-t s} φ(s)` over `s >= -2 ln(2/3)`.
//!
//! Block evaluations always go through local coordinates `y`. Forming
//! `x - R_k ζ₀` from a global `x` near level 12 already loses every digit of
//! the witness offsets, which is why [`MAX_LEVELS`] caps the depth.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::Serialize;

use crate::block::{block_eval, cross12_remainder, stable_norm, BlockParams, PointEval};
use crate::cutoff::{SmoothCutoff, PLATEAU_END, SUPPORT_END};
use crate::error::{LabError, Result};
use crate::phi::AdmissiblePhi;
use crate::sampling::{ball_points, shell_points};
use crate::search::{bisect, bracket_max, golden_max};

/// Deepest supported truncation.
pub const MAX_LEVELS: usize = 12;

/// Default truncation depth.
pub const DEFAULT_LEVELS: usize = 10;

/// Relative tolerance of the golden-section refinement of `M_k`.
const MK_TOL: f64 = 1e-12;

/// Required relative residual of the witness equation `h(s_w) = M/2`.
const WITNESS_TOL: f64 = 1e-10;

/// Search horizon in `s`; `s = 1400` already corresponds to `|x| ~ 1e-304`.
const S_HORIZON: f64 = 1e15;

/// `-2 ln(2/3)`, the smallest `s` inside the support.
pub fn s_floor() -> f64 {
    -2.0 * SUPPORT_END.ln()
}

/// The rule producing `t_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TRule {
    /// `t_k = c / (k + 1)`, with `0 < c < 1/2` so that `t_1 < 1/4`.
    Reciprocal(f64),
}

impl Default for TRule {
    fn default() -> Self {
        TRule::Reciprocal(0.25)
    }
}

impl TRule {
    pub fn t(&self, k: usize) -> f64 {
        match *self {
            TRule::Reciprocal(c) => c / (k as f64 + 1.0),
        }
    }
}

impl fmt::Display for TRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TRule::Reciprocal(c) => write!(f, "recip:{c}"),
        }
    }
}

impl FromStr for TRule {
    type Err = LabError;

    /// `default` or `recip:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "default" {
            return Ok(TRule::default());
        }
        let c: f64 = s
            .strip_prefix("recip:")
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| LabError::Config(format!("unknown t rule `{s}`")))?;
        if !(c > 0.0 && c < 0.5) {
            return Err(LabError::Config(format!("t rule constant {c} must lie in (0, 1/2)")));
        }
        Ok(TRule::Reciprocal(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderParams {
    pub n: usize,
    pub phi: AdmissiblePhi,
    #[serde(skip)]
    pub eta: SmoothCutoff,
    /// Truncation depth `K`; levels run over `1..=K`.
    pub levels: usize,
    pub t_rule: TRule,
    /// Two-sum construction when true, single sum over `+R_k ζ₀` otherwise.
    pub signed: bool,
}

impl LadderParams {
    pub fn new(n: usize, phi: AdmissiblePhi) -> Self {
        Self {
            n,
            phi,
            eta: SmoothCutoff::new(),
            levels: DEFAULT_LEVELS,
            t_rule: TRule::default(),
            signed: true,
        }
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = levels;
        self
    }

    pub fn with_signed(mut self, signed: bool) -> Self {
        self.signed = signed;
        self
    }

    pub fn with_t_rule(mut self, rule: TRule) -> Self {
        self.t_rule = rule;
        self
    }

    pub fn big_r(&self, k: usize) -> f64 {
        10f64.powi(-(k as i32))
    }

    pub fn small_r(&self, k: usize) -> f64 {
        10f64.powi(-(k as i32 + 1))
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t_rule.t(k)
    }

    pub fn zeta0(&self) -> Vec<f64> {
        vec![std::f64::consts::FRAC_1_SQRT_2; self.n]
    }

    /// Checks every structural requirement of the ladder.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(LabError::InvalidParameter {
                name: "dim",
                value: self.n as f64,
                reason: "dimension must be at least 2",
            });
        }
        if self.levels == 0 || self.levels > MAX_LEVELS {
            return Err(LabError::InvalidParameter {
                name: "K",
                value: self.levels as f64,
                reason: "truncation depth must lie in 1..=12",
            });
        }
        for k in 1..=self.levels {
            let (big, small, t) = (self.big_r(k), self.small_r(k), self.t(k));
            if !(t > 0.0 && t < 0.25) {
                return Err(LabError::Geometry {
                    level: k,
                    what: format!("t_k = {t} is outside (0, 1/4)"),
                });
            }
            if k > 1 && t >= self.t(k - 1) {
                return Err(LabError::Geometry {
                    level: k,
                    what: "t_k is not strictly decreasing".into(),
                });
            }
            if big - small <= self.big_r(k + 1) + self.small_r(k + 1) {
                return Err(LabError::Geometry {
                    level: k,
                    what: "R_k - r_k <= R_{k+1} + r_{k+1}".into(),
                });
            }
            if big * std::f64::consts::FRAC_1_SQRT_2 <= SUPPORT_END * small {
                return Err(LabError::Geometry {
                    level: k,
                    what: "support ball meets a coordinate hyperplane".into(),
                });
            }
        }
        Ok(())
    }
}

/// Maximiser of `h(s) = e^{-ts} φ(s)` over `s >= -2 ln(2/3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MkResult {
    pub m: f64,
    pub s_star: f64,
    /// False when the maximum sits on the boundary `s = -2 ln(2/3)`.
    pub interior: bool,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

fn radial_h(phi: &AdmissiblePhi, t: f64, s: f64) -> f64 {
    (-t * s).exp() * phi.value(s)
}

pub fn compute_mk(phi: &AdmissiblePhi, t: f64) -> Result<MkResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be positive",
        });
    }
    let h = |s: f64| radial_h(phi, t, s);
    let s0 = s_floor();
    let b = bracket_max(h, s0, 1.25, 1e-2, S_HORIZON).ok_or(LabError::NotEventuallyDecreasing { t })?;
    let m = golden_max(h, b.lo, b.hi, MK_TOL);
    let interior = m.x > s0 * (1.0 + 1e-9);
    Ok(MkResult {
        m: m.value,
        s_star: m.x,
        interior,
        bracket: (b.lo, b.hi),
        iterations: b.steps + m.iterations,
    })
}

/// Root `s_w > s*` of `h(s) = M/2` on the decreasing branch.
pub fn solve_witness_radius(phi: &AdmissiblePhi, t: f64, mk: &MkResult) -> Result<(f64, usize)> {
    let target = 0.5 * mk.m;
    let f = |s: f64| radial_h(phi, t, s) - target;
    let lo = mk.s_star;
    let mut hi = lo.max(1.0) * 2.0;
    while f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > S_HORIZON {
            return Err(LabError::NotEventuallyDecreasing { t });
        }
    }
    let root = bisect(f, lo, hi, 1e-15).ok_or(LabError::NotEventuallyDecreasing { t })?;
    let resid = (radial_h(phi, t, root.x) - target).abs() / target;
    if resid > WITNESS_TOL {
        return Err(LabError::InvalidParameter {
            name: "witness residual",
            value: resid,
            reason: "bisection did not reach the required accuracy",
        });
    }
    Ok((root.x, root.iterations))
}

/// Everything computed for one level of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub k: usize,
    pub t: f64,
    pub big_r: f64,
    pub small_r: f64,
    pub mk: MkResult,
    pub eps: f64,
    /// `s_w` with `|y| = e^{-s_w/2}`; `None` when that radius exceeds 1/2.
    pub witness_s: Option<f64>,
    pub witness_iterations: usize,
}

impl Level {
    pub fn witness_norm(&self) -> Option<f64> {
        self.witness_s.map(|s| (-0.5 * s).exp())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ladder {
    pub params: LadderParams,
    pub levels: Vec<Level>,
}

/// Which support ball contains a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BallLocation {
    Outside,
    Plus(usize),
    Minus(usize),
}

pub fn build_ladder(params: LadderParams) -> Result<Ladder> {
    params.validate()?;
    let mut levels = Vec::with_capacity(params.levels);
    for k in 1..=params.levels {
        let t = params.t(k);
        let mk = compute_mk(&params.phi, t)?;
        let (s_w, iters) = solve_witness_radius(&params.phi, t, &mk)?;
        let usable = (-0.5 * s_w).exp() <= PLATEAU_END;
        levels.push(Level {
            k,
            t,
            big_r: params.big_r(k),
            small_r: params.small_r(k),
            mk,
            eps: 1.0 / mk.m,
            witness_s: usable.then_some(s_w),
            witness_iterations: iters,
        });
    }
    Ok(Ladder { params, levels })
}

/// Sign attached to the balls around `±R_k ζ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Ladder {
    pub fn level(&self, k: usize) -> &Level {
        &self.levels[k - 1]
    }

    pub fn block(&self, k: usize) -> BlockParams {
        BlockParams::new(self.level(k).t, self.params.n, self.params.phi).expect("validated ladder")
    }

    /// Center of the ball on the given side at level `k`.
    pub fn center(&self, k: usize, side: Side) -> Vec<f64> {
        let sign = match side {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        };
        let c = sign * self.level(k).big_r * std::f64::consts::FRAC_1_SQRT_2;
        vec![c; self.params.n]
    }

    /// Maps local coordinates to the global point `±R_k ζ₀ + r_k y`.
    pub fn to_global(&self, k: usize, side: Side, y: &[f64]) -> Vec<f64> {
        let r = self.level(k).small_r;
        self.center(k, side).iter().zip(y).map(|(c, v)| c + r * v).collect()
    }

    pub fn locate_ball(&self, x: &[f64]) -> BallLocation {
        for lvl in &self.levels {
            for side in [Side::Plus, Side::Minus] {
                if side == Side::Minus && !self.params.signed {
                    continue;
                }
                let c = self.center(lvl.k, side);
                let d: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
                if stable_norm(&d) < SUPPORT_END * lvl.small_r {
                    return match side {
                        Side::Plus => BallLocation::Plus(lvl.k),
                        Side::Minus => BallLocation::Minus(lvl.k),
                    };
                }
            }
        }
        BallLocation::Outside
    }

    /// `u` and its derivatives at `±R_k ζ₀ + r_k y`, evaluated from `y`.
    pub fn eval_local(&self, k: usize, side: Side, y: &[f64]) -> PointEval {
        let x = self.to_global(k, side, y);
        if side == Side::Minus && !self.params.signed {
            return PointEval::zeros(&x);
        }
        let lvl = self.level(k);
        let sign = match side {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        };
        let r = lvl.small_r;
        let e = sign * lvl.eps;
        block_eval(&self.block(k), y).scaled(&x, e * r * r, e * r, e)
    }

    pub fn u_eval(&self, x: &[f64]) -> PointEval {
        let (k, side) = match self.locate_ball(x) {
            BallLocation::Outside => return PointEval::zeros(x),
            BallLocation::Plus(k) => (k, Side::Plus),
            BallLocation::Minus(k) => (k, Side::Minus),
        };
        let c = self.center(k, side);
        let r = self.level(k).small_r;
        let y: Vec<f64> = x.iter().zip(&c).map(|(a, b)| (a - b) / r).collect();
        let mut e = self.eval_local(k, side, &y);
        e.point = DVector::from_column_slice(x);
        e
    }

    /// `|u(x)| / |x|²`, zero at the origin.
    pub fn taylor_remainder(&self, x: &[f64]) -> f64 {
        let rho = stable_norm(x);
        if rho == 0.0 {
            return 0.0;
        }
        self.u_eval(x).value.abs() / (rho * rho)
    }

    /// Same as [`Ladder::taylor_remainder`] for the point `±R_k ζ₀ + r_k y`.
    pub fn taylor_remainder_local(&self, k: usize, side: Side, y: &[f64]) -> f64 {
        let x = self.to_global(k, side, y);
        let rho = stable_norm(&x);
        self.eval_local(k, side, y).value.abs() / (rho * rho)
    }

    /// `ε_k C / (R_k/r_k - 2/3)²`, the level-`k` bound on `|u(x)|/|x|²`.
    pub fn taylor_bound(&self, k: usize, c_value: f64) -> f64 {
        let lvl = self.level(k);
        let q = lvl.big_r / lvl.small_r - SUPPORT_END;
        lvl.eps * c_value / (q * q)
    }

    /// The witness point `y^{(k)} = |y| (e₁ + e₂)/√2`, if the level has one.
    pub fn witness_point(&self, k: usize) -> Option<Vec<f64>> {
        let rho = self.level(k).witness_norm()?;
        let mut y = vec![0.0; self.params.n];
        y[0] = rho * std::f64::consts::FRAC_1_SQRT_2;
        y[1] = y[0];
        Some(y)
    }

    pub fn witness_sequence(&self) -> Vec<WitnessRecord> {
        self.levels
            .iter()
            .filter_map(|lvl| {
                let y = self.witness_point(lvl.k)?;
                let plus = self.eval_local(lvl.k, Side::Plus, &y);
                let minus = self.eval_local(lvl.k, Side::Minus, &y);
                let h = cross12_remainder(&self.block(lvl.k), &y);
                let hess12_plus = plus.hessian[(0, 1)];
                Some(WitnessRecord {
                    k: lvl.k,
                    y_norm: stable_norm(&y),
                    mk: lvl.mk.m,
                    eps: lvl.eps,
                    x_plus: self.to_global(lvl.k, Side::Plus, &y),
                    x_minus: self.to_global(lvl.k, Side::Minus, &y),
                    grad_norm_plus: plus.gradient.norm(),
                    hess12_plus,
                    hess12_minus: minus.hessian[(0, 1)],
                    eps_h: lvl.eps * h,
                    residual: hess12_plus - 0.5,
                    y_point: y,
                })
            })
            .collect()
    }
}

/// Local sample points for one ball: half quasi-uniform in the support ball
/// `|y| < 2/3`, half spread uniformly in `ln |y|` down to `|y| = 1e-40`, where
/// the slowly varying factor `|y|^{2t} φ` peaks for small `t`.
pub fn level_samples(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let uniform = count / 2;
    let mut pts = ball_points(n, SUPPORT_END, uniform, seed);
    pts.extend(shell_points(n, 1e-40, SUPPORT_END, count - uniform, seed));
    pts
}

/// The cross entry of the hessian at the witness pair of one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub k: usize,
    pub y_point: Vec<f64>,
    pub y_norm: f64,
    pub mk: f64,
    pub eps: f64,
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub grad_norm_plus: f64,
    pub hess12_plus: f64,
    pub hess12_minus: f64,
    /// `ε_k h(y^{(k)})`.
    pub eps_h: f64,
    /// `hess12_plus - 1/2`.
    pub residual: f64,
}

pub const WITNESS_CSV_HEADER: &str = "k,y_norm,Mk,eps_k,hess12_plus,hess12_minus,residual";

pub fn witness_csv(records: &[WitnessRecord]) -> String {
    let mut out = String::from(WITNESS_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.k, r.y_norm, r.mk, r.eps, r.hess12_plus, r.hess12_minus, r.residual
        ));
    }
    out
}
