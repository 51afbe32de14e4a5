//! The fixed smooth cutoff `η`: identically 1 on `[0, 1/2]`, identically 0 on
//! `[2/3, ∞)`, non-increasing and `C^∞` in between.
//!
//! With `B(x) = exp(-1/x)` for `x > 0` and `B(x) = 0` otherwise,
//!
//! ```text
//! η(s) = B(2/3 - s) / (B(2/3 - s) + B(s - 1/2))
//! ```
//!
//! Inside the transition shell this is the logistic function `1 / (1 + e^z)`
//! with `z = 1/a - 1/b`, `a = 2/3 - s`, `b = s - 1/2`, which is how it is
//! evaluated: no ratio of two vanishing exponentials is ever formed.

/// End of the plateau where `η ≡ 1`.
pub const PLATEAU_END: f64 = 0.5;

/// Start of the region where `η ≡ 0`.
pub const SUPPORT_END: f64 = 2.0 / 3.0;

/// Arguments of `B` at or below this are treated as zero.
const B_GUARD: f64 = 1e-12;

/// Value and first two derivatives of `η` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SmoothCutoff;

impl SmoothCutoff {
    pub fn new() -> Self {
        SmoothCutoff
    }

    pub fn plateau_end(&self) -> f64 {
        PLATEAU_END
    }

    pub fn support_end(&self) -> f64 {
        SUPPORT_END
    }

    pub fn value(&self, s: f64) -> f64 {
        self.jet(s).value
    }

    pub fn d1(&self, s: f64) -> f64 {
        self.jet(s).d1
    }

    pub fn d2(&self, s: f64) -> f64 {
        self.jet(s).d2
    }

    /// `η`, `η'`, `η''` evaluated together.
    pub fn jet(&self, s: f64) -> CutoffJet {
        let a = SUPPORT_END - s;
        let b = s - PLATEAU_END;
        if a <= B_GUARD {
            return CutoffJet {
                value: 0.0,
                d1: 0.0,
                d2: 0.0,
            };
        }
        if b <= B_GUARD {
            return CutoffJet {
                value: 1.0,
                d1: 0.0,
                d2: 0.0,
            };
        }
        let z = 1.0 / a - 1.0 / b;
        let value = 1.0 / (1.0 + z.exp());
        // η(1 - η) = 1 / (4 cosh²(z/2)); underflows cleanly to 0 near the joins.
        let c = (0.5 * z).cosh();
        let p = 1.0 / (4.0 * c * c);
        let dz = 1.0 / (a * a) + 1.0 / (b * b);
        let d2z = 2.0 / (a * a * a) - 2.0 / (b * b * b);
        let d1 = -p * dz;
        let d2 = p * (1.0 - 2.0 * value) * dz * dz - p * d2z;
        CutoffJet { value, d1, d2 }
    }
}

/// Convenience constructor matching the other module entry points.
pub fn make_cutoff() -> SmoothCutoff {
    SmoothCutoff::new()
}
