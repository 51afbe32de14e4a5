//! One-dimensional maximisation and root finding on the radial variable.

/// `(√5 - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping when the bracket width falls below `rel_tol · max(1, |x|)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Maximum {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iterations = 0;
    while hi - lo > rel_tol * lo.abs().max(hi.abs()).max(1.0) && iterations < 500 {
        iterations += 1;
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    // Report the best evaluated point, endpoints included.
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    Maximum {
        x: best.0,
        value: best.1,
        iterations,
    }
}

/// Result of scanning a geometric grid upward from `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    /// Grid point with the largest value.
    pub best: f64,
    pub steps: usize,
}

/// Walks `start, start·q, start·q², …` while tracking the running maximum, and
/// stops once the function has dropped below `drop · max` after the maximum.
/// Returns `None` if that never happens before `horizon`.
pub fn bracket_max<F: Fn(f64) -> f64>(f: F, start: f64, q: f64, drop: f64, horizon: f64) -> Option<Bracket> {
    assert!(start > 0.0 && q > 1.0);
    let mut xs = vec![start];
    let mut best_i = 0;
    let mut best_v = f(start);
    let mut x = start;
    loop {
        x *= q;
        if x > horizon {
            return None;
        }
        let v = f(x);
        xs.push(x);
        if v > best_v {
            best_v = v;
            best_i = xs.len() - 1;
        } else if v < best_v - drop * best_v.abs() {
            let lo = if best_i == 0 { xs[0] } else { xs[best_i - 1] };
            return Some(Bracket {
                lo,
                hi: xs[best_i + 1],
                best: xs[best_i],
                steps: xs.len(),
            });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Bisection for `f(x) = 0` given `f(lo)` and `f(hi)` of opposite sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Option<Root> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(Root { x: lo, iterations: 0 });
    }
    if fhi == 0.0 {
        return Some(Root { x: hi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let mut iterations = 0;
    while hi - lo > rel_tol * lo.abs().max(hi.abs()) && iterations < 2000 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(Root { x: mid, iterations });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(Root {
        x: 0.5 * (lo + hi),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_on_parabola() {
        let m = golden_max(|x| -(x - 0.2).powi(2), -1.0, 1.0, 1e-12);
        assert!((m.x - 0.2).abs() < 1e-7);
        assert!(m.value <= 0.0 && m.value > -1e-14);
    }

    #[test]
    fn golden_boundary_maximum() {
        let m = golden_max(|x| -x, 2.0, 5.0, 1e-12);
        assert_eq!(m.x, 2.0);
    }

    #[test]
    fn bracket_then_refine() {
        let f = |s: f64| (-0.1 * s).exp() * s.sqrt();
        let b = bracket_max(f, 0.81, 1.25, 0.5, 1e9).unwrap();
        assert!(b.lo < 5.0 && 5.0 < b.hi);
        let m = golden_max(f, b.lo, b.hi, 1e-12);
        assert!((m.value - (-0.5f64).exp() * 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bracket_fails_for_increasing() {
        assert!(bracket_max(|s| s, 1.0, 2.0, 0.5, 1e6).is_none());
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-15).is_none());
    }
}
