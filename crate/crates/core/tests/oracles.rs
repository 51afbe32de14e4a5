//! Reference values computed from independent oracles: closed forms, dense
//! grid searches and a small finite-difference stencil that lives here and
//! shares no code with the library's own differentiation.

use std::f64::consts::E;

use nalgebra::{DMatrix, DVector};

use regularity_lab::block::{block_eval, block_value, BlockParams};
use regularity_lab::ladder::{build_ladder, compute_mk, s_floor, BallLocation, LadderParams, Side};
use regularity_lab::operators::{det_hessian, mean_curvature};
use regularity_lab::phi::{weighted_profile, weighted_sup_default_grids, weighted_sup, divergence_witness, AdmissiblePhi};
use regularity_lab::radial::{radial_hessian, RadialProfile};
use regularity_lab::sampling::{ball_points, shell_points};
use regularity_lab::{fd_gradient, fd_hessian, make_cutoff, FdConfig, PointEval};

/// Fourth-order central first derivative.
fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative.
fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Mixed partial from the four-point stencil, with one Richardson step.
fn mixed(f: impl Fn(&[f64]) -> f64, x: &[f64], i: usize, j: usize, h: f64) -> f64 {
    let at = |a: f64, b: f64| {
        let mut p = x.to_vec();
        p[i] += a;
        p[j] += b;
        f(&p)
    };
    let m = |h: f64| (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    (4.0 * m(0.5 * h) - m(h)) / 3.0
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn profile_closed_forms() {
    let log = AdmissiblePhi::log();
    assert!((log.value(E) - 1.0).abs() < 1e-15);
    assert!((log.d1(E) - 1.0 / E).abs() < 1e-15);
    assert!((log.d2(E) + 1.0 / (E * E)).abs() < 1e-15);
    assert_eq!(AdmissiblePhi::power(0.5).unwrap().value(4.0), 2.0);
    assert_eq!(AdmissiblePhi::shifted_loglog().value(0.0), 0.0);
}

#[test]
fn profile_derivatives_match_stencil() {
    for phi in [
        AdmissiblePhi::log(),
        AdmissiblePhi::power(0.5).unwrap(),
        AdmissiblePhi::power(0.2).unwrap(),
        AdmissiblePhi::shifted_loglog(),
    ] {
        for s in [2.0, 10.0, 100.0] {
            let h = 1e-3 * s;
            assert!(rel(d1(|v| phi.value(v), s, h), phi.d1(s)) <= 1e-6, "{phi} d1 at {s}");
            // d2 checked against the derivative of d1, as a second independent path.
            assert!(rel(d1(|v| phi.d1(v), s, h), phi.d2(s)) <= 1e-6, "{phi} d2 at {s}");
            assert!(rel(d2(|v| phi.value(v), s, 1e-2 * s), phi.d2(s)) <= 1e-5, "{phi} d2 stencil at {s}");
        }
    }
}

#[test]
fn weighted_profile_values() {
    let log = AdmissiblePhi::log();
    let v = weighted_profile(&log, 1.0, &[1e-6]).unwrap()[0];
    let expected = 1e-6 * (12.0 * 10f64.ln()).ln();
    assert!(rel(v, expected) < 1e-13);
    assert!((v - 3.32e-6).abs() < 5e-9);

    let sqrt = AdmissiblePhi::power(0.5).unwrap();
    let v = weighted_profile(&sqrt, 2.0, &[(-2.0f64).exp()]).unwrap()[0];
    assert!(rel(v, 2.0 * (-4.0f64).exp()) < 1e-13);
    assert!((v - 0.03663).abs() < 1e-5);

    // Decreasing radii drive every profile to 0 at β = 1.
    let radii: Vec<f64> = (1..=30).map(|k| 10f64.powi(-k)).collect();
    for phi in [log, sqrt, AdmissiblePhi::shifted_loglog()] {
        let tail = weighted_profile(&phi, 1.0, &radii).unwrap();
        assert!(tail.windows(2).all(|w| w[1] < w[0]));
        assert!(tail[29] < 1e-27);
    }
}

#[test]
fn weighted_sup_values_and_refinement() {
    let log = AdmissiblePhi::log();
    let v = weighted_sup(&log, &[1.0], &[0.5]).unwrap();
    assert!(rel(v, 0.5 * (2.0 * 2f64.ln()).ln().abs()) < 1e-14);
    assert!((v - 0.1633).abs() < 1e-4);

    for phi in [log, AdmissiblePhi::power(0.5).unwrap()] {
        let (b1, r1) = weighted_sup_default_grids(8, 64);
        let (b2, r2) = weighted_sup_default_grids(80, 640);
        let (c1, c2) = (weighted_sup(&phi, &b1, &r1).unwrap(), weighted_sup(&phi, &b2, &r2).unwrap());
        assert!((c2 - c1).abs() / c2 < 0.01, "{phi}: {c1} vs {c2}");
        // Small β rows stay under the same bound.
        for beta in [1e-3, 1e-2] {
            assert!(weighted_sup(&phi, &[beta], &r2).unwrap() <= c2);
        }
    }
}

#[test]
fn divergence_witness_values() {
    let log = AdmissiblePhi::log();
    let (r, v) = divergence_witness(&log, 0.1).unwrap();
    assert!(rel(r, (-10.0f64).exp()) < 1e-15);
    assert!((r - 4.54e-5).abs() < 1e-7);
    assert!((v - 1.1021).abs() < 1e-4);
    let (_, v2) = divergence_witness(&log, 0.01).unwrap();
    assert!(rel(v2, 200f64.ln() / E) < 1e-15);
    assert!(v2 > v);
}

#[test]
fn cutoff_shape_and_derivatives() {
    let eta = make_cutoff();
    assert_eq!(eta.value(0.4), 1.0);
    assert_eq!(eta.value(0.7), 0.0);
    assert!((eta.value(7.0 / 12.0) - 0.5).abs() < 1e-12);
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 * 1e-3).collect();
    for w in grid.windows(2) {
        assert!(eta.value(w[1]) <= eta.value(w[0]));
    }
    for &s in &grid {
        if s <= 0.5 {
            assert_eq!(eta.value(s), 1.0);
        }
        if s >= 2.0 / 3.0 {
            assert_eq!(eta.value(s), 0.0);
        }
    }
    for i in 1..40 {
        let s = 0.5 + i as f64 * (1.0 / 6.0) / 40.0;
        let h = 1e-5;
        let scale1 = eta.d1(s).abs().max(1.0);
        let scale2 = eta.d2(s).abs().max(1.0);
        assert!((d1(|v| eta.value(v), s, h) - eta.d1(s)).abs() / scale1 <= 1e-5, "η' at {s}");
        assert!((d1(|v| eta.d1(v), s, h) - eta.d2(s)).abs() / scale2 <= 1e-5, "η'' at {s}");
    }
}

#[test]
fn block_hessian_matches_local_stencil() {
    for phi in [AdmissiblePhi::log(), AdmissiblePhi::power(0.5).unwrap()] {
        for t in [0.25, 0.05] {
            let p = BlockParams::new(t, 3, phi).unwrap();
            for x in shell_points(3, 0.05, 0.64, 30, 7) {
                let e = block_eval(&p, &x);
                let f = |y: &[f64]| block_value(&p, y);
                let scale = e.max_abs_hessian().max(1e-3);
                for i in 0..3 {
                    for j in 0..3 {
                        let h = 1e-4;
                        let fd = if i == j {
                            d2(
                                |v| {
                                    let mut y = x.clone();
                                    y[i] = v;
                                    f(&y)
                                },
                                x[i],
                                h,
                            )
                        } else {
                            mixed(f, &x, i, j, h)
                        };
                        assert!((fd - e.hessian[(i, j)]).abs() / scale <= 1e-5, "{phi} t={t} x={x:?} ({i},{j})");
                    }
                }
            }
        }
    }
}

#[test]
fn block_support_and_hyperplanes() {
    let p = BlockParams::new(0.1, 4, AdmissiblePhi::log()).unwrap();
    let e = block_eval(&p, &[0.0, 0.3, 0.2, -0.1]);
    assert_eq!(e.value, 0.0);
    assert!(block_eval(&p, &[0.5, 0.3, 0.2, 0.1]).value != 0.0);
    for i in 2..4 {
        for j in 2..4 {
            assert_eq!(e.hessian[(i, j)], 0.0);
        }
    }
    let out = block_eval(&p, &[0.5, 0.4, 0.2, 0.1]);
    assert_eq!(out.value, 0.0);
    assert!(out.gradient.iter().all(|&g| g == 0.0));
    assert!(out.hessian.iter().all(|&h| h == 0.0));
}

#[test]
fn library_fd_on_polynomials() {
    let cfg = FdConfig::default();
    let g = fd_gradient(|x: &[f64]| x[0] * x[1], &[2.0, 3.0], &cfg).unwrap();
    assert!((g[0] - 3.0).abs() < 1e-9 && (g[1] - 2.0).abs() < 1e-9);
    let z = fd_gradient(|_: &[f64]| 4.0, &[0.3, 0.7], &cfg).unwrap();
    assert!(z.iter().all(|v| v.abs() < 1e-12));
    let h = fd_hessian(|x: &[f64]| x[0] * x[0] + x[1] * x[1], &[0.4, -1.1], &cfg).unwrap();
    assert!((h[(0, 0)] - 2.0).abs() < 1e-6 && (h[(1, 1)] - 2.0).abs() < 1e-6 && h[(0, 1)].abs() < 1e-6);
    let h = fd_hessian(|x: &[f64]| x[0] * x[1], &[0.4, -1.1], &cfg).unwrap();
    assert!((h[(0, 1)] - 1.0).abs() < 1e-6);
}

fn grid_max(phi: &AdmissiblePhi, t: f64) -> f64 {
    // Dense log grid from the boundary out to well beyond the peak.
    let (a, b) = (s_floor().ln(), (1e4 / t).ln());
    (0..=400_000)
        .map(|i| {
            let s = (a + (b - a) * i as f64 / 400_000.0).exp();
            (-t * s).exp() * phi.value(s)
        })
        .fold(f64::MIN, f64::max)
}

#[test]
fn level_maximum_against_closed_form_and_grid() {
    let sqrt = AdmissiblePhi::power(0.5).unwrap();
    let m = compute_mk(&sqrt, 0.1).unwrap();
    assert!(rel(m.m, (-0.5f64).exp() * 5f64.sqrt()) < 1e-12);
    assert!((m.m - 1.3562).abs() < 1e-4);
    assert!((m.s_star - 5.0).abs() < 1e-4);
    assert!(rel(m.m, grid_max(&sqrt, 0.1)) < 1e-6);

    let m = compute_mk(&sqrt, 1.0).unwrap();
    let s0 = -2.0 * (2.0f64 / 3.0).ln();
    assert!(!m.interior);
    assert!(rel(m.m, (-s0).exp() * s0.sqrt()) < 1e-12);
    assert!((m.m - 0.4003).abs() < 1e-4);

    for phi in [AdmissiblePhi::log(), AdmissiblePhi::shifted_loglog()] {
        for t in [0.2, 0.05, 0.01] {
            let m = compute_mk(&phi, t).unwrap();
            assert!(rel(m.m, grid_max(&phi, t)) < 1e-6, "{phi} t={t}");
        }
    }
}

#[test]
fn ball_membership() {
    let ladder = build_ladder(LadderParams::new(3, AdmissiblePhi::log())).unwrap();
    assert_eq!(ladder.locate_ball(&[0.0; 3]), BallLocation::Outside);
    assert_eq!(ladder.locate_ball(&ladder.center(2, Side::Plus)), BallLocation::Plus(2));
    assert_eq!(ladder.locate_ball(&ladder.center(4, Side::Minus)), BallLocation::Minus(4));
    for x in ball_points(3, 0.2, 500, 3) {
        for j in 0..3 {
            let mut p = x.clone();
            p[j] = 0.0;
            assert_eq!(ladder.locate_ball(&p), BallLocation::Outside);
        }
    }
    let zero = ladder.u_eval(&[0.0; 3]);
    assert_eq!(zero.value, 0.0);
    assert!(zero.gradient.iter().chain(zero.hessian.iter()).all(|&v| v == 0.0));
}

#[test]
fn remainder_along_ball_centers() {
    let ladder = build_ladder(LadderParams::new(3, AdmissiblePhi::power(0.5).unwrap())).unwrap();
    // u vanishes at the centers; nearby points of the plateau carry the signal.
    let vals: Vec<f64> = (1..=10)
        .map(|k| {
            let y = [0.3, 0.3, 0.1];
            ladder.taylor_remainder(&ladder.to_global(k, Side::Plus, &y))
        })
        .collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    assert_eq!(ladder.taylor_remainder(&ladder.center(3, Side::Plus)), 0.0);
}

#[test]
fn determinant_and_mean_curvature_closed_forms() {
    let pe = |d: &[f64]| {
        let n = d.len();
        PointEval::new(&vec![0.0; n], 0.0, DVector::zeros(n), DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    };
    assert_eq!(det_hessian(&PointEval::zeros(&[1.0, 2.0, 3.0])), 0.0);
    assert!((det_hessian(&pe(&[2.0, -3.0, 0.5])) + 3.0).abs() < 1e-14);
    let g = mean_curvature(&pe(&[1.5, -0.25]));
    assert!((g.h - 1.25).abs() < 1e-15);
}

#[test]
fn radial_hessian_matches_stencil() {
    for profile in RadialProfile::builtins() {
        for x in shell_points(3, 0.1, 0.6, 100, 11) {
            let pe = radial_hessian(&profile, &x).unwrap();
            // The fastest oscillation, sin(1/s²), has wavelength of order s³.
            let h = 1e-2 * pe.point.norm().powi(3);
            let f = |y: &[f64]| {
                let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                (profile.psi)(r)
            };
            let scale = pe.max_abs_hessian().max(1.0);
            for i in 0..3 {
                for j in i..3 {
                    let fd = if i == j {
                        d2(
                            |v| {
                                let mut y = x.clone();
                                y[i] = v;
                                f(&y)
                            },
                            x[i],
                            h,
                        )
                    } else {
                        mixed(f, &x, i, j, h)
                    };
                    assert!(
                        (fd - pe.hessian[(i, j)]).abs() / scale <= 1e-4,
                        "{} at {x:?} ({i},{j}): {fd} vs {}",
                        profile.name,
                        pe.hessian[(i, j)]
                    );
                }
            }
            let trace: f64 = (0..3).map(|i| pe.hessian[(i, i)]).sum();
            assert!((trace - pe.laplacian).abs() <= 1e-10 * scale);
        }
    }
    let q = radial_hessian(&RadialProfile::quadratic(), &[0.1, -0.2, 0.3]).unwrap();
    assert!((q.laplacian - 6.0).abs() < 1e-12);
}
