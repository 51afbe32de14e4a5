//! Determinant of the hessian.
//!
//! In three dimensions with `φ = ln` the sampled `|det D²u|` shrinks from one
//! level to the next and vanishes at the origin. In the plane the same
//! construction cannot work: the leading term of the determinant on level `k`
//! is `M_k`, which grows without bound.

use regularity_lab::ladder::{build_ladder, LadderParams};
use regularity_lab::operators::{det_hessian, ma_conditions_check, ma_obstruction_demo, survey_levels};
use regularity_lab::AdmissiblePhi;

fn main() -> regularity_lab::Result<()> {
    let phi = AdmissiblePhi::log();
    let rep = ma_conditions_check(&phi, 3);
    println!("φ = {phi}, n = 3: tail conditions {}", if rep.passed { "hold" } else { "fail" });
    for (s, (a, b)) in rep.probes.iter().zip(rep.prod_d1.iter().zip(&rep.prod_d2)) {
        println!("  s = {s:.0e}: |φ²φ'| = {a:.3e}, |φ²φ''| = {b:.3e}");
    }

    let ladder = build_ladder(LadderParams::new(3, phi))?;
    println!("det D²u(0) = {}", det_hessian(&ladder.u_eval(&[0.0; 3])));
    println!("level  ε_k         max |det D²u|");
    for s in survey_levels(&ladder, 100, 0) {
        println!("{:>5}  {:.4e}  {:.4e}", s.k, s.eps, s.max_abs_det);
    }

    let planar = ma_obstruction_demo(&build_ladder(LadderParams::new(2, phi))?)?;
    println!("\nplanar leading term (n = 2):");
    for r in &planar.rows {
        println!("  k = {:>2}  t = {:.4}  sampled sup {:.5}  M_k {:.5}", r.k, r.t, r.sampled_sup, r.mk);
    }
    println!("M_K / M_1 = {:.4}", planar.growth_ratio);
    Ok(())
}
