//! The building block `u_t(x) = η(|x|) x₁x₂ |x|^{2t} φ(-ln|x|²)`.
//!
//! For a few points this prints the analytic gradient and hessian next to the
//! finite-difference oracle, then the split of `∂₁∂₂u_t` into its leading term
//! `η |x|^{2t} φ` and the bounded remainder `h`. The leading term is what grows
//! without bound as `t → 0`.

use regularity_lab::block::{block_eval, block_value, cross12_terms, BlockParams};
use regularity_lab::fd::{fd_hessian, rel_error, FdConfig};
use regularity_lab::AdmissiblePhi;

fn main() -> regularity_lab::Result<()> {
    let phi = AdmissiblePhi::log();
    let cfg = FdConfig::default();
    let points: [&[f64]; 3] = [&[0.2, 0.1, -0.05], &[0.01, 0.02, 0.003], &[0.4, 0.3, 0.2]];

    for t in [0.25, 0.05] {
        let p = BlockParams::new(t, 3, phi)?;
        println!("== t = {t}, φ = {phi}, n = 3");
        for x in points {
            let e = block_eval(&p, x);
            let h = fd_hessian(|y: &[f64]| block_value(&p, y), x, &cfg)?;
            println!(
                "x = {x:?}\n  u = {:.6e}, Δu = {:.6e}, hessian rel. error vs oracle {:.1e}",
                e.value,
                e.laplacian,
                rel_error(h.as_slice(), e.hessian.as_slice(), 1e-12)
            );
        }
    }

    println!("\n∂₁∂₂u_t on the diagonal |y| = 1e-6: leading term vs remainder");
    let y = [1e-6 / 2f64.sqrt(), 1e-6 / 2f64.sqrt(), 0.0];
    for t in [0.25, 0.1, 0.01, 0.001] {
        let c = cross12_terms(&BlockParams::new(t, 3, phi)?, &y);
        println!("  t = {t:<6} leading {:>12.4}  remainder {:>10.4}  sum {:>12.4}", c.leading(), c.remainder(), c.sum());
    }
    Ok(())
}
