//! Profiles φ: the decay certificate, the vanishing weighted profile, the
//! uniform weighted bound and the divergence witness.
//!
//! ```bash
//! cargo run --example phi_profiles
//! ```

use regularity_lab::phi::{
    weighted_profile, weighted_sup_default_grids, weighted_sup, divergence_witness, AdmissiblePhi, POINTS_PER_DECADE,
};

fn main() -> regularity_lab::Result<()> {
    let profiles = [
        AdmissiblePhi::log(),
        AdmissiblePhi::power(0.5)?,
        AdmissiblePhi::power(0.25)?,
        AdmissiblePhi::shifted_loglog(),
    ];
    let radii: Vec<f64> = (1..=8).map(|k| 10f64.powi(-4 * k)).collect();
    let (betas, rhos) = weighted_sup_default_grids(POINTS_PER_DECADE / 4, POINTS_PER_DECADE);

    for phi in &profiles {
        let rep = phi.certify_decay();
        println!("== {phi}  (decay certificate: {})", if rep.passed { "pass" } else { "fail" });
        println!("   s        φ(s)          |φ'(s)|       |φ''(s)|");
        for i in 0..rep.probes.len() {
            println!(
                "   {:<8.0e} {:<13.6e} {:<13.6e} {:.6e}",
                rep.probes[i], rep.values[i], rep.abs_d1[i], rep.abs_d2[i]
            );
        }

        let tail = weighted_profile(phi, 0.1, &radii)?;
        println!("   |x|^0.1 φ(-ln|x|²) at |x| = 1e-4 … 1e-32:");
        println!("   {}", tail.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join("  "));

        let sup = weighted_sup(phi, &betas, &rhos)?;
        println!("   sup over β, ρ of β ρ^β |φ(-ln ρ²)| ≈ {sup:.6}");
        print!("   witness e^-1 φ(2/β):");
        for beta in [0.5, 0.1, 0.01, 0.001] {
            print!("  β={beta}: {:.4}", divergence_witness(phi, beta)?.1);
        }
        println!("\n");
    }
    Ok(())
}
