//! Classifies radial functions `ψ(|x|)` in three dimensions by the sampled
//! limits of `ψ'(s)/s`, `ψ''(s)` and the Laplacian as `s → 0`.

use regularity_lab::radial::{classify_radial, RadialProfile};

fn main() {
    for p in RadialProfile::builtins() {
        let rep = classify_radial(&p);
        println!("{:<16} {:?}", p.name, rep.classification);
        println!(
            "    ψ'/s: {:?}   ψ'': {:?}   Δ: {:?}   stable under refinement: {}",
            rep.lim_psi1_over_s, rep.lim_psi2, rep.lim_laplacian, rep.refinement_stable
        );
    }
}
