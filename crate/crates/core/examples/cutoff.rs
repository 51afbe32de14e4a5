//! The smooth cutoff η: equal to 1 up to 1/2, 0 from 2/3 on, with a
//! flat-to-all-orders transition. Prints a table across the shell and checks
//! the derivatives against the finite-difference oracle.

use regularity_lab::fd::{fd_d1, fd_d2, FdConfig};
use regularity_lab::make_cutoff;

fn main() -> regularity_lab::Result<()> {
    let eta = make_cutoff();
    let cfg = FdConfig::default();
    println!("s        η(s)          η'(s)          η''(s)         |η' - fd|   |η'' - fd|");
    for i in 0..=16 {
        let s = 0.48 + 0.012 * i as f64;
        let j = eta.jet(s);
        let e1 = (j.d1 - fd_d1(|r| eta.value(r), s, &cfg)?).abs();
        let e2 = (j.d2 - fd_d2(|r| eta.value(r), s, &cfg)?).abs();
        println!(
            "{s:<8.3} {:<13.6e} {:<14.6e} {:<14.6e} {e1:<11.1e} {e2:.1e}",
            j.value, j.d1, j.d2
        );
    }
    println!("plateau ends at {}, support ends at {}", eta.plateau_end(), eta.support_end());
    Ok(())
}
