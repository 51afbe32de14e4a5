//! Two planar fixtures near the origin, differentiated only by finite
//! differences. `w = (x²-y²) ln(-ln r²)` has a Laplacian tending to 0 while its
//! mixed entry grows like `ln(-ln r²)`. The oscillating `(x²-y²) sin(ln(-ln r²))`
//! keeps a bounded hessian whose mixed entry keeps swinging.

use regularity_lab::gallery::{gallery_report, GalleryExample};

fn main() -> regularity_lab::Result<()> {
    for which in [GalleryExample::W, GalleryExample::Phi] {
        let rep = gallery_report(which)?;
        println!("== {}", rep.example);
        println!("r          |f|/r²     mixed (rotated)   max|Δ|     max|hess|");
        for r in &rep.rows {
            println!(
                "{:<10.3e} {:<10.4} {:<17.4} {:<10.4} {:.4}",
                r.r, r.taylor_ratio, r.rotated_cross, r.max_abs_laplacian, r.max_abs_hessian
            );
        }
        println!(
            "max |mixed| {:.4}, spread {:.4}, hessian sup {:.4}\n",
            rep.max_abs_cross, rep.cross_spread, rep.hessian_sup
        );
    }
    Ok(())
}
