//! Graph geometry of u: mean curvature and second fundamental form per level,
//! written as CSV.

use regularity_lab::ladder::{build_ladder, LadderParams};
use regularity_lab::operators::{geometry_csv, survey_levels};
use regularity_lab::AdmissiblePhi;

fn main() -> regularity_lab::Result<()> {
    let ladder = build_ladder(LadderParams::new(3, AdmissiblePhi::power(0.5)?))?;
    print!("{}", geometry_csv(&survey_levels(&ladder, 100, 0)));
    Ok(())
}
