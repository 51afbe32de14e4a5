//! Runs every verification suite for one configuration, the same checks as
//! `regularity-lab verify --suite all`.

use regularity_lab::ladder::LadderParams;
use regularity_lab::verify::{run_suite, Suite};
use regularity_lab::AdmissiblePhi;

fn main() -> regularity_lab::Result<()> {
    let params = LadderParams::new(3, AdmissiblePhi::log());
    let checks = run_suite(Suite::All, params, 0)?;
    for c in &checks {
        let status = match c.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        println!("{status}  {:<9}{:<50}{}", c.suite, c.name, c.detail);
    }
    Ok(())
}
