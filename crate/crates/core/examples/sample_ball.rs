//! Writes a 64×64 grid of u and its derivatives over the local square of
//! ball 3 to `ball3.csv`, ready for a plotting tool.

use regularity_lab::cli::{cmd_sample, Format, RunConfig, SampleRegion};
use regularity_lab::ladder::{Side, TRule};
use regularity_lab::AdmissiblePhi;

fn main() -> regularity_lab::Result<()> {
    let cfg = RunConfig {
        command: "sample".into(),
        phi: AdmissiblePhi::log(),
        dim: 3,
        levels: 10,
        signed: true,
        t_rule: TRule::default(),
        out: None,
        format: Format::Csv,
        seed: 0,
        suite: None,
    };
    let out = cmd_sample(&cfg, SampleRegion::Ball { k: 3, side: Side::Plus }, 64)?;
    std::fs::write("ball3.csv", &out.body)?;
    println!("wrote ball3.csv ({} rows)", out.body.lines().count() - 1);
    Ok(())
}
