//! Five junctions biased just above threshold: four share a frequency band,
//! one runs apart.

use kuramoto_sync::{presets, runner};

fn main() -> kuramoto_sync::Result<()> {
    for name in ["fig8", "fig9", "async5"] {
        let out = runner::run(&presets::load(name)?)?;
        let r = &out.report;
        println!("{name}:");
        for key in ["final_R", "tail_R_range", "settled", "locked_fraction", "running_frequencies"] {
            println!("  {key}: {}", r.get(key).unwrap_or("-"));
        }
    }
    Ok(())
}
