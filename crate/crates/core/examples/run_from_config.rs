//! Runs a config document through the same path as the command line and
//! writes trace, report and manifest into a temporary directory.

use kuramoto_sync::config::RunConfig;
use kuramoto_sync::runner;

const CONFIG: &str = r#"mode = "kuramoto-network"
seed = 3

[integration]
t_end = 20.0
dt = 0.01
record_every = 50

[oscillators]
n = 50
coupling = 4.0
distribution = "gaussian"
width = 0.5

[network]
topology = "random"
probability = 0.2
"#;

fn main() -> kuramoto_sync::Result<()> {
    let config = RunConfig::from_toml(CONFIG)?;
    let output = runner::run(&config)?;
    let dir = std::env::temp_dir().join("kuramoto-sync-example");
    for path in runner::write_artifacts(&output, &dir)? {
        println!("wrote {}", path.display());
    }
    print!("{}", output.report);
    Ok(())
}
