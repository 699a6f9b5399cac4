//! Steady R against K for a Lorentzian ensemble, next to the exact
//! infinite-N curve R = sqrt(1 - Kc/K).

use kuramoto_sync::analysis::{sweep_coupling, SweepSpec};
use kuramoto_sync::distribution::{critical_coupling, scaling_prediction, FrequencyDistribution};
use kuramoto_sync::integrator::IntegrationConfig;
use kuramoto_sync::runner::linear_grid;

fn main() -> kuramoto_sync::Result<()> {
    let dist = FrequencyDistribution::lorentzian(0.2)?;
    let kc = critical_coupling(&dist)?;
    let grid = linear_grid(0.5 * kc, 2.0 * kc, 12);
    let config = IntegrationConfig::new(0.05, 150.0).with_record_every(10);
    let result = sweep_coupling(&SweepSpec::new(dist, 800, 3), &grid, &config)?;
    println!("{:>7} {:>8} {:>8} {:>8}", "K", "R", "exact", "near Kc");
    for (k, r) in result.k_values.iter().zip(&result.steady_r) {
        let exact = if *k > kc { (1.0 - kc / k).sqrt() } else { 0.0 };
        let near = if *k >= kc { scaling_prediction(*k, &dist)? } else { 0.0 };
        println!("{k:7.4} {r:8.4} {exact:8.4} {near:8.4}");
    }
    println!("Kc theory {kc:.4}, empirical {:?}, beta fit {:?}", result.kc_empirical, result.beta_fit);
    Ok(())
}
