//! Nearest-neighbour rings synchronize far more slowly than the complete
//! graph with the same total coupling.

use kuramoto_sync::distribution::FrequencyDistribution;
use kuramoto_sync::integrator::{integrate_rk4, IntegrationConfig};
use kuramoto_sync::kuramoto::{CouplingSpec, NoiseSpec, OscillatorEnsemble, SquareMatrix};

fn main() -> kuramoto_sync::Result<()> {
    let n = 60;
    let k = 3.0;
    let dist = FrequencyDistribution::gaussian(0.1)?;
    let graphs = [
        ("complete", SquareMatrix::complete_graph(n)),
        ("ring k=1", SquareMatrix::ring(n, 1)),
        ("ring k=5", SquareMatrix::ring(n, 5)),
    ];
    for (name, adjacency) in graphs {
        let coupling = CouplingSpec::Network { k: SquareMatrix::constant(n, k / n as f64), adjacency };
        let ens = OscillatorEnsemble::sample(&dist, n, 2.0 * std::f64::consts::PI, coupling, NoiseSpec::none(), 8)?;
        let trace = integrate_rk4(&ens.model(), &ens.phases, &IntegrationConfig::new(0.02, 40.0).with_record_every(500))?;
        let r: Vec<String> = trace.r_series().iter().map(|r| format!("{r:.3}")).collect();
        println!("{name:9} R(t): {}", r.join(" "));
    }
    Ok(())
}
