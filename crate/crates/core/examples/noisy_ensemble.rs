//! White noise lowers the plateau of R; strong enough noise destroys it.

use kuramoto_sync::distribution::FrequencyDistribution;
use kuramoto_sync::integrator::{integrate_euler_maruyama, IntegrationConfig};
use kuramoto_sync::kuramoto::{CouplingSpec, NoiseSpec, OscillatorEnsemble};

fn main() -> kuramoto_sync::Result<()> {
    let dist = FrequencyDistribution::logistic(0.2)?;
    for gamma in [0.0, 0.2, 0.5, 1.0, 2.0] {
        let noise = NoiseSpec { sigma: 1.0, gamma, seed: 4 };
        let ens = OscillatorEnsemble::sample(&dist, 400, 2.0 * std::f64::consts::PI, CouplingSpec::MeanField { k: 1.5 }, noise, 4)?;
        let trace = integrate_euler_maruyama(&ens.model(), &ens.phases, &IntegrationConfig::new(0.01, 60.0).with_seed(4).with_record_every(50))?;
        let r = trace.r_series();
        let tail = &r[r.len() * 3 / 4..];
        println!("Gamma = {gamma:3.1}  mean tail R = {:.3}", tail.iter().sum::<f64>() / tail.len() as f64);
    }
    Ok(())
}
