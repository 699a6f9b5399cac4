//! N=100 mean-field oscillators with K=4 lock within a few time units.

use kuramoto_sync::analysis::analyze;
use kuramoto_sync::distribution::{critical_coupling, FrequencyDistribution};
use kuramoto_sync::integrator::{integrate_rk4, IntegrationConfig};
use kuramoto_sync::kuramoto::{CouplingSpec, NoiseSpec, OscillatorEnsemble};

fn main() -> kuramoto_sync::Result<()> {
    let dist = FrequencyDistribution::gaussian(1.0)?;
    println!("Kc = {:.4}", critical_coupling(&dist)?);
    let ens = OscillatorEnsemble::sample(&dist, 100, 2.0 * std::f64::consts::PI, CouplingSpec::MeanField { k: 4.0 }, NoiseSpec::none(), 1)?;
    let trace = integrate_rk4(&ens.model(), &ens.phases, &IntegrationConfig::new(0.01, 25.0).with_record_every(100))?;
    for (t, o) in trace.times.iter().zip(&trace.order) {
        println!("t = {t:5.1}  R = {:.4}", o.r);
    }
    let report = analyze(&trace, 0.25, 0.9)?;
    println!("settled: {}, settling time: {:?}", report.settled, report.settling_time);
    Ok(())
}
