//! The full series-array circuit next to the same array with the load
//! back-action clamped to zero.

use kuramoto_sync::analysis::analyze;
use kuramoto_sync::integrator::{integrate_rk4, IntegrationConfig};
use kuramoto_sync::jj::{CircuitModel, Junction, JunctionArraySpec, LoadCircuit, LoadStart};
use kuramoto_sync::kuramoto::uniform_phases;

fn main() -> kuramoto_sync::Result<()> {
    let spec = JunctionArraySpec::with_spread(
        20,
        Junction::new(10e-6, 4.2e3)?,
        1e-3,
        5e-4,
        1,
        LoadCircuit::new(1e-9, 2.0, 1e-6)?,
        12e-6,
    )?;
    let model = CircuitModel::new(&spec, 1.0)?;
    let state = model.initial_state(uniform_phases(spec.len(), 2.0 * std::f64::consts::PI, 1), LoadStart::Rest)?;
    let config = IntegrationConfig::new(model.default_dt(), 40.0).with_record_every(20);
    println!("one time unit = {:.3e} s", model.reference_time_scale() / model.reference_frequency());
    for (name, m) in [("coupled", model.clone()), ("uncoupled", model.uncoupled())] {
        let trace = integrate_rk4(&m, &state.to_vec(), &config)?;
        let rep = analyze(&trace, 0.25, 0.9)?;
        let q = trace.aux.last().map(|a| a[0]).unwrap_or(0.0);
        println!(
            "{name:9}  final R {:.4}  band {:.4}  locked {:.2}  final load charge {q:.3e}",
            rep.final_r, rep.frequency_band_width, rep.locked_fraction
        );
    }
    Ok(())
}
