//! With the load back-action scaled down, the reduced phase model predicts
//! the running frequencies of the full circuit.

use std::f64::consts::PI;

use kuramoto_sync::integrator::{integrate_rk4, IntegrationConfig};
use kuramoto_sync::jj::{psi_of_phi, reduced_coefficients, CircuitModel, Junction, JunctionArraySpec, LoadCircuit, LoadStart};
use kuramoto_sync::kuramoto::uniform_phases;

fn main() -> kuramoto_sync::Result<()> {
    let scale = 0.1;
    let spec = JunctionArraySpec::with_spread(
        10,
        Junction::new(10e-6, 4.2e3)?,
        1e-3,
        5e-4,
        1,
        LoadCircuit::new(1e-9, 2.0, 1e-6)?,
        12e-6,
    )?;
    let full = CircuitModel::new(&spec, scale)?;
    let phi = uniform_phases(spec.len(), 2.0 * PI, 1);
    let config = IntegrationConfig::new(full.default_dt(), 25.0);
    let state = full.initial_state(phi.clone(), LoadStart::Equilibrium)?;
    let full_trace = integrate_rk4(&full, &state.to_vec(), &config)?;
    let full_rates = full.natural_angle_rates(&full_trace, 0)?;

    let reduced = reduced_coefficients(&spec)?.with_coupling_scale(scale);
    let psi: Vec<f64> = phi.iter().zip(full.alpha()).map(|(&p, &a)| psi_of_phi(p, a)).collect();
    let red = integrate_rk4(&reduced, &psi, &config)?;
    let last = red.len() - 1;
    println!("{:>3} {:>10} {:>10} {:>8}", "j", "full", "reduced", "gap %");
    for (j, f) in full_rates.iter().enumerate() {
        let r = (red.phases[last][j] - red.phases[0][j]) / red.times[last];
        println!("{j:3} {f:10.6} {r:10.6} {:8.3}", 100.0 * (f - r) / f);
    }
    Ok(())
}
