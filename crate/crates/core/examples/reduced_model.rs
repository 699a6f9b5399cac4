//! Coefficients of the reduced phase model for the 100-junction array and a
//! short run of its dynamics.

use kuramoto_sync::analysis::analyze;
use kuramoto_sync::integrator::{integrate_rk4, IntegrationConfig};
use kuramoto_sync::jj::{reduced_coefficients, Junction, JunctionArraySpec, LoadCircuit};
use kuramoto_sync::kuramoto::uniform_phases;

fn main() -> kuramoto_sync::Result<()> {
    let spec = JunctionArraySpec::identical(
        100,
        Junction::new(10e-6, 4.2e3)?,
        LoadCircuit::new(1e-9, 2.0, 1e-6)?,
        12e-6,
    )?;
    let model = reduced_coefficients(&spec)?;
    println!("K_j   = {:.6}", model.k[0]);
    println!("A_k   = {:.7} V", model.a[0]);
    println!("zeta  = {:.6} rad", model.zeta[0]);
    println!("K     = {:.6} (K_j A_k = {:.6})", model.identical_k.unwrap(), model.k[0] * model.a[0]);
    println!("alt K_j = {:.6}", model.printed_k[0]);

    let psi = uniform_phases(spec.len(), 2.0 * std::f64::consts::PI, 2);
    let trace = integrate_rk4(&model, &psi, &IntegrationConfig::new(0.02, 200.0).with_record_every(1000))?;
    for (t, o) in trace.times.iter().zip(&trace.order) {
        println!("t = {t:5.1}  R = {:.4}", o.r);
    }
    let report = analyze(&trace, 0.25, 0.9)?;
    println!("band width {:.2e}, settled {}", report.frequency_band_width, report.settled);
    Ok(())
}
