//! The natural angle psi advances uniformly in an uncoupled junction;
//! sin(phi) as a function of psi has the closed-form cosine series
//! A_0 = 2(a - nu), A_n = -2 nu (a - nu)^n.

use std::f64::consts::PI;

use kuramoto_sync::jj::{fourier_A, fourier_series, natural_frequency, phi_of_psi, psi_of_phi, sin_phi_of_psi, DEFAULT_QUADRATURE_POINTS};

fn main() -> kuramoto_sync::Result<()> {
    let alpha = 1.2;
    let nu = natural_frequency(alpha)?;
    println!("alpha = {alpha}, nu = {nu:.6}");
    for phi in [-1.0, 0.0, 1.0, 2.0, 3.0] {
        let psi = psi_of_phi(phi, alpha);
        println!("phi = {phi:5.2} -> psi = {psi:8.5} -> phi = {:8.5}", phi_of_psi(psi, alpha));
    }
    println!("{:>3} {:>14} {:>14}", "n", "quadrature", "closed form");
    let mut coeffs = Vec::new();
    for n in 0..=8 {
        let a = fourier_A(alpha, n, DEFAULT_QUADRATURE_POINTS)?;
        let exact = if n == 0 { 2.0 * (alpha - nu) } else { -2.0 * nu * (alpha - nu).powi(n as i32) };
        println!("{n:3} {a:14.10} {exact:14.10}");
        coeffs.push(a);
    }
    let worst = (0..100)
        .map(|i| -PI + 2.0 * PI * i as f64 / 100.0)
        .map(|psi| (fourier_series(&coeffs, psi) - sin_phi_of_psi(psi, alpha)).abs())
        .fold(0.0, f64::max);
    println!("9-term reconstruction error: {worst:.2e}");
    Ok(())
}
