//! Fourier coefficients of sin φ(ψ) and the linear response of the load to
//! each harmonic.
//!
//! Coefficients use the (1/π)∫ normalization, so the series reads
//! `sin φ(ψ) = A_0/2 + Σ_{n≥1} A_n cos nψ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jj::natural::sin_phi_of_psi;
use crate::jj::params::natural_frequency;

pub const DEFAULT_QUADRATURE_POINTS: usize = 512;
pub const MIN_QUADRATURE_POINTS: usize = 16;

fn periodic_trapezoid(points: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    if points < MIN_QUADRATURE_POINTS {
        return Err(Error::param(
            "quadrature_points",
            format!("need at least {MIN_QUADRATURE_POINTS}, got {points}"),
        ));
    }
    let h = 2.0 * PI / points as f64;
    let sum: f64 = (0..points).map(|i| f(-PI + i as f64 * h)).sum();
    Ok(sum * h / PI)
}

/// A_n = (1/π)∫_{−π}^{π} sin φ(ψ) cos nψ dψ by the periodic trapezoid rule.
#[allow(non_snake_case)]
pub fn fourier_A(alpha: f64, n: usize, quadrature_points: usize) -> Result<f64> {
    natural_frequency(alpha)?;
    let nf = n as f64;
    periodic_trapezoid(quadrature_points, |psi| sin_phi_of_psi(psi, alpha) * (nf * psi).cos())
}

/// (1/π)∫ sin φ(ψ) sin nψ dψ; zero up to rounding because sin φ(ψ) is even.
pub fn fourier_sine(alpha: f64, n: usize, quadrature_points: usize) -> Result<f64> {
    natural_frequency(alpha)?;
    let nf = n as f64;
    periodic_trapezoid(quadrature_points, |psi| sin_phi_of_psi(psi, alpha) * (nf * psi).sin())
}

/// Evaluates `A_0/2 + Σ_{n=1}^{coeffs.len()−1} A_n cos nψ`.
pub fn fourier_series(coeffs: &[f64], psi: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| if n == 0 { 0.5 * a } else { a * (n as f64 * psi).cos() })
        .sum()
}

/// Amplitude B_n and phase β_n of the steady response of
/// `(α²−1) q̈ + γ√(α²−1) q̇ + ω₀² q = −A_n cos(nτ̃)`.
///
/// B_n = |A_n| / √(n²γ²(α²−1) + (n²(α²−1) − ω₀²)²) and
/// β_n = atan2(nγ√(α²−1), n²(α²−1) − ω₀²) in (−π, π].
#[allow(non_snake_case)]
pub fn response_B_beta(alpha: f64, gamma: f64, omega0_sq: f64, n: usize, a_n: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::param("n", "response is defined for harmonics n >= 1"));
    }
    let nu = natural_frequency(alpha)?;
    let nf = n as f64;
    let damping = nf * gamma * nu;
    let detuning = nf * nf * nu * nu - omega0_sq;
    let modulus = damping.hypot(detuning);
    if modulus == 0.0 {
        return Err(Error::SingularResponse { harmonic: n });
    }
    Ok((a_n.abs() / modulus, damping.atan2(detuning)))
}
