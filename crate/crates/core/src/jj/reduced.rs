//! Phase-only model of a weakly coupled junction array, obtained by
//! averaging the load back-action over one junction cycle:
//!
//! ```text
//! dψ_j/dτ̃ = 1 − (K_j/N) Σ_k A_k sin(ψ_j − ψ_k − ζ_j)
//! ```
//!
//! with time τ̃ = √(α_j²−1) τ per junction. The sum includes k = j.
//!
//! Carrying the averaging through with the steady load response
//! `q = sgn(A_1) B_1 cos(ψ + β_1)` gives the minus sign above. The same
//! expression is often printed with a plus sign; that variant is kept as
//! [`CouplingSign::Printed`] for comparison, and disagrees with the full
//! circuit (see the `reduced_model` example).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::OdeSystem;
use crate::jj::params::{dimensionless_coeffs, natural_frequency, JunctionArraySpec};

/// Relative tolerance for treating an array as identical junctions.
pub const IDENTICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingSign {
    /// `1 − (K_j/N) Σ ...`, consistent with the full circuit.
    #[default]
    Derived,
    /// `1 + (K_j/N) Σ ...`.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedModel {
    /// K_j = ε_j δ_j / (√(α_j²−1) √(γ_j²(α_j²−1) + ((α_j²−1) − ω₀ⱼ²)²)).
    pub k: Vec<f64>,
    /// A_k = I_k ρ_k (1 − α_k² + α_k √(α_k²−1)), in volts.
    pub a: Vec<f64>,
    /// Phase lag ζ_j = β_1 of junction j's load response, in (−π, π].
    pub zeta: Vec<f64>,
    /// K for an array of identical junctions, None otherwise.
    pub identical_k: Option<f64>,
    /// The alternative K_j with (α²−1)² in place of (α²−1) inside the
    /// root. Reported only; never used by the dynamics.
    pub printed_k: Vec<f64>,
    /// √(α_j²−1), the converter from τ to τ̃ for each junction.
    pub nu: Vec<f64>,
    pub sign: CouplingSign,
}

impl ReducedModel {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// Multiplies every K_j (and the identical K) by `scale`, matching a
    /// circuit whose back-action ε_j q̇ is scaled the same way.
    pub fn with_coupling_scale(mut self, scale: f64) -> Self {
        for k in &mut self.k {
            *k *= scale;
        }
        self.identical_k = self.identical_k.map(|k| k * scale);
        self
    }

    pub fn with_sign(mut self, sign: CouplingSign) -> Self {
        self.sign = sign;
        self
    }

    /// Effective pairwise strengths K_j A_k / N for a given j.
    pub fn effective_coupling(&self, j: usize) -> Vec<f64> {
        let n = self.len() as f64;
        self.a.iter().map(|a| self.k[j] * a / n).collect()
    }
}

pub fn reduced_coefficients(spec: &JunctionArraySpec) -> Result<ReducedModel> {
    spec.validate()?;
    let n = spec.len();
    let mut model = ReducedModel {
        k: Vec::with_capacity(n),
        a: Vec::with_capacity(n),
        zeta: Vec::with_capacity(n),
        identical_k: None,
        printed_k: Vec::with_capacity(n),
        nu: Vec::with_capacity(n),
        sign: CouplingSign::Derived,
    };
    for j in 0..n {
        let d = dimensionless_coeffs(spec, j)?;
        let nu = natural_frequency(d.alpha)?;
        let nu2 = nu * nu;
        let damping = d.gamma * nu;
        let detuning = nu2 - d.omega0_sq;
        let modulus = damping.hypot(detuning);
        if modulus == 0.0 {
            return Err(Error::SingularResponse { harmonic: 1 });
        }
        model.k.push(d.epsilon * d.delta / (nu * modulus));
        model.printed_k.push(
            d.epsilon * d.delta / (nu * (d.gamma.powi(2) * nu2.powi(2) + (d.omega0_sq - nu2.powi(2)).powi(2)).sqrt()),
        );
        model.zeta.push(damping.atan2(detuning));
        model.a.push(spec.junctions[j].ic_rho() * first_harmonic_weight(d.alpha, nu));
        model.nu.push(nu);
    }
    if spec.is_identical(IDENTICAL_TOLERANCE) {
        model.identical_k = Some(identical_coupling(spec)?);
    }
    Ok(model)
}

/// 1 − α² + α√(α²−1) = −A_1/2, positive for every α > 1.
fn first_harmonic_weight(alpha: f64, nu: f64) -> f64 {
    1.0 - alpha * alpha + alpha * nu
}

/// K = B_1 β / (2√(α²−1)) for an array of identical junctions, with
/// β = δρ the dimensionless drive of the load by Σ sin φ_k and B_1 the
/// response amplitude to the dimensionless first harmonic A_1.
pub fn identical_coupling(spec: &JunctionArraySpec) -> Result<f64> {
    spec.validate()?;
    if !spec.is_identical(IDENTICAL_TOLERANCE) {
        return Err(Error::param("junctions", "identical_coupling needs identical junctions"));
    }
    let d = dimensionless_coeffs(spec, 0)?;
    let nu = natural_frequency(d.alpha)?;
    let a1 = -2.0 * first_harmonic_weight(d.alpha, nu);
    let (b1, _) = crate::jj::fourier::response_B_beta(d.alpha, d.gamma, d.omega0_sq, 1, a1)?;
    let beta = d.delta * spec.junctions[0].resistance;
    Ok(b1 * beta / (2.0 * nu))
}

/// Writes dψ_j/dτ̃ into `out`, O(N) via the weighted phasor Σ A_k e^{iψ_k}.
fn drift_into(psi: &[f64], model: &ReducedModel, out: &mut [f64]) {
    let n = psi.len() as f64;
    let (mut c, mut s) = (0.0, 0.0);
    for (p, a) in psi.iter().zip(&model.a) {
        let (sn, cs) = p.sin_cos();
        c += a * cs;
        s += a * sn;
    }
    let sign = match model.sign {
        CouplingSign::Derived => -1.0,
        CouplingSign::Printed => 1.0,
    };
    for j in 0..psi.len() {
        // Σ_k A_k sin(x − ψ_k) = sin x · C − cos x · S
        let (sx, cx) = (psi[j] - model.zeta[j]).sin_cos();
        out[j] = 1.0 + sign * model.k[j] / n * (sx * c - cx * s);
    }
}

pub fn reduced_drift(psi: &[f64], model: &ReducedModel) -> Result<Vec<f64>> {
    if psi.len() != model.len() {
        return Err(Error::ShapeMismatch {
            context: "reduced model phases",
            expected: model.len(),
            found: psi.len(),
        });
    }
    if psi.is_empty() {
        return Err(Error::Empty("phase vector"));
    }
    let mut out = vec![0.0; psi.len()];
    drift_into(psi, model, &mut out);
    Ok(out)
}

impl OdeSystem for ReducedModel {
    fn dim(&self) -> usize {
        self.len()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        drift_into(y, self, dy);
    }
}
