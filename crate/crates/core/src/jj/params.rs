//! Physical junction and load parameters and their dimensionless forms.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Magnetic flux quantum h/2e in webers, to the precision used throughout.
pub const FLUX_QUANTUM: f64 = 2.0678e-15;

/// A resistively shunted junction without capacitance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Junction {
    /// I_c in amperes.
    pub critical_current: f64,
    /// ρ in ohms.
    pub resistance: f64,
}

impl Junction {
    pub fn new(critical_current: f64, resistance: f64) -> Result<Self> {
        let j = Self {
            critical_current,
            resistance,
        };
        j.validate()?;
        Ok(j)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.critical_current > 0.0 && self.critical_current.is_finite()) {
            return Err(Error::param("critical_current", "must be positive"));
        }
        if !(self.resistance > 0.0 && self.resistance.is_finite()) {
            return Err(Error::param("resistance", "must be positive"));
        }
        Ok(())
    }

    /// I_c ρ, the characteristic voltage.
    pub fn ic_rho(&self) -> f64 {
        self.critical_current * self.resistance
    }
}

/// Series LRC load shunting the whole array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadCircuit {
    pub inductance: f64,
    pub resistance: f64,
    pub capacitance: f64,
}

impl LoadCircuit {
    pub fn new(inductance: f64, resistance: f64, capacitance: f64) -> Result<Self> {
        let l = Self {
            inductance,
            resistance,
            capacitance,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("inductance", self.inductance),
            ("load resistance", self.resistance),
            ("capacitance", self.capacitance),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param("load", format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Load values per junction: (L/N, R/N, N C).
pub fn scaled_load(load: &LoadCircuit, n: usize) -> Result<(f64, f64, f64)> {
    if n == 0 {
        return Err(Error::param("N", "array must contain at least one junction"));
    }
    let nf = n as f64;
    Ok((load.inductance / nf, load.resistance / nf, load.capacitance * nf))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JunctionArraySpec {
    pub junctions: Vec<Junction>,
    pub load: LoadCircuit,
    pub bias_current: f64,
    pub flux_quantum: f64,
}

impl JunctionArraySpec {
    pub fn new(junctions: Vec<Junction>, load: LoadCircuit, bias_current: f64) -> Result<Self> {
        let spec = Self {
            junctions,
            load,
            bias_current,
            flux_quantum: FLUX_QUANTUM,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn identical(n: usize, junction: Junction, load: LoadCircuit, bias_current: f64) -> Result<Self> {
        Self::new(vec![junction; n], load, bias_current)
    }

    /// `n` junctions whose critical currents and resistances are drawn
    /// uniformly within the given relative spreads around `nominal`, e.g.
    /// `ic_spread = 1e-3` for I_c within ±0.1 %.
    pub fn with_spread(
        n: usize,
        nominal: Junction,
        ic_spread: f64,
        rho_spread: f64,
        seed: u64,
        load: LoadCircuit,
        bias_current: f64,
    ) -> Result<Self> {
        for (name, s) in [("ic_spread", ic_spread), ("rho_spread", rho_spread)] {
            if !(0.0..1.0).contains(&s) {
                return Err(Error::param(name, format!("relative spread must lie in [0, 1), got {s}")));
            }
        }
        let mut rng = stream_rng(seed, Stream::Junctions);
        let junctions = (0..n)
            .map(|_| {
                let u: f64 = rng.random_range(-1.0..1.0);
                let v: f64 = rng.random_range(-1.0..1.0);
                Junction {
                    critical_current: nominal.critical_current * (1.0 + ic_spread * u),
                    resistance: nominal.resistance * (1.0 + rho_spread * v),
                }
            })
            .collect();
        Self::new(junctions, load, bias_current)
    }

    pub fn validate(&self) -> Result<()> {
        if self.junctions.is_empty() {
            return Err(Error::param("N", "array must contain at least one junction"));
        }
        self.load.validate()?;
        if !(self.flux_quantum > 0.0 && self.flux_quantum.is_finite()) {
            return Err(Error::param("flux_quantum", "must be positive"));
        }
        if !(self.bias_current > 0.0 && self.bias_current.is_finite()) {
            return Err(Error::param("bias_current", "must be positive"));
        }
        for (index, j) in self.junctions.iter().enumerate() {
            j.validate()?;
            let alpha = self.bias_current / j.critical_current;
            if alpha <= 1.0 {
                return Err(Error::BelowCriticalBias { index, alpha });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.junctions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.junctions.is_empty()
    }

    /// Φ₀ / (2π ρ_j I_j): seconds per unit of junction j's dimensionless time.
    pub fn time_scale(&self, j: usize) -> f64 {
        self.flux_quantum / (2.0 * PI * self.junctions[j].ic_rho())
    }

    /// Time scale built from the mean resistance and mean critical current.
    pub fn reference_time_scale(&self) -> f64 {
        let n = self.len() as f64;
        let rho = self.junctions.iter().map(|j| j.resistance).sum::<f64>() / n;
        let ic = self.junctions.iter().map(|j| j.critical_current).sum::<f64>() / n;
        self.flux_quantum / (2.0 * PI * rho * ic)
    }

    pub fn total_resistance(&self) -> f64 {
        self.junctions.iter().map(|j| j.resistance).sum()
    }

    /// True when every junction matches the first within `rel_tol`.
    pub fn is_identical(&self, rel_tol: f64) -> bool {
        let first = self.junctions[0];
        let close = |a: f64, b: f64| (a - b).abs() <= rel_tol * a.abs().max(b.abs());
        self.junctions.iter().all(|j| {
            close(j.critical_current, first.critical_current) && close(j.resistance, first.resistance)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessJunction {
    /// I_b / I_j
    pub alpha: f64,
    pub gamma: f64,
    pub omega0_sq: f64,
    /// In 1/ohm: multiplies the I_k ρ_k voltage sum that drives the load.
    pub delta: f64,
    /// 1 / I_j, per ampere.
    pub epsilon: f64,
}

pub fn dimensionless_coeffs(spec: &JunctionArraySpec, j: usize) -> Result<DimensionlessJunction> {
    let n = spec.len();
    if j >= n {
        return Err(Error::param("j", format!("index {j} out of range for {n} junctions")));
    }
    let junction = spec.junctions[j];
    let alpha = spec.bias_current / junction.critical_current;
    if alpha <= 1.0 {
        return Err(Error::BelowCriticalBias { index: j, alpha });
    }
    let (l, r, c) = scaled_load(&spec.load, n)?;
    let t0 = spec.time_scale(j);
    let mean_rho = spec.total_resistance() / n as f64;
    Ok(DimensionlessJunction {
        alpha,
        gamma: t0 / l * (r + mean_rho),
        omega0_sq: t0 * t0 / (l * c),
        delta: t0 / l,
        epsilon: 1.0 / junction.critical_current,
    })
}

/// Angular frequency √(α²−1) of an uncoupled junction in its own
/// dimensionless time.
pub fn natural_frequency(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::param("alpha", format!("no running solution for alpha = {alpha}")));
    }
    Ok(((alpha - 1.0) * (alpha + 1.0)).sqrt())
}
