//! Full circuit: N junction phases in series, shunted by one LRC load.
//!
//! In dimensionless time τ = t / t_ref, with t_ref = Φ₀/(2π ρ̄ Ī) built from
//! the mean junction, the state (φ_1..φ_N, q, q̇) obeys
//!
//! ```text
//! dφ_j/dτ  = (t_ref/t0_j) (α_j − sin φ_j − s ε_j q̇)
//! q̈ + γ q̇ + ω₀² q = −(t_ref/L) Σ_k I_k ρ_k sin φ_k
//! ```
//!
//! where q = Q/t_ref is the load charge (so q̇ = dQ/dt is the load current in
//! amperes), γ = t_ref (R + Σρ_k)/L and ω₀² = t_ref²/(LC). The factor `s`
//! scales the back-action of the load on the junctions: 1 is the physical
//! circuit and 0 clamps ε_j to zero, leaving N free-running junctions.
//! For identical junctions t0_j = t_ref and these are the per-junction
//! dimensionless equations with q scaled by t0.
//!
//! [`CircuitModel`] integrates in τ̃ = ν τ with ν = √(α²−1) of the mean
//! junction, so one uncoupled mean junction period is 2π.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{OdeSystem, SimulationTrace};
use crate::jj::natural::psi_of_phi;
use crate::jj::params::{natural_frequency, JunctionArraySpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitState {
    pub phi: Vec<f64>,
    pub q: f64,
    pub q_dot: f64,
}

impl CircuitState {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut y = self.phi.clone();
        y.push(self.q);
        y.push(self.q_dot);
        y
    }

    pub fn from_slice(y: &[f64]) -> Result<Self> {
        if y.len() < 3 {
            return Err(Error::ShapeMismatch {
                context: "circuit state",
                expected: 3,
                found: y.len(),
            });
        }
        let n = y.len() - 2;
        Ok(Self {
            phi: y[..n].to_vec(),
            q: y[n],
            q_dot: y[n + 1],
        })
    }
}

/// Initial condition of the load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadStart {
    /// q = q̇ = 0.
    #[default]
    Rest,
    /// q at the value that balances the cycle-averaged drive Σ I_k ρ_k
    /// (α_k − ν_k), q̇ = 0. Skips the slow charging of the capacitor, whose
    /// time constant is far longer than any simulated run.
    Equilibrium,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitModel {
    alpha: Vec<f64>,
    epsilon: Vec<f64>,
    /// t_ref / t0_j
    rate: Vec<f64>,
    ic_rho: Vec<f64>,
    nu: Vec<f64>,
    gamma: f64,
    omega0_sq: f64,
    drive: f64,
    nu_ref: f64,
    t_ref: f64,
    coupling_scale: f64,
}

impl CircuitModel {
    pub fn new(spec: &JunctionArraySpec, coupling_scale: f64) -> Result<Self> {
        spec.validate()?;
        if !(coupling_scale >= 0.0 && coupling_scale.is_finite()) {
            return Err(Error::param("coupling_scale", "must be finite and >= 0"));
        }
        let n = spec.len();
        let t_ref = spec.reference_time_scale();
        let load = spec.load;
        let mean_ic = spec.junctions.iter().map(|j| j.critical_current).sum::<f64>() / n as f64;
        let nu_ref = natural_frequency(spec.bias_current / mean_ic)?;
        let mut model = Self {
            alpha: Vec::with_capacity(n),
            epsilon: Vec::with_capacity(n),
            rate: Vec::with_capacity(n),
            ic_rho: Vec::with_capacity(n),
            nu: Vec::with_capacity(n),
            gamma: t_ref * (load.resistance + spec.total_resistance()) / load.inductance,
            omega0_sq: t_ref * t_ref / (load.inductance * load.capacitance),
            drive: t_ref / load.inductance,
            nu_ref,
            t_ref,
            coupling_scale,
        };
        for (j, junction) in spec.junctions.iter().enumerate() {
            let alpha = spec.bias_current / junction.critical_current;
            model.alpha.push(alpha);
            model.nu.push(natural_frequency(alpha)?);
            model.epsilon.push(1.0 / junction.critical_current);
            model.rate.push(t_ref / spec.time_scale(j));
            model.ic_rho.push(junction.ic_rho());
        }
        Ok(model)
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn coupling_scale(&self) -> f64 {
        self.coupling_scale
    }

    /// Same circuit with the back-action clamped to zero.
    pub fn uncoupled(&self) -> Self {
        Self {
            coupling_scale: 0.0,
            ..self.clone()
        }
    }

    /// Seconds per unit of τ.
    pub fn reference_time_scale(&self) -> f64 {
        self.t_ref
    }

    /// ν of the mean junction: τ̃ = ν τ.
    pub fn reference_frequency(&self) -> f64 {
        self.nu_ref
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// dτ̃_j / dτ̃, where τ̃_j = √(α_j²−1) t / t0_j is junction j's own
    /// natural time.
    pub fn natural_time_factor(&self, j: usize) -> f64 {
        self.nu[j] * self.rate[j] / self.nu_ref
    }

    /// Shortest uncoupled junction period, in τ̃.
    pub fn shortest_period(&self) -> f64 {
        (0..self.len())
            .map(|j| 2.0 * PI / self.natural_time_factor(j))
            .fold(f64::INFINITY, f64::min)
    }

    /// One two-hundredth of the shortest period.
    pub fn default_dt(&self) -> f64 {
        self.shortest_period() / 200.0
    }

    pub fn equilibrium_charge(&self) -> f64 {
        let mean_drive: f64 = self
            .ic_rho
            .iter()
            .zip(self.alpha.iter().zip(&self.nu))
            .map(|(p, (a, nu))| p * (a - nu))
            .sum();
        -self.drive * mean_drive / self.omega0_sq
    }

    pub fn initial_state(&self, phi: Vec<f64>, start: LoadStart) -> Result<CircuitState> {
        if phi.len() != self.len() {
            return Err(Error::ShapeMismatch {
                context: "initial junction phases",
                expected: self.len(),
                found: phi.len(),
            });
        }
        let q = match start {
            LoadStart::Rest => 0.0,
            LoadStart::Equilibrium => self.equilibrium_charge(),
        };
        Ok(CircuitState { phi, q, q_dot: 0.0 })
    }

    /// d/dτ of the state, written into `dy` laid out as (φ, q, q̇).
    fn derivative_into(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.len();
        let q = y[n];
        let q_dot = y[n + 1];
        let mut forcing = 0.0;
        for j in 0..n {
            let s = y[j].sin();
            forcing += self.ic_rho[j] * s;
            dy[j] = self.rate[j] * (self.alpha[j] - s - self.coupling_scale * self.epsilon[j] * q_dot);
        }
        dy[n] = q_dot;
        dy[n + 1] = -self.gamma * q_dot - self.omega0_sq * q - self.drive * forcing;
    }

    /// Mean dψ_j/dτ̃_j over a recorded run: the natural-angle advance of each
    /// junction divided by its elapsed natural time. Uncoupled junctions
    /// give exactly 1.
    pub fn natural_angle_rates(&self, trace: &SimulationTrace, from: usize) -> Result<Vec<f64>> {
        let last = trace.len().checked_sub(1).ok_or(Error::Empty("trace"))?;
        if from >= last {
            return Err(Error::param("from", "window must contain at least two samples"));
        }
        let span = trace.times[last] - trace.times[from];
        Ok((0..self.len())
            .map(|j| {
                let a = self.alpha[j];
                let dpsi = psi_of_phi(trace.phases[last][j], a) - psi_of_phi(trace.phases[from][j], a);
                dpsi / (span * self.natural_time_factor(j))
            })
            .collect())
    }
}

/// d/dτ of a circuit state.
pub fn full_circuit_rhs(state: &CircuitState, model: &CircuitModel) -> Result<CircuitState> {
    if state.phi.len() != model.len() {
        return Err(Error::ShapeMismatch {
            context: "circuit state",
            expected: model.len(),
            found: state.phi.len(),
        });
    }
    let y = state.to_vec();
    let mut dy = vec![0.0; y.len()];
    model.derivative_into(&y, &mut dy);
    CircuitState::from_slice(&dy)
}

impl OdeSystem for CircuitModel {
    fn dim(&self) -> usize {
        self.len() + 2
    }

    fn phase_count(&self) -> usize {
        self.len()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        self.derivative_into(y, dy);
        let inv = 1.0 / self.nu_ref;
        for v in dy.iter_mut() {
            *v *= inv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{integrate_rk4, IntegrationConfig};
    use crate::jj::params::{Junction, LoadCircuit};

    fn spec(n: usize, ib: f64) -> JunctionArraySpec {
        JunctionArraySpec::identical(
            n,
            Junction::new(10e-6, 4.2e3).unwrap(),
            LoadCircuit::new(1e-9, 2.0, 1e-6).unwrap(),
            ib,
        )
        .unwrap()
    }

    #[test]
    fn clamped_coupling_gives_free_junctions() {
        let m = CircuitModel::new(&spec(3, 12e-6), 0.0).unwrap();
        let st = CircuitState {
            phi: vec![0.1, 1.0, -2.0],
            q: 0.3,
            q_dot: 5.0,
        };
        let d = full_circuit_rhs(&st, &m).unwrap();
        for j in 0..3 {
            assert!((d.phi[j] - (1.2 - st.phi[j].sin())).abs() < 1e-12);
        }
        assert_eq!(d.q, 5.0);
    }

    #[test]
    fn load_equation_terms() {
        let s = spec(2, 12e-6);
        let m = CircuitModel::new(&s, 1.0).unwrap();
        let st = CircuitState {
            phi: vec![0.5, -0.25],
            q: 1e-9,
            q_dot: 2e-7,
        };
        let d = full_circuit_rhs(&st, &m).unwrap();
        let t0 = s.time_scale(0);
        let gamma = t0 * (2.0 + 8.4e3) / 1e-9;
        let w2 = t0 * t0 / 1e-15;
        let forcing = 0.042 * (0.5f64.sin() + (-0.25f64).sin());
        let expect = -gamma * 2e-7 - w2 * 1e-9 - t0 / 1e-9 * forcing;
        assert!((d.q_dot / expect - 1.0).abs() < 1e-12);
        assert!((d.phi[0] - (1.2 - 0.5f64.sin() - 2e-7 / 10e-6)).abs() < 1e-12);
    }

    #[test]
    fn uncoupled_period() {
        let m = CircuitModel::new(&spec(1, 12e-6), 0.0).unwrap();
        // in τ̃ the period is 2π; in τ it is 2π/√(α²−1) = 9.4727
        assert!((2.0 * PI / m.reference_frequency() - 9.4727).abs() < 1e-3);
        assert!((m.shortest_period() - 2.0 * PI).abs() < 1e-12);
        let periods = 50.0;
        let cfg = IntegrationConfig::new(m.default_dt(), periods * 2.0 * PI);
        let y0 = m.initial_state(vec![0.0], LoadStart::Rest).unwrap().to_vec();
        let tr = integrate_rk4(&m, &y0, &cfg).unwrap();
        // φ advances 2π per period
        let advance = tr.final_phases().unwrap()[0];
        assert!((advance / (periods * 2.0 * PI) - 1.0).abs() < 1e-3);
        let rates = m.natural_angle_rates(&tr, 0).unwrap();
        assert!((rates[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn equilibrium_start_has_no_dc_transient() {
        let s = spec(4, 12e-6);
        let m = CircuitModel::new(&s, 1.0).unwrap();
        let q_star = m.equilibrium_charge();
        assert!(q_star < 0.0);
        let st = m.initial_state(vec![0.0; 4], LoadStart::Equilibrium).unwrap();
        assert_eq!(st.q, q_star);
        // the drive averaged over a free-running cycle cancels ω₀² q*
        let nu = natural_frequency(1.2).unwrap();
        let avg_sin = 1.2 - nu;
        let d = m.drive * 4.0 * 0.042 * avg_sin;
        assert!((m.omega0_sq * q_star + d).abs() < 1e-12 * d);
    }

    #[test]
    fn state_roundtrip() {
        let st = CircuitState {
            phi: vec![1.0, 2.0],
            q: 3.0,
            q_dot: 4.0,
        };
        assert_eq!(CircuitState::from_slice(&st.to_vec()).unwrap(), st);
        assert!(CircuitState::from_slice(&[1.0, 2.0]).is_err());
    }
}
