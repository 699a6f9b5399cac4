//! Fixed-step integrators: classical RK4 for ODEs and Euler–Maruyama for
//! systems with additive white noise.
//!
//! The first `phase_count()` state components are treated as phases: the
//! recorded order parameter is computed from them, and they are the columns
//! of the phase snapshots. Anything after them (the load charge of a
//! junction circuit, say) goes to the auxiliary series.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kuramoto::{order_parameter, OrderParameter};
use crate::rng::{stream_rng, Stream};

/// States whose magnitude exceeds this are treated as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e12;

pub trait OdeSystem {
    fn dim(&self) -> usize;

    /// Number of leading state components that are phases.
    fn phase_count(&self) -> usize {
        self.dim()
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// Additive noise of equal amplitude on every phase component.
pub trait StochasticSystem: OdeSystem {
    fn diffusion(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    #[serde(default)]
    pub seed: u64,
}

impl IntegrationConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            record_every: 1,
            seed: 0,
        }
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(Error::param("t_end", format!("must be >= dt, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(Error::param("record_every", "must be >= 1"));
        }
        Ok(())
    }

    /// Number of steps. When t_end is not a multiple of dt the count is
    /// rounded up and the last step is shortened so the run ends at t_end.
    pub fn steps(&self) -> usize {
        let ratio = self.t_end / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }

    fn time_at(&self, step: usize, steps: usize) -> f64 {
        if step == steps {
            self.t_end
        } else {
            step as f64 * self.dt
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    /// One row of unwrapped phases per recorded sample.
    pub phases: Vec<Vec<f64>>,
    pub order: Vec<OrderParameter>,
    /// Non-phase state components per sample; empty when there are none.
    pub aux: Vec<Vec<f64>>,
}

impl SimulationTrace {
    fn with_capacity(samples: usize) -> Self {
        Self {
            times: Vec::with_capacity(samples),
            phases: Vec::with_capacity(samples),
            order: Vec::with_capacity(samples),
            aux: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn oscillator_count(&self) -> usize {
        self.phases.first().map_or(0, Vec::len)
    }

    pub fn final_phases(&self) -> Option<&[f64]> {
        self.phases.last().map(Vec::as_slice)
    }

    pub fn r_series(&self) -> Vec<f64> {
        self.order.iter().map(|o| o.r).collect()
    }

    /// Builds a trace from recorded phases, recomputing the order parameter.
    pub fn from_phases(times: Vec<f64>, phases: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != phases.len() {
            return Err(Error::ShapeMismatch {
                context: "trace samples",
                expected: times.len(),
                found: phases.len(),
            });
        }
        let order = phases
            .iter()
            .map(|p| order_parameter(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times,
            phases,
            order,
            aux: Vec::new(),
        })
    }

    fn record(&mut self, t: f64, y: &[f64], n_phase: usize) -> Result<()> {
        let phases = &y[..n_phase];
        self.order.push(order_parameter(phases)?);
        self.times.push(t);
        self.phases.push(phases.to_vec());
        if y.len() > n_phase {
            self.aux.push(y[n_phase..].to_vec());
        }
        Ok(())
    }
}

fn check_state(y: &[f64], last_good_time: f64) -> Result<()> {
    if y.iter().all(|v| v.is_finite() && v.abs() <= DIVERGENCE_BOUND) {
        Ok(())
    } else {
        Err(Error::Divergence { last_good_time })
    }
}

fn prepare<S: OdeSystem + ?Sized>(system: &S, initial: &[f64], config: &IntegrationConfig) -> Result<usize> {
    config.validate()?;
    if initial.len() != system.dim() {
        return Err(Error::ShapeMismatch {
            context: "initial state",
            expected: system.dim(),
            found: initial.len(),
        });
    }
    if system.phase_count() == 0 {
        return Err(Error::Empty("phase vector"));
    }
    check_state(initial, 0.0)?;
    Ok(config.steps())
}

fn should_record(step: usize, steps: usize, every: usize) -> bool {
    step % every == 0 || step == steps
}

/// Classical fourth-order Runge–Kutta with a fixed step.
pub fn integrate_rk4<S: OdeSystem + ?Sized>(
    system: &S,
    initial: &[f64],
    config: &IntegrationConfig,
) -> Result<SimulationTrace> {
    let steps = prepare(system, initial, config)?;
    let n = system.dim();
    let n_phase = system.phase_count();
    let mut trace = SimulationTrace::with_capacity(steps / config.record_every + 2);
    let mut y = initial.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    trace.record(0.0, &y, n_phase)?;

    let mut t = 0.0;
    for step in 1..=steps {
        let t_next = config.time_at(step, steps);
        let h = t_next - t;
        system.rhs(t, &y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        system.rhs(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        system.rhs(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        system.rhs(t + h, &tmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check_state(&y, t)?;
        t = t_next;
        if should_record(step, steps, config.record_every) {
            trace.record(t, &y, n_phase)?;
        }
    }
    Ok(trace)
}

/// Euler–Maruyama: `y += f(y) dt + D sqrt(dt) ξ` on the phase components,
/// with ξ drawn from the noise stream of `config.seed`. Non-phase components
/// receive no noise.
pub fn integrate_euler_maruyama<S: StochasticSystem + ?Sized>(
    system: &S,
    initial: &[f64],
    config: &IntegrationConfig,
) -> Result<SimulationTrace> {
    let steps = prepare(system, initial, config)?;
    let amplitude = system.diffusion();
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::param("diffusion", format!("must be finite and >= 0, got {amplitude}")));
    }
    let n = system.dim();
    let n_phase = system.phase_count();
    let mut rng = stream_rng(config.seed, Stream::Noise);
    let mut trace = SimulationTrace::with_capacity(steps / config.record_every + 2);
    let mut y = initial.to_vec();
    let mut f = vec![0.0; n];
    trace.record(0.0, &y, n_phase)?;

    let mut t = 0.0;
    for step in 1..=steps {
        let t_next = config.time_at(step, steps);
        let h = t_next - t;
        system.rhs(t, &y, &mut f);
        for i in 0..n {
            y[i] += f[i] * h;
        }
        if amplitude > 0.0 {
            let scale = amplitude * h.sqrt();
            for yi in y.iter_mut().take(n_phase) {
                let xi: f64 = StandardNormal.sample(&mut rng);
                *yi += scale * xi;
            }
        }
        check_state(&y, t)?;
        t = t_next;
        if should_record(step, steps, config.record_every) {
            trace.record(t, &y, n_phase)?;
        }
    }
    Ok(trace)
}
