//! Phase dynamics of the Kuramoto model and its network and noisy variants.
//!
//! All drift functions use the attractive convention
//!
//! ```text
//! dθ_j/dt = ω_j + (K/N) Σ_i sin(θ_i − θ_j) = ω_j + K R sin(ψ − θ_j)
//! ```
//!
//! so that the mean-field form with the order parameter (R, ψ) holds as
//! written. The pairwise form is sometimes printed as sin(θ_j − θ_i), which
//! is the repulsive sign; the two only differ by K → −K.
//!
//! Phases are stored unwrapped and only reduced modulo 2π inside
//! trigonometric evaluations.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distribution::{sample_frequencies, FrequencyDistribution};
use crate::error::{Error, Result};
use crate::integrator::{OdeSystem, StochasticSystem};
use crate::rng::{stream_rng, Stream};

/// R e^{iψ} = (1/N) Σ_j e^{iθ_j}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameter {
    pub r: f64,
    /// Mean phase in (−π, π]; 0 when R is numerically zero.
    pub psi: f64,
}

/// Threshold below which the mean phase is reported as 0.
pub const COHERENCE_FLOOR: f64 = 1e-12;

pub fn order_parameter(phases: &[f64]) -> Result<OrderParameter> {
    if phases.is_empty() {
        return Err(Error::Empty("phase vector"));
    }
    let (c, s) = mean_phasor(phases);
    Ok(order_from_phasor(c, s))
}

fn mean_phasor(phases: &[f64]) -> (f64, f64) {
    let (mut c, mut s) = (0.0, 0.0);
    for &theta in phases {
        let (sn, cs) = theta.sin_cos();
        c += cs;
        s += sn;
    }
    let n = phases.len() as f64;
    (c / n, s / n)
}

fn order_from_phasor(c: f64, s: f64) -> OrderParameter {
    let r = c.hypot(s).min(1.0);
    if r < COHERENCE_FLOOR {
        return OrderParameter { r, psi: 0.0 };
    }
    let mut psi = s.atan2(c);
    if psi <= -PI {
        psi = PI;
    }
    OrderParameter { r, psi }
}

/// Dense row-major square matrix used for coupling weights and adjacency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::ShapeMismatch {
                    context: "matrix row",
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    /// All-ones adjacency without self loops.
    pub fn complete_graph(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 })
    }

    /// Undirected ring where each node links to its `k` nearest neighbours
    /// on either side.
    pub fn ring(n: usize, k: usize) -> Self {
        Self::from_fn(n, |i, j| {
            let d = i.abs_diff(j);
            let d = d.min(n - d);
            if d >= 1 && d <= k {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CouplingSpec {
    MeanField {
        k: f64,
    },
    /// Pairwise strengths `k[j][i]` gated by a binary symmetric adjacency.
    Network {
        k: SquareMatrix,
        adjacency: SquareMatrix,
    },
}

impl CouplingSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            CouplingSpec::MeanField { k } => {
                if !(*k >= 0.0 && k.is_finite()) {
                    return Err(Error::param("K", format!("must be finite and >= 0, got {k}")));
                }
            }
            CouplingSpec::Network { k, adjacency } => {
                for (m, ctx) in [(k, "coupling matrix"), (adjacency, "adjacency matrix")] {
                    if m.size() != n {
                        return Err(Error::ShapeMismatch {
                            context: ctx,
                            expected: n,
                            found: m.size(),
                        });
                    }
                }
                if k.data.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::param("K", "network weights must be finite and >= 0"));
                }
                for i in 0..n {
                    if adjacency.get(i, i) != 0.0 {
                        return Err(Error::param("A", format!("self loop at node {i}")));
                    }
                    for j in 0..n {
                        let a = adjacency.get(i, j);
                        if a != 0.0 && a != 1.0 {
                            return Err(Error::param("A", format!("entry ({i},{j}) = {a} is not binary")));
                        }
                        if a != adjacency.get(j, i) {
                            return Err(Error::param("A", format!("not symmetric at ({i},{j})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Dispersion amplitude σ on the natural frequencies and white-noise
/// intensity Γ of the stochastic model
/// `dθ_j = (σ ω_j + coupling) dt + sqrt(Γ) dW_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    /// σ = 1, Γ = 0: the deterministic model.
    pub fn none() -> Self {
        Self {
            sigma: 1.0,
            gamma: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::param("sigma", "must be finite and >= 0"));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param("gamma", "must be finite and >= 0"));
        }
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::none()
    }
}

fn check_same_len(phases: &[f64], freqs: &[f64]) -> Result<()> {
    if phases.len() != freqs.len() {
        return Err(Error::ShapeMismatch {
            context: "natural frequencies",
            expected: phases.len(),
            found: freqs.len(),
        });
    }
    if phases.is_empty() {
        return Err(Error::Empty("phase vector"));
    }
    Ok(())
}

/// Writes `σ ω_j + K R sin(ψ − θ_j)` into `out` using one pass for the
/// order parameter. `R sin(ψ − θ)` is evaluated as `S cos θ − C sin θ` with
/// (C, S) the mean phasor, so no atan2 is needed.
fn mean_field_into(phases: &[f64], freqs: &[f64], k: f64, sigma: f64, trig: &mut [(f64, f64)], out: &mut [f64]) {
    let n = phases.len() as f64;
    let (mut c, mut s) = (0.0, 0.0);
    for (slot, &theta) in trig.iter_mut().zip(phases) {
        let (sn, cs) = theta.sin_cos();
        *slot = (sn, cs);
        c += cs;
        s += sn;
    }
    c /= n;
    s /= n;
    for ((o, &(sn, cs)), &w) in out.iter_mut().zip(trig.iter()).zip(freqs) {
        *o = sigma * w + k * (s * cs - c * sn);
    }
}

pub fn drift_mean_field(phases: &[f64], natural_frequencies: &[f64], k: f64) -> Result<Vec<f64>> {
    check_same_len(phases, natural_frequencies)?;
    CouplingSpec::MeanField { k }.validate(phases.len())?;
    let mut trig = vec![(0.0, 0.0); phases.len()];
    let mut out = vec![0.0; phases.len()];
    mean_field_into(phases, natural_frequencies, k, 1.0, &mut trig, &mut out);
    Ok(out)
}

fn network_into(phases: &[f64], freqs: &[f64], k: &SquareMatrix, a: &SquareMatrix, sigma: f64, trig: &mut [(f64, f64)], out: &mut [f64]) {
    for (slot, &theta) in trig.iter_mut().zip(phases) {
        *slot = theta.sin_cos();
    }
    for j in 0..phases.len() {
        let (sj, cj) = trig[j];
        let mut acc = 0.0;
        for (i, (&kji, &aji)) in k.row(j).iter().zip(a.row(j)).enumerate() {
            if aji != 0.0 {
                let (si, ci) = trig[i];
                // sin(θ_i − θ_j)
                acc += kji * aji * (si * cj - ci * sj);
            }
        }
        out[j] = sigma * freqs[j] + acc;
    }
}

/// dθ_j/dt = ω_j + Σ_i K_ji A_ji sin(θ_i − θ_j).
pub fn drift_network(phases: &[f64], natural_frequencies: &[f64], coupling: &CouplingSpec) -> Result<Vec<f64>> {
    check_same_len(phases, natural_frequencies)?;
    coupling.validate(phases.len())?;
    let mut out = vec![0.0; phases.len()];
    let mut trig = vec![(0.0, 0.0); phases.len()];
    match coupling {
        CouplingSpec::Network { k, adjacency } => {
            network_into(phases, natural_frequencies, k, adjacency, 1.0, &mut trig, &mut out)
        }
        CouplingSpec::MeanField { k } => {
            mean_field_into(phases, natural_frequencies, *k, 1.0, &mut trig, &mut out)
        }
    }
    Ok(out)
}

/// Drift `σ ω_j + K R sin(ψ − θ_j)` and the per-oscillator diffusion
/// amplitude `sqrt(Γ)` of the noisy mean-field model.
pub fn noisy_drift_and_diffusion(
    phases: &[f64],
    natural_frequencies: &[f64],
    k: f64,
    noise: &NoiseSpec,
) -> Result<(Vec<f64>, f64)> {
    check_same_len(phases, natural_frequencies)?;
    noise.validate()?;
    CouplingSpec::MeanField { k }.validate(phases.len())?;
    let mut trig = vec![(0.0, 0.0); phases.len()];
    let mut out = vec![0.0; phases.len()];
    mean_field_into(phases, natural_frequencies, k, noise.sigma, &mut trig, &mut out);
    Ok((out, noise.gamma.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LockPartition {
    pub locked: Vec<usize>,
    pub drifting: Vec<usize>,
}

/// Oscillator j is locked iff |ω_j| ≤ K R (boundary inclusive).
pub fn classify_locked(natural_frequencies: &[f64], k: f64, r: f64) -> LockPartition {
    let bound = k * r;
    let mut part = LockPartition::default();
    for (j, w) in natural_frequencies.iter().enumerate() {
        if w.abs() <= bound {
            part.locked.push(j);
        } else {
            part.drifting.push(j);
        }
    }
    part
}

/// Phases, natural frequencies, coupling and noise of one Kuramoto system.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorEnsemble {
    pub phases: Vec<f64>,
    pub natural_frequencies: Vec<f64>,
    pub coupling: CouplingSpec,
    pub noise: NoiseSpec,
}

impl OscillatorEnsemble {
    pub fn new(
        phases: Vec<f64>,
        natural_frequencies: Vec<f64>,
        coupling: CouplingSpec,
        noise: NoiseSpec,
    ) -> Result<Self> {
        check_same_len(&phases, &natural_frequencies)?;
        coupling.validate(phases.len())?;
        noise.validate()?;
        Ok(Self {
            phases,
            natural_frequencies,
            coupling,
            noise,
        })
    }

    /// Samples frequencies from `dist` and initial phases uniformly on
    /// [−spread/2, spread/2) (spread = 2π gives random phases on the circle),
    /// each from its own stream of `seed`.
    pub fn sample(
        dist: &FrequencyDistribution,
        n: usize,
        phase_spread: f64,
        coupling: CouplingSpec,
        noise: NoiseSpec,
        seed: u64,
    ) -> Result<Self> {
        let freqs = sample_frequencies(dist, n, seed)?;
        let phases = uniform_phases(n, phase_spread, seed);
        Self::new(phases, freqs, coupling, noise)
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn order_parameter(&self) -> OrderParameter {
        let (c, s) = mean_phasor(&self.phases);
        order_from_phasor(c, s)
    }

    /// The vector field of this ensemble, for use with the integrators.
    pub fn model(&self) -> KuramotoModel {
        KuramotoModel {
            natural_frequencies: self.natural_frequencies.clone(),
            coupling: self.coupling.clone(),
            noise: self.noise,
        }
    }
}

/// Initial phases uniform on [−spread/2, spread/2).
pub fn uniform_phases(n: usize, spread: f64, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, Stream::InitialPhases);
    (0..n)
        .map(|_| spread * (rng.random::<f64>() - 0.5))
        .collect()
}

/// Kuramoto vector field (mean-field or network) with optional frequency
/// dispersion σ and additive white noise Γ.
#[derive(Debug, Clone)]
pub struct KuramotoModel {
    natural_frequencies: Vec<f64>,
    coupling: CouplingSpec,
    noise: NoiseSpec,
}

impl KuramotoModel {
    pub fn natural_frequencies(&self) -> &[f64] {
        &self.natural_frequencies
    }
}

impl OdeSystem for KuramotoModel {
    fn dim(&self) -> usize {
        self.natural_frequencies.len()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        // scratch is per call; systems stay immutable and shareable
        let mut trig = vec![(0.0, 0.0); y.len()];
        match &self.coupling {
            CouplingSpec::MeanField { k } => {
                mean_field_into(y, &self.natural_frequencies, *k, self.noise.sigma, &mut trig, dy)
            }
            CouplingSpec::Network { k, adjacency } => {
                network_into(y, &self.natural_frequencies, k, adjacency, self.noise.sigma, &mut trig, dy)
            }
        }
    }
}

impl StochasticSystem for KuramotoModel {
    fn diffusion(&self) -> f64 {
        self.noise.gamma.sqrt()
    }
}
