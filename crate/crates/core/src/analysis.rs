//! Synchronization diagnostics on recorded traces and coupling sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::FrequencyDistribution;
use crate::error::{Error, Result};
use crate::integrator::{integrate_rk4, IntegrationConfig, SimulationTrace};
use crate::kuramoto::{CouplingSpec, NoiseSpec, OscillatorEnsemble};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;
pub const DEFAULT_R_THRESHOLD: f64 = 0.9;
/// Oscillators whose tail running frequency lies within this distance of
/// the median (relative to max(|median|, 1)) count as frequency locked.
pub const DEFAULT_LOCK_TOLERANCE: f64 = 0.02;
/// Rise above the sub-critical baseline that marks the onset in a sweep.
pub const DEFAULT_ONSET_RISE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncReport {
    /// R at the last recorded sample.
    pub final_r: f64,
    pub tail_mean_r: f64,
    /// max − min of R over the tail window.
    pub tail_r_range: f64,
    pub settled: bool,
    pub settling_time: Option<f64>,
    pub frequency_band_width: f64,
    /// Fraction of oscillators in the frequency band around the median.
    pub locked_fraction: f64,
    pub running_frequencies: Vec<f64>,
}

fn tail_start(len: usize, tail_fraction: f64) -> usize {
    let start = (len as f64 * (1.0 - tail_fraction)).floor() as usize;
    start.min(len - 2)
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Mean running frequency of each oscillator over the last `tail_fraction`
/// of the trace.
pub fn running_frequencies(trace: &SimulationTrace, tail_fraction: f64) -> Result<Vec<f64>> {
    if trace.len() < 2 {
        return Err(Error::param("trace", "need at least two samples"));
    }
    let last = trace.len() - 1;
    let m = tail_start(trace.len(), tail_fraction);
    let w = trace.times[last] - trace.times[m];
    Ok(trace.phases[last]
        .iter()
        .zip(&trace.phases[m])
        .map(|(b, a)| (b - a) / w)
        .collect())
}

/// Fraction of oscillators within `tolerance · max(|median|, 1)` of the
/// median running frequency.
pub fn frequency_locked_fraction(frequencies: &[f64], tolerance: f64) -> f64 {
    if frequencies.is_empty() {
        return 0.0;
    }
    let med = median(frequencies);
    let tol = tolerance * med.abs().max(1.0);
    let count = frequencies.iter().filter(|f| (*f - med).abs() <= tol).count();
    count as f64 / frequencies.len() as f64
}

pub fn analyze(trace: &SimulationTrace, tail_fraction: f64, r_threshold: f64) -> Result<SyncReport> {
    analyze_with_tolerance(trace, tail_fraction, r_threshold, DEFAULT_LOCK_TOLERANCE)
}

pub fn analyze_with_tolerance(
    trace: &SimulationTrace,
    tail_fraction: f64,
    r_threshold: f64,
    lock_tolerance: f64,
) -> Result<SyncReport> {
    if !(tail_fraction > 0.0 && tail_fraction <= 0.5) {
        return Err(Error::param("tail_fraction", format!("must lie in (0, 0.5], got {tail_fraction}")));
    }
    if !(r_threshold > 0.0 && r_threshold < 1.0) {
        return Err(Error::param("R_threshold", format!("must lie in (0, 1), got {r_threshold}")));
    }
    if trace.len() < 2 {
        return Err(Error::param("trace", "need at least two samples"));
    }
    let r = trace.r_series();
    let m = tail_start(r.len(), tail_fraction);
    let tail = &r[m..];
    let tail_mean_r = tail.iter().sum::<f64>() / tail.len() as f64;
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let settled = tail.iter().all(|&x| x >= r_threshold);
    let settling_time = if settled {
        match r.iter().rposition(|&x| x < r_threshold) {
            None => Some(trace.times[0]),
            Some(i) => Some(trace.times[i + 1]),
        }
    } else {
        None
    };
    let freqs = running_frequencies(trace, tail_fraction)?;
    let (fmin, fmax) = freqs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    Ok(SyncReport {
        final_r: *r.last().unwrap_or(&0.0),
        tail_mean_r,
        tail_r_range: hi - lo,
        settled,
        settling_time,
        frequency_band_width: fmax - fmin,
        locked_fraction: frequency_locked_fraction(&freqs, lock_tolerance),
        running_frequencies: freqs,
    })
}

/// Fraction of oscillators with |ω_j| ≤ K R̄, R̄ the mean of `tail_r`.
pub fn locked_fraction(tail_r: &[f64], natural_frequencies: &[f64], k: f64) -> Result<f64> {
    if tail_r.is_empty() {
        return Err(Error::Empty("order parameter tail"));
    }
    if natural_frequencies.is_empty() {
        return Err(Error::Empty("natural frequencies"));
    }
    let r_bar = tail_r.iter().sum::<f64>() / tail_r.len() as f64;
    let part = crate::kuramoto::classify_locked(natural_frequencies, k, r_bar);
    Ok(part.locked.len() as f64 / natural_frequencies.len() as f64)
}

/// Mean-field ensemble swept over K with fixed frequencies and initial
/// phases (common random numbers across grid points).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub distribution: FrequencyDistribution,
    pub n: usize,
    pub seed: u64,
    pub tail_fraction: f64,
    pub onset_rise: f64,
}

impl SweepSpec {
    pub fn new(distribution: FrequencyDistribution, n: usize, seed: u64) -> Self {
        Self {
            distribution,
            n,
            seed,
            tail_fraction: DEFAULT_TAIL_FRACTION,
            onset_rise: DEFAULT_ONSET_RISE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub k_values: Vec<f64>,
    pub steady_r: Vec<f64>,
    /// steady_r at the first grid point.
    pub baseline_r: f64,
    pub kc_empirical: Option<f64>,
    /// Slope of log R against log(K − Kc) over one decade of K − Kc,
    /// [0.05 Kc, 0.5 Kc].
    pub beta_fit: Option<f64>,
    /// Spearman rank correlation of steady_r with K.
    pub spearman: f64,
}

/// Runs one simulation per grid point, in parallel on the current rayon
/// pool, and extracts the onset and the critical exponent.
pub fn sweep_coupling(spec: &SweepSpec, k_grid: &[f64], config: &IntegrationConfig) -> Result<SweepResult> {
    if k_grid.len() < 2 {
        return Err(Error::param("K grid", "need at least two points"));
    }
    if k_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("K grid", "must be strictly increasing"));
    }
    config.validate()?;
    let base = OscillatorEnsemble::sample(
        &spec.distribution,
        spec.n,
        2.0 * std::f64::consts::PI,
        CouplingSpec::MeanField { k: k_grid[0] },
        NoiseSpec::none(),
        spec.seed,
    )?;
    let steady_r = k_grid
        .par_iter()
        .map(|&k| {
            let ens = OscillatorEnsemble {
                coupling: CouplingSpec::MeanField { k },
                ..base.clone()
            };
            ens.coupling.validate(ens.len())?;
            let trace = integrate_rk4(&ens.model(), &ens.phases, config)?;
            let r = trace.r_series();
            let m = tail_start(r.len(), spec.tail_fraction);
            Ok(r[m..].iter().sum::<f64>() / (r.len() - m) as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize_sweep(k_grid.to_vec(), steady_r, spec.onset_rise))
}

/// Onset and exponent extraction for a finished sweep.
///
/// The onset is bracketed by the first grid point whose R exceeds the
/// baseline by `onset_rise`. Kc is where the secant through the bracketing
/// points meets the baseline, i.e. the foot of the rise rather than the
/// level `baseline + onset_rise`, which sits well inside the ordered phase.
pub fn summarize_sweep(k_values: Vec<f64>, steady_r: Vec<f64>, onset_rise: f64) -> SweepResult {
    let baseline_r = steady_r[0];
    let kc_empirical = steady_r
        .iter()
        .position(|&r| r > baseline_r + onset_rise)
        .filter(|&i| i > 0)
        .map(|i| {
            let (k0, k1) = (k_values[i - 1], k_values[i]);
            let (r0, r1) = (steady_r[i - 1], steady_r[i]);
            let kc = k0 - (r0 - baseline_r) * (k1 - k0) / (r1 - r0);
            kc.clamp(k_values[0], k1)
        });
    let beta_fit = kc_empirical.and_then(|kc| fit_exponent(&k_values, &steady_r, kc, 1.05 * kc, 1.5 * kc));
    let spearman = spearman(&k_values, &steady_r);
    SweepResult {
        k_values,
        steady_r,
        baseline_r,
        kc_empirical,
        beta_fit,
        spearman,
    }
}

/// Least-squares slope of log R on log(K − Kc) for K in [k_min, k_max],
/// restricted to K > Kc.
///
/// Finite ensembles round the transition off within a few percent of Kc,
/// so [`summarize_sweep`] starts the window at 1.05 Kc.
pub fn fit_exponent(k_values: &[f64], r: &[f64], kc: f64, k_min: f64, k_max: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = k_values
        .iter()
        .zip(r)
        .filter(|(k, r)| **k > kc && **k >= k_min && **k <= k_max && **r > 0.0)
        .map(|(k, r)| ((k - kc).ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation (Pearson correlation of average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let sxy: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuramoto::classify_locked;
    use proptest::prelude::*;

    fn rotating_trace(freqs: &[f64], t_end: f64, samples: usize) -> SimulationTrace {
        let times: Vec<f64> = (0..samples).map(|i| t_end * i as f64 / (samples - 1) as f64).collect();
        let phases = times.iter().map(|t| freqs.iter().map(|w| w * t).collect()).collect();
        SimulationTrace::from_phases(times, phases).unwrap()
    }

    #[test]
    fn constant_coherence_is_settled_from_start() {
        let tr = rotating_trace(&[0.5; 4], 10.0, 41);
        let rep = analyze(&tr, 0.25, 0.9).unwrap();
        assert!(rep.settled);
        assert_eq!(rep.settling_time, Some(0.0));
        assert!((rep.final_r - 1.0).abs() < 1e-12);
        assert!(rep.frequency_band_width.abs() < 1e-12);
        assert_eq!(rep.locked_fraction, 1.0);
    }

    #[test]
    fn settling_time_is_after_last_dip() {
        let times: Vec<f64> = (0..10).map(f64::from).collect();
        let spread = [3.0, 2.5, 2.0, 0.2, 0.1, 1.5, 0.1, 0.05, 0.0, 0.0];
        let phases = spread.iter().map(|s| vec![-s / 2.0, s / 2.0]).collect();
        let tr = SimulationTrace::from_phases(times, phases).unwrap();
        let rep = analyze(&tr, 0.3, 0.9).unwrap();
        assert!(rep.settled);
        assert_eq!(rep.settling_time, Some(6.0));
    }

    #[test]
    fn incoherent_uncoupled_ensemble() {
        let d = FrequencyDistribution::logistic(0.2).unwrap();
        let ens = OscillatorEnsemble::sample(&d, 100, 2.0 * std::f64::consts::PI, CouplingSpec::MeanField { k: 0.0 }, NoiseSpec::none(), 3).unwrap();
        let tr = integrate_rk4(&ens.model(), &ens.phases, &IntegrationConfig::new(0.05, 50.0)).unwrap();
        let rep = analyze(&tr, 0.25, 0.9).unwrap();
        assert!(!rep.settled);
        assert!(rep.settling_time.is_none());
        assert!(rep.final_r < 0.3, "R = {}", rep.final_r);
        assert!(rep.frequency_band_width > 0.5);
    }

    #[test]
    fn argument_domains() {
        let tr = rotating_trace(&[0.1, 0.2], 1.0, 5);
        assert!(analyze(&tr, 0.0, 0.9).is_err());
        assert!(analyze(&tr, 0.6, 0.9).is_err());
        assert!(analyze(&tr, 0.25, 1.0).is_err());
        let short = rotating_trace(&[0.1], 1.0, 2);
        let single = SimulationTrace {
            times: vec![0.0],
            phases: vec![vec![0.0]],
            order: short.order[..1].to_vec(),
            aux: vec![],
        };
        assert!(analyze(&single, 0.25, 0.9).is_err());
        assert!(analyze(&short, 0.25, 0.9).is_ok());
    }

    #[test]
    fn locked_fraction_cases() {
        assert_eq!(locked_fraction(&[0.5], &[0.1, -0.2], 0.0).unwrap(), 0.0);
        assert_eq!(locked_fraction(&[0.3, 0.5], &[0.0; 7], 1.0).unwrap(), 1.0);
        assert!(locked_fraction(&[], &[0.0], 1.0).is_err());
        let w = [-0.9, -0.3, 0.05, 0.4, 1.2, 2.0];
        let tail = [0.4, 0.6];
        let lf = locked_fraction(&tail, &w, 1.5).unwrap();
        assert_eq!(lf, classify_locked(&w, 1.5, 0.5).locked.len() as f64 / 6.0);
    }

    #[test]
    fn frequency_band_partial_lock() {
        let f = [1.0, 1.001, 0.999, 1.2, 1.0005];
        assert!((frequency_locked_fraction(&f, 0.02) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn onset_from_synthetic_curve() {
        // R = sqrt(K − 0.5) above 0.5, small floor below
        let k: Vec<f64> = (0..16).map(|i| 0.25 + 0.05 * i as f64).collect();
        let r: Vec<f64> = k.iter().map(|&k: &f64| if k > 0.5 { (k - 0.5f64).sqrt() } else { 0.02 }).collect();
        let res = summarize_sweep(k, r, 0.2);
        let kc = res.kc_empirical.unwrap();
        assert!((kc - 0.5).abs() < 0.06, "Kc = {kc}");
        assert!(res.spearman > 0.9);
    }

    #[test]
    fn exponent_of_exact_power_law() {
        let k: Vec<f64> = (1..10).map(|i| 1.0 + 0.05 * i as f64).collect();
        let r: Vec<f64> = k.iter().map(|k| 0.7 * (k - 1.0f64).powf(0.5)).collect();
        assert!((fit_exponent(&k, &r, 1.0, 1.0, 1.5).unwrap() - 0.5).abs() < 1e-12);
        assert!((fit_exponent(&k, &r, 1.0, 1.05, 1.5).unwrap() - 0.5).abs() < 1e-12);
        assert!(fit_exponent(&k, &r, 1.0, 1.0, 1.06).is_none());
        assert!(fit_exponent(&k, &r, 1.0, 1.2, 1.24).is_none());
    }

    #[test]
    fn no_crossing_reports_none() {
        let res = summarize_sweep(vec![0.1, 0.2, 0.3], vec![0.05, 0.06, 0.07], 0.2);
        assert!(res.kc_empirical.is_none());
        assert!(res.beta_fit.is_none());
    }

    #[test]
    fn spearman_examples() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 35.0]) - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_sweep_is_monotone() {
        let spec = SweepSpec::new(FrequencyDistribution::lorentzian(0.2).unwrap(), 200, 1);
        let grid: Vec<f64> = (0..8).map(|i| 0.2 + 0.1 * i as f64).collect();
        let res = sweep_coupling(&spec, &grid, &IntegrationConfig::new(0.05, 60.0).with_record_every(10)).unwrap();
        assert!(res.spearman >= 0.9, "{:?}", res.steady_r);
        assert!(res.kc_empirical.is_some());
    }

    proptest! {
        #[test]
        fn analysis_invariant_under_global_phase_shift(shift in -10.0f64..10.0, seed in 0u64..50) {
            let d = FrequencyDistribution::gaussian(0.3).unwrap();
            let ens = OscillatorEnsemble::sample(&d, 12, 2.0, CouplingSpec::MeanField { k: 1.0 }, NoiseSpec::none(), seed).unwrap();
            let tr = integrate_rk4(&ens.model(), &ens.phases, &IntegrationConfig::new(0.1, 10.0)).unwrap();
            let shifted = SimulationTrace::from_phases(
                tr.times.clone(),
                tr.phases.iter().map(|p| p.iter().map(|x| x + shift).collect()).collect(),
            ).unwrap();
            let a = analyze(&tr, 0.25, 0.9).unwrap();
            let b = analyze(&shifted, 0.25, 0.9).unwrap();
            prop_assert!((a.final_r - b.final_r).abs() < 1e-12);
            prop_assert!((a.tail_mean_r - b.tail_mean_r).abs() < 1e-12);
            prop_assert_eq!(a.settled, b.settled);
            prop_assert!((a.frequency_band_width - b.frequency_band_width).abs() < 1e-9);
        }

        #[test]
        fn locked_fraction_is_a_fraction(w in proptest::collection::vec(-3.0f64..3.0, 1..40), k in 0.0f64..5.0, r in 0.0f64..1.0) {
            let lf = locked_fraction(&[r], &w, k).unwrap();
            prop_assert!((0.0..=1.0).contains(&lf));
        }

        #[test]
        fn zero_band_means_fully_locked(w in -2.0f64..2.0, n in 1usize..20) {
            let tr = rotating_trace(&vec![w; n], 5.0, 11);
            let rep = analyze(&tr, 0.5, 0.5).unwrap();
            prop_assert!(rep.frequency_band_width.abs() < 1e-12);
            prop_assert_eq!(rep.locked_fraction, 1.0);
        }
    }
}
