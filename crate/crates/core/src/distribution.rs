//! Natural-frequency densities g(ω), seeded sampling, and the mean-field
//! threshold quantities derived from them (critical coupling and the
//! square-root onset of the order parameter).

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Logistic,
    Lorentzian,
    Gaussian,
    Delta,
}

impl DistributionKind {
    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::Logistic => "logistic",
            DistributionKind::Lorentzian => "lorentzian",
            DistributionKind::Gaussian => "gaussian",
            DistributionKind::Delta => "delta",
        }
    }
}

/// A unimodal density symmetric about `mean`.
///
/// `width` is β for the logistic density `e^{-z}/(β(1+e^{-z})²)`, the half
/// width b of the normalized Cauchy density `b/(π(ω²+b²))`, and the standard
/// deviation for the Gaussian. It is ignored for `Delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyDistribution {
    pub kind: DistributionKind,
    pub width: f64,
    #[serde(default)]
    pub mean: f64,
}

impl FrequencyDistribution {
    pub fn new(kind: DistributionKind, width: f64, mean: f64) -> Result<Self> {
        let dist = Self { kind, width, mean };
        dist.validate()?;
        Ok(dist)
    }

    pub fn logistic(beta: f64) -> Result<Self> {
        Self::new(DistributionKind::Logistic, beta, 0.0)
    }

    pub fn lorentzian(b: f64) -> Result<Self> {
        Self::new(DistributionKind::Lorentzian, b, 0.0)
    }

    pub fn gaussian(std_dev: f64) -> Result<Self> {
        Self::new(DistributionKind::Gaussian, std_dev, 0.0)
    }

    pub fn delta(mean: f64) -> Self {
        Self {
            kind: DistributionKind::Delta,
            width: 0.0,
            mean,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mean.is_finite() {
            return Err(Error::param("mean", "must be finite"));
        }
        if self.kind != DistributionKind::Delta && !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::param(
                "width",
                format!("must be positive and finite, got {}", self.width),
            ));
        }
        Ok(())
    }

    /// Probability density at `omega`.
    pub fn density(&self, omega: f64) -> Result<f64> {
        self.validate()?;
        let x = omega - self.mean;
        let w = self.width;
        Ok(match self.kind {
            DistributionKind::Logistic => {
                // symmetric form avoids overflow of e^{-z} for large negative z
                let e = (-(x.abs()) / w).exp();
                e / (w * (1.0 + e) * (1.0 + e))
            }
            DistributionKind::Lorentzian => w / (PI * (x * x + w * w)),
            DistributionKind::Gaussian => {
                (-(x * x) / (2.0 * w * w)).exp() / (w * (2.0 * PI).sqrt())
            }
            DistributionKind::Delta => {
                return Err(Error::Unsupported(
                    "the delta distribution has no finite density".into(),
                ))
            }
        })
    }

    /// g''(mean), from the closed-form second derivative of each density.
    pub fn second_derivative_at_center(&self) -> Result<f64> {
        self.validate()?;
        let w = self.width;
        match self.kind {
            // (1/4β) sech²(ω/2β) ≈ (1/4β)(1 − ω²/4β²)
            DistributionKind::Logistic => Ok(-1.0 / (8.0 * w.powi(3))),
            DistributionKind::Lorentzian => Ok(-2.0 / (PI * w.powi(3))),
            DistributionKind::Gaussian => Ok(-1.0 / (w.powi(3) * (2.0 * PI).sqrt())),
            DistributionKind::Delta => Err(Error::Unsupported(
                "the delta distribution has no second derivative".into(),
            )),
        }
    }
}

/// Draws `n` natural frequencies and shifts them so the sample mean equals
/// `dist.mean`. Lorentzian samples are instead shifted so their sample
/// median sits at `dist.mean`: the Cauchy law has no mean, and a mean shift
/// would move the whole sample by a heavy-tailed random amount.
///
/// Logistic and Lorentzian samples use the closed-form inverse CDF on
/// uniforms in (0, 1). Gaussian samples use the ziggurat standard normal from
/// `rand_distr`. All draws come from a ChaCha8 stream seeded with `seed`, so
/// the output is bit-identical across runs and platforms.
pub fn sample_frequencies(dist: &FrequencyDistribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::param("n", "at least one oscillator is required"));
    }
    if dist.kind == DistributionKind::Delta {
        return Ok(vec![dist.mean; n]);
    }
    let mut rng = seeded_rng(seed);
    let w = dist.width;
    let mut values: Vec<f64> = (0..n)
        .map(|_| match dist.kind {
            DistributionKind::Logistic => {
                let u: f64 = rng.sample(Open01);
                w * (u / (1.0 - u)).ln()
            }
            DistributionKind::Lorentzian => {
                let u: f64 = rng.sample(Open01);
                w * (PI * (u - 0.5)).tan()
            }
            DistributionKind::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                w * z
            }
            DistributionKind::Delta => unreachable!(),
        })
        .collect();
    let center = if dist.kind == DistributionKind::Lorentzian {
        median(&values)
    } else {
        values.iter().sum::<f64>() / n as f64
    };
    let shift = dist.mean - center;
    for v in &mut values {
        *v += shift;
    }
    Ok(values)
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

/// g at the center of the distribution (g(0) for zero-mean densities).
pub fn density_at_zero(dist: &FrequencyDistribution) -> Result<f64> {
    if dist.kind == DistributionKind::Delta {
        return Err(Error::Unsupported(
            "g(0) is unbounded for the delta distribution".into(),
        ));
    }
    dist.density(dist.mean)
}

/// Kc = 2 / (π g(0)).
pub fn critical_coupling(dist: &FrequencyDistribution) -> Result<f64> {
    Ok(2.0 / (PI * density_at_zero(dist)?))
}

/// Near-onset order parameter R ≈ sqrt(−8 (K − Kc) / (Kc³ g''(0))).
///
/// Returns 0 at K = Kc exactly and rejects K below threshold.
pub fn scaling_prediction(coupling: f64, dist: &FrequencyDistribution) -> Result<f64> {
    let kc = critical_coupling(dist)?;
    let g2 = dist.second_derivative_at_center()?;
    if g2 >= 0.0 {
        return Err(Error::Unsupported(format!(
            "scaling law needs g''(0) < 0, got {g2}"
        )));
    }
    if !(coupling >= kc) {
        return Err(Error::param(
            "K",
            format!("scaling law applies above threshold; K = {coupling} < Kc = {kc}"),
        ));
    }
    Ok((-8.0 * (coupling - kc) / (kc.powi(3) * g2)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn delta_samples_are_a_point_mass() {
        let d = FrequencyDistribution::delta(0.0);
        assert_eq!(sample_frequencies(&d, 5, 7).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn logistic_sample_mean_and_peak_density() {
        let d = FrequencyDistribution::logistic(0.2).unwrap();
        let xs = sample_frequencies(&d, 10_000, 1).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 1e-12, "mean = {mean}");
        // histogram estimate of g(0) on [−h, h]
        let h = 0.05;
        let count = xs.iter().filter(|x| x.abs() <= h).count() as f64;
        let g0 = count / (2.0 * h * xs.len() as f64);
        assert!((g0 / 1.25 - 1.0).abs() < 0.05, "g0 = {g0}");
    }

    #[test]
    fn lorentzian_sample_median_is_centered() {
        let d = FrequencyDistribution::lorentzian(0.2).unwrap();
        let mut xs = sample_frequencies(&d, 10_000, 1).unwrap();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = 0.5 * (xs[4999] + xs[5000]);
        assert!(median.abs() <= 0.02, "median = {median}");
    }

    #[test]
    fn samples_are_deterministic_per_seed() {
        for d in [
            FrequencyDistribution::logistic(0.3).unwrap(),
            FrequencyDistribution::lorentzian(0.3).unwrap(),
            FrequencyDistribution::gaussian(1.0).unwrap(),
        ] {
            let a = sample_frequencies(&d, 257, 99).unwrap();
            let b = sample_frequencies(&d, 257, 99).unwrap();
            let c = sample_frequencies(&d, 257, 100).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn invalid_width_is_rejected() {
        assert!(FrequencyDistribution::logistic(0.0).is_err());
        assert!(FrequencyDistribution::gaussian(-1.0).is_err());
        let bad = FrequencyDistribution {
            kind: DistributionKind::Lorentzian,
            width: f64::NAN,
            mean: 0.0,
        };
        assert!(sample_frequencies(&bad, 3, 0).is_err());
        let d = FrequencyDistribution::gaussian(1.0).unwrap();
        assert!(sample_frequencies(&d, 0, 0).is_err());
    }

    #[test]
    fn density_at_zero_values() {
        let logi = FrequencyDistribution::logistic(0.2).unwrap();
        assert!(close(density_at_zero(&logi).unwrap(), 1.25, 1e-14));
        let lor = FrequencyDistribution::lorentzian(0.2).unwrap();
        assert!(close(density_at_zero(&lor).unwrap(), 1.591_549_430_918_953, 1e-12));
        assert!(density_at_zero(&FrequencyDistribution::delta(0.0)).is_err());
    }

    #[test]
    fn gaussian_peak_decreases_with_width() {
        let mut last = f64::INFINITY;
        for w in [0.1, 1.0, 10.0, 1e3, 1e6] {
            let g0 = density_at_zero(&FrequencyDistribution::gaussian(w).unwrap()).unwrap();
            assert!(g0 < last);
            last = g0;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn critical_coupling_matches_threshold_values() {
        let logi = FrequencyDistribution::logistic(0.2).unwrap();
        assert!(close(critical_coupling(&logi).unwrap(), 0.509, 5e-4));
        let lor = FrequencyDistribution::lorentzian(0.2).unwrap();
        assert!(close(critical_coupling(&lor).unwrap(), 0.4, 1e-14));
    }

    #[test]
    fn second_derivatives_match_finite_differences() {
        for d in [
            FrequencyDistribution::logistic(0.2).unwrap(),
            FrequencyDistribution::lorentzian(0.2).unwrap(),
            FrequencyDistribution::gaussian(0.7).unwrap(),
        ] {
            let h = 1e-3 * d.width;
            let fd = (d.density(h).unwrap() - 2.0 * d.density(0.0).unwrap()
                + d.density(-h).unwrap())
                / (h * h);
            let exact = d.second_derivative_at_center().unwrap();
            assert!((fd / exact - 1.0).abs() < 1e-5, "{:?}: fd {fd} vs {exact}", d.kind);
        }
    }

    #[test]
    fn scaling_prediction_behaviour() {
        let lor = FrequencyDistribution::lorentzian(0.2).unwrap();
        assert_eq!(scaling_prediction(0.4, &lor).unwrap(), 0.0);
        // hand evaluation: 8·0.1·π·0.2³ / (2·0.4³) = 0.05π
        let r = scaling_prediction(0.5, &lor).unwrap();
        assert!(close(r, (0.05 * PI).sqrt(), 1e-12), "r = {r}");
        let r1 = scaling_prediction(0.45, &lor).unwrap();
        let r2 = scaling_prediction(0.5, &lor).unwrap();
        assert!(close(r2 / r1, 2f64.sqrt(), 1e-12));
        assert!(scaling_prediction(0.3, &lor).is_err());
        assert!(scaling_prediction(1.0, &FrequencyDistribution::delta(0.0)).is_err());
    }
}
