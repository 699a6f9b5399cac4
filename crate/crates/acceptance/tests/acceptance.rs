//! Acceptance criteria AC-1..AC-8. Each test prints one `AC-n PASS|FAIL`
//! line before asserting.

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestCaseError, TestRunner};

use kuramoto_sync::analysis::frequency_locked_fraction;
use kuramoto_sync::config::RunConfig;
use kuramoto_sync::distribution::{critical_coupling, density_at_zero, FrequencyDistribution};
use kuramoto_sync::integrator::{integrate_rk4, IntegrationConfig, OdeSystem, SimulationTrace};
use kuramoto_sync::jj::{
    fourier_A, fourier_series, phi_of_psi, psi_of_phi, reduced_coefficients, sin_phi_of_psi, CircuitModel,
    LoadStart, DEFAULT_QUADRATURE_POINTS,
};
use kuramoto_sync::kuramoto::{drift_mean_field, drift_network, order_parameter, uniform_phases, CouplingSpec, SquareMatrix};
use kuramoto_sync::presets;
use kuramoto_sync::runner::{self, RunOutput};
use kuramoto_sync_acceptance::{num, run_preset, verdict};

#[test]
fn ac1_mean_field_synchronizes() {
    let start = Instant::now();
    let out = run_preset("fig2");
    let elapsed = start.elapsed();
    let tail = num(&out, "tail_mean_R");
    let settled = out.report.get("settled") == Some("true");
    let pass = tail >= 0.9 && settled && elapsed < Duration::from_secs(5);
    assert!(verdict(
        "AC-1",
        pass,
        &format!("N=100 K=4: tail mean R = {tail:.4}, settled = {settled}, {:.2} s", elapsed.as_secs_f64())
    ));
}

struct SweepCase {
    kc_theory: f64,
    output: RunOutput,
    elapsed: Duration,
}

fn sweep(distribution: &str, kc_theory: f64) -> SweepCase {
    let text = format!(
        r#"mode = "sweep"
seed = 1

[integration]
t_end = 200.0
dt = 0.02
record_every = 10

[oscillators]
n = 2000
distribution = "{distribution}"
width = 0.2

[sweep]
k_min = {}
k_max = {}
points = 16
"#,
        0.5 * kc_theory,
        2.0 * kc_theory
    );
    let config = RunConfig::from_toml(&text).unwrap();
    let start = Instant::now();
    let output = runner::run(&config).unwrap();
    SweepCase {
        kc_theory,
        output,
        elapsed: start.elapsed(),
    }
}

fn logistic_sweep() -> &'static SweepCase {
    static CASE: OnceLock<SweepCase> = OnceLock::new();
    CASE.get_or_init(|| sweep("logistic", 0.509))
}

fn lorentzian_sweep() -> &'static SweepCase {
    static CASE: OnceLock<SweepCase> = OnceLock::new();
    CASE.get_or_init(|| sweep("lorentzian", 0.4))
}

#[test]
fn ac2_empirical_critical_coupling() {
    let mut all = true;
    for (name, case) in [("logistic", logistic_sweep()), ("lorentzian", lorentzian_sweep())] {
        let sw = case.output.sweep.as_ref().unwrap();
        let kc = sw.kc_empirical;
        let within = kc.is_some_and(|k| (k - case.kc_theory).abs() <= 0.2 * case.kc_theory);
        let fast = case.elapsed < Duration::from_secs(120);
        all &= verdict(
            "AC-2",
            within && fast,
            &format!(
                "{name}: Kc empirical = {} vs {} (±20%), {:.1} s",
                kc.map_or("none".into(), |k| format!("{k:.4}")),
                case.kc_theory,
                case.elapsed.as_secs_f64()
            ),
        );
    }
    assert!(all);
}

#[test]
fn ac3_critical_exponent() {
    let sw = lorentzian_sweep().output.sweep.as_ref().unwrap();
    let beta = sw.beta_fit;
    let pass = beta.is_some_and(|b| (0.35..=0.65).contains(&b));
    assert!(verdict(
        "AC-3",
        pass,
        &format!("Lorentzian beta_fit = {}", beta.map_or("none".into(), |b| format!("{b:.4}")))
    ));
}

#[test]
fn ac4_junction_arrays_narrow_their_band() {
    let mut all = true;
    for name in ["fig6", "fig7"] {
        let out = run_preset(name);
        let band = num(&out, "frequency_band_width");
        let control_band = num(&out, "control_frequency_band_width");
        let r = num(&out, "final_R");
        let control_r = num(&out, "control_final_R");
        let pass = band <= 0.25 * control_band && r > control_r;
        all &= verdict(
            "AC-4",
            pass,
            &format!(
                "{name}: band {band:.4} vs control {control_band:.4} (need <= 25%), final R {r:.4} vs control {control_r:.4}"
            ),
        );
    }
    assert!(all);
}

#[test]
fn ac5_five_identical_junctions_stay_unsettled() {
    let out = run_preset("async5");
    let settled = out.report.get("settled") == Some("true");
    let range = num(&out, "tail_R_range");
    let pass = !settled && range >= 0.1;
    assert!(verdict(
        "AC-5",
        pass,
        &format!("N=5 at 12uA: settled = {settled}, tail R range = {range:.4}")
    ));
}

/// Running frequencies from the first sample at or after `from` to the end.
fn frequencies_after(trace: &SimulationTrace, from: f64) -> Vec<f64> {
    let i = trace.times.iter().position(|&t| t >= from).unwrap();
    let last = trace.len() - 1;
    let span = trace.times[last] - trace.times[i];
    trace.phases[last]
        .iter()
        .zip(&trace.phases[i])
        .map(|(b, a)| (b - a) / span)
        .collect()
}

#[test]
fn ac6_partial_locking_near_threshold() {
    let mut all = true;
    for name in ["fig8", "fig9"] {
        let out = run_preset(name);
        let locked = num(&out, "locked_fraction");
        let early = frequency_locked_fraction(&frequencies_after(out.trace.as_ref().unwrap(), 3.0), 0.02);
        let pass = (locked - 0.8).abs() < 1e-12 && early >= 0.8;
        all &= verdict(
            "AC-6",
            pass,
            &format!("{name}: locked fraction {locked} (need 0.8), band fraction from t=3 on {early}"),
        );
    }
    assert!(all);
}

#[test]
fn ac7_reduced_model_tracks_full_circuit() {
    let mut all = true;
    for n in [10usize, 100] {
        let mut config = presets::load("fig6").unwrap();
        let arr = config.array.as_mut().unwrap();
        arr.n = n;
        arr.coupling_scale = 0.1;
        arr.load_start = LoadStart::Equilibrium;
        let config = runner::resolve(&config).unwrap();
        let spec = runner::junction_spec(&config).unwrap();
        let ic = IntegrationConfig::new(config.integration.dt.unwrap(), config.integration.t_end);

        let full = CircuitModel::new(&spec, 0.1).unwrap();
        let phi = uniform_phases(n, 2.0 * PI, config.seed);
        let state = full.initial_state(phi.clone(), LoadStart::Equilibrium).unwrap();
        let full_trace = integrate_rk4(&full, &state.to_vec(), &ic).unwrap();
        let full_rates = full.natural_angle_rates(&full_trace, 0).unwrap();

        let reduced = reduced_coefficients(&spec).unwrap().with_coupling_scale(0.1);
        let psi: Vec<f64> = phi.iter().zip(full.alpha()).map(|(&p, &a)| psi_of_phi(p, a)).collect();
        let red_trace = integrate_rk4(&reduced, &psi, &ic).unwrap();
        let last = red_trace.len() - 1;
        let span = red_trace.times[last];
        let worst = full_rates
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let r = (red_trace.phases[last][j] - red_trace.phases[0][j]) / span;
                ((f - r) / f).abs()
            })
            .fold(0.0, f64::max);
        all &= verdict(
            "AC-7",
            worst <= 0.02,
            &format!("N={n}, coupling x0.1: worst relative frequency gap {:.3}%", 100.0 * worst),
        );
    }
    assert!(all);
}

fn check(name: &str, cases: u32, test: impl Fn(&mut TestRunner) -> Result<(), String>) -> bool {
    let mut runner = TestRunner::new(PropConfig {
        cases,
        failure_persistence: None,
        ..PropConfig::default()
    });
    match test(&mut runner) {
        Ok(()) => verdict("AC-8", true, name),
        Err(e) => verdict("AC-8", false, &format!("{name}: {e}")),
    }
}

fn phases(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, 1..=max_n)
}

struct Harmonic;

impl OdeSystem for Harmonic {
    fn dim(&self) -> usize {
        2
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = -y[0];
    }
}

#[test]
fn ac8_invariant_suites() {
    let mut all = true;

    all &= check("order parameter R in [0, 1]", 512, |r| {
        r.run(&phases(200), |p| {
            let o = order_parameter(&p).unwrap();
            prop_assert!((0.0..=1.0).contains(&o.r));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("rotation leaves R unchanged and shifts psi", 512, |r| {
        r.run(&(phases(100), -10.0..10.0f64), |(p, c)| {
            let a = order_parameter(&p).unwrap();
            let shifted: Vec<f64> = p.iter().map(|x| x + c).collect();
            let b = order_parameter(&shifted).unwrap();
            prop_assert!((a.r - b.r).abs() < 1e-12);
            if a.r > 1e-6 {
                let d = (b.psi - a.psi - c).rem_euclid(2.0 * PI);
                prop_assert!(d.min(2.0 * PI - d) < 1e-9, "psi shift off by {}", d);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("mean-field drift equals pairwise sum within 1e-12 (N <= 64)", 256, |r| {
        r.run(&(phases(64), 0.0..10.0f64), |(p, k)| {
            let n = p.len();
            let w: Vec<f64> = (0..n).map(|i| 0.1 * i as f64 - 1.0).collect();
            let fast = drift_mean_field(&p, &w, k).unwrap();
            for j in 0..n {
                let pair = w[j] + k / n as f64 * p.iter().map(|t| (t - p[j]).sin()).sum::<f64>();
                prop_assert!((fast[j] - pair).abs() < 1e-12, "j={} {} vs {}", j, fast[j], pair);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("complete-graph network equals mean field within 1e-12", 128, |r| {
        r.run(&(phases(48), 0.0..10.0f64), |(p, k)| {
            let n = p.len();
            let w = vec![0.3; n];
            let net = CouplingSpec::Network {
                k: SquareMatrix::constant(n, k / n as f64),
                adjacency: SquareMatrix::complete_graph(n),
            };
            let a = drift_network(&p, &w, &net).unwrap();
            let b = drift_mean_field(&p, &w, k).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("Kc * pi * g(0) = 2", 64, |r| {
        r.run(&(0.01..5.0f64, 0usize..3), |(w, kind)| {
            let d = match kind {
                0 => FrequencyDistribution::logistic(w),
                1 => FrequencyDistribution::lorentzian(w),
                _ => FrequencyDistribution::gaussian(w),
            }
            .unwrap();
            let v = critical_coupling(&d).unwrap() * PI * density_at_zero(&d).unwrap();
            prop_assert!((v - 2.0).abs() < 1e-14);
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("phi(psi(x)) = x within 1e-10 on the principal branch", 1024, |r| {
        r.run(&(-PI / 2.0 + 1e-9..3.0 * PI / 2.0 - 1e-9, 1.0 + 1e-6..=10.0f64), |(x, a)| {
            let back = phi_of_psi(psi_of_phi(x, a), a);
            prop_assert!((back - x).abs() < 1e-10, "x={} alpha={} back={}", x, a, back);
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("alpha - sin(phi(psi)) = (alpha^2-1)/(alpha-cos psi) within 1e-12", 1024, |r| {
        r.run(&(-10.0..10.0f64, 1.0 + 1e-6..=10.0f64), |(psi, a)| {
            let lhs = a - sin_phi_of_psi(psi, a);
            let rhs = (a * a - 1.0) / (a - psi.cos());
            prop_assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    all &= check("Fourier series to n=32 reproduces sin phi within 1e-6 for alpha >= 1.1", 64, |r| {
        let reconstruct = |a: f64| -> Result<(), TestCaseError> {
            let coeffs: Vec<f64> = (0..=32)
                .map(|n| fourier_A(a, n, DEFAULT_QUADRATURE_POINTS).unwrap())
                .collect();
            for i in 0..200 {
                let psi = -PI + 2.0 * PI * i as f64 / 200.0;
                let err = (fourier_series(&coeffs, psi) - sin_phi_of_psi(psi, a)).abs();
                prop_assert!(err < 1e-6, "alpha={} psi={} error={:e}", a, psi, err);
            }
            Ok(())
        };
        reconstruct(1.1).map_err(|e| e.to_string())?;
        r.run(&(1.1..=10.0f64), reconstruct).map_err(|e| e.to_string())
    });

    all &= check("RK4 error ratio under step halving in [12, 20]", 1, |_| {
        let err = |dt: f64| {
            let tr = integrate_rk4(&Harmonic, &[1.0, 0.0], &IntegrationConfig::new(dt, 10.0)).unwrap();
            let y = tr.final_phases().unwrap();
            ((y[0] - 10f64.cos()).powi(2) + (y[1] + 10f64.sin()).powi(2)).sqrt()
        };
        let ratio = err(0.1) / err(0.05);
        if (12.0..=20.0).contains(&ratio) {
            Ok(())
        } else {
            Err(format!("ratio {ratio}"))
        }
    });

    all &= check("same config and seed give bit-identical traces", 1, |_| {
        let mut text = Vec::new();
        for _ in 0..2 {
            let mut cfg = presets::load("fig2").unwrap();
            cfg.mode = kuramoto_sync::config::Mode::KuramotoNoise;
            cfg.noise = Some(kuramoto_sync::config::NoiseSection { sigma: 1.0, gamma: 0.5 });
            cfg.integration.t_end = 5.0;
            let out = runner::run(&cfg).map_err(|e| e.to_string())?;
            let mut buf = Vec::new();
            runner::write_trace_csv(out.trace.as_ref().unwrap(), true, &mut buf).map_err(|e| e.to_string())?;
            text.push(buf);
        }
        if text[0] == text[1] {
            Ok(())
        } else {
            Err("traces differ".into())
        }
    });

    all &= check("identical array: equal zeta and K_j A = K within 1e-10", 1, |_| {
        let spec = runner::junction_spec(&presets::load("fig7").unwrap()).map_err(|e| e.to_string())?;
        let m = reduced_coefficients(&spec).map_err(|e| e.to_string())?;
        let k = m.identical_k.ok_or("no identical K")?;
        let ok = m.zeta.iter().all(|z| *z == m.zeta[0]) && m.k.iter().zip(&m.a).all(|(kj, a)| (kj * a - k).abs() < 1e-10);
        if ok {
            Ok(())
        } else {
            Err(format!("K = {k}, K_0 A_0 = {}", m.k[0] * m.a[0]))
        }
    });

    assert!(all);
}
