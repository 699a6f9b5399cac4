//! Executes a [`RunConfig`] and writes its artifacts: a trace CSV (or a
//! sweep CSV), a `key: value` report and the resolved manifest.

use std::f64::consts::PI;
use std::fmt::{self, Display};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;

use crate::analysis::{analyze_with_tolerance, locked_fraction, sweep_coupling, SweepResult, SweepSpec, SyncReport};
use crate::config::{Mode, RunConfig, Topology};
use crate::distribution::critical_coupling;
use crate::error::{Error, Result};
use crate::integrator::{integrate_euler_maruyama, integrate_rk4, IntegrationConfig, SimulationTrace};
use crate::jj::natural::psi_of_phi;
use crate::jj::{reduced_coefficients, CircuitModel, Junction, JunctionArraySpec, LoadCircuit, ReducedModel};
use crate::kuramoto::{uniform_phases, CouplingSpec, NoiseSpec, OscillatorEnsemble, SquareMatrix};
use crate::rng::{stream_rng, Stream};

/// Default step for Kuramoto modes when the config leaves `dt` out.
pub const DEFAULT_KURAMOTO_DT: f64 = 1e-3;
/// Environment variable bounding the sweep worker pool.
pub const THREADS_ENV: &str = "KURAMOTO_SYNC_THREADS";
pub const SWEEP_FILE: &str = "sweep.csv";

/// Ordered `key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    fn push_opt(&mut self, key: &str, value: Option<f64>) {
        match value {
            Some(v) => self.push(key, v),
            None => self.push(key, "none"),
        }
    }

    fn push_list(&mut self, key: &str, values: &[f64]) {
        self.push(key, join(values));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Numeric value of `key`, None when absent or not a number.
    pub fn number(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Reads back the text produced by `Display`.
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once(": "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { entries }
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    /// The resolved config: every default filled in.
    pub config: RunConfig,
    pub trace: Option<SimulationTrace>,
    pub sweep: Option<SweepResult>,
    pub report: Report,
}

/// Builds the junction array described by the `[array]` and `[load]` tables.
pub fn junction_spec(config: &RunConfig) -> Result<JunctionArraySpec> {
    let (arr, load) = match (&config.array, &config.load) {
        (Some(a), Some(l)) => (a, l),
        _ => return Err(Error::param("array", "junction modes need [array] and [load]")),
    };
    let load = LoadCircuit::new(load.inductance.value, load.resistance.value, load.capacitance.value)?;
    let nominal = Junction::new(arr.critical_current.value, arr.resistance.value)?;
    if arr.ic_spread == 0.0 && arr.rho_spread == 0.0 {
        return JunctionArraySpec::identical(arr.n, nominal, load, arr.bias_current.value);
    }
    JunctionArraySpec::with_spread(
        arr.n,
        nominal,
        arr.ic_spread,
        arr.rho_spread,
        arr.junction_seed.unwrap_or(config.seed),
        load,
        arr.bias_current.value,
    )
}

/// Builds the oscillator ensemble of a Kuramoto-mode config.
pub fn ensemble(config: &RunConfig) -> Result<OscillatorEnsemble> {
    let osc = config
        .oscillators
        .as_ref()
        .ok_or_else(|| Error::param("oscillators", "Kuramoto modes need [oscillators]"))?;
    let dist = osc.distribution()?;
    let coupling = match (config.mode, &config.network) {
        (Mode::KuramotoNetwork, Some(net)) => {
            let n = osc.n;
            let adjacency = match net.topology {
                Topology::Complete => SquareMatrix::complete_graph(n),
                Topology::Ring => SquareMatrix::ring(n, net.neighbours),
                Topology::Random => random_graph(n, net.probability, config.seed),
            };
            CouplingSpec::Network {
                k: SquareMatrix::constant(n, osc.coupling / n as f64),
                adjacency,
            }
        }
        _ => CouplingSpec::MeanField { k: osc.coupling },
    };
    let noise = match (config.mode, &config.noise) {
        (Mode::KuramotoNoise, Some(nz)) => NoiseSpec {
            sigma: nz.sigma,
            gamma: nz.gamma,
            seed: config.seed,
        },
        _ => NoiseSpec::none(),
    };
    OscillatorEnsemble::sample(&dist, osc.n, osc.phase_spread, coupling, noise, config.seed)
}

/// Symmetric Erdős–Rényi graph without self loops.
fn random_graph(n: usize, p: f64, seed: u64) -> SquareMatrix {
    let mut rng = stream_rng(seed, Stream::Network);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                rows[i][j] = 1.0;
                rows[j][i] = 1.0;
            }
        }
    }
    SquareMatrix::from_rows(rows).expect("square by construction")
}

/// Fills in `dt` and the junction seed so the config alone pins the run.
///
/// Junction arrays get a step near 1/200 of the shortest junction period,
/// adjusted so that `t_end` is a whole number of steps.
pub fn resolve(config: &RunConfig) -> Result<RunConfig> {
    let mut out = config.clone();
    if let Some(arr) = out.array.as_mut() {
        if arr.ic_spread != 0.0 || arr.rho_spread != 0.0 {
            arr.junction_seed.get_or_insert(config.seed);
        }
    }
    if out.integration.dt.is_none() {
        let dt = if config.mode.is_junction_array() {
            let model = CircuitModel::new(&junction_spec(config)?, 1.0)?;
            let t_end = config.integration.t_end;
            t_end / (t_end / model.default_dt()).ceil()
        } else {
            DEFAULT_KURAMOTO_DT
        };
        out.integration.dt = Some(dt);
    }
    Ok(out)
}

fn integration_config(config: &RunConfig) -> IntegrationConfig {
    let i = &config.integration;
    IntegrationConfig::new(i.dt.unwrap_or(DEFAULT_KURAMOTO_DT), i.t_end)
        .with_record_every(i.record_every)
        .with_seed(config.seed)
}

/// Runs the simulation or sweep a config describes.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let config = resolve(config)?;
    let mut report = Report::default();
    report.push("mode", config.mode.name());
    report.push("seed", config.seed);
    let ic = integration_config(&config);
    ic.validate()?;
    if config.mode != Mode::Sweep {
        report.push("dt", ic.dt);
        report.push("t_end", ic.t_end);
    }
    let (trace, sweep) = match config.mode {
        Mode::Kuramoto | Mode::KuramotoNoise | Mode::KuramotoNetwork => (Some(run_kuramoto(&config, &ic, &mut report)?), None),
        Mode::JjFull => (Some(run_circuit(&config, &ic, &mut report)?), None),
        Mode::JjReduced | Mode::JjReducedIdentical => (Some(run_reduced(&config, &ic, &mut report)?), None),
        Mode::Sweep => (None, Some(run_sweep(&config, &ic, &mut report)?)),
    };
    Ok(RunOutput {
        config,
        trace,
        sweep,
        report,
    })
}

fn sync_report(config: &RunConfig, trace: &SimulationTrace) -> Result<SyncReport> {
    let a = &config.analysis;
    analyze_with_tolerance(trace, a.tail_fraction, a.r_threshold, a.lock_tolerance)
}

fn push_sync(report: &mut Report, prefix: &str, sync: &SyncReport) {
    let key = |k: &str| format!("{prefix}{k}");
    report.push(&key("final_R"), sync.final_r);
    report.push(&key("tail_mean_R"), sync.tail_mean_r);
    report.push(&key("tail_R_range"), sync.tail_r_range);
    report.push(&key("settled"), sync.settled);
    report.push_opt(&key("settling_time"), sync.settling_time);
    report.push(&key("frequency_band_width"), sync.frequency_band_width);
    report.push(&key("locked_fraction"), sync.locked_fraction);
    report.push_list(&key("running_frequencies"), &sync.running_frequencies);
}

fn run_kuramoto(config: &RunConfig, ic: &IntegrationConfig, report: &mut Report) -> Result<SimulationTrace> {
    let ens = ensemble(config)?;
    let model = ens.model();
    let trace = if config.mode == Mode::KuramotoNoise {
        integrate_euler_maruyama(&model, &ens.phases, ic)?
    } else {
        integrate_rk4(&model, &ens.phases, ic)?
    };
    let osc = config.oscillators.as_ref().expect("checked by ensemble");
    report.push("n", ens.len());
    report.push("coupling", osc.coupling);
    let dist = osc.distribution()?;
    report.push_opt("critical_coupling", critical_coupling(&dist).ok());
    push_sync(report, "", &sync_report(config, &trace)?);
    if config.mode != Mode::KuramotoNetwork {
        let r = trace.r_series();
        let start = ((r.len() as f64) * (1.0 - config.analysis.tail_fraction)).floor() as usize;
        let relative: Vec<f64> = ens.natural_frequencies.iter().map(|w| w - dist.mean).collect();
        report.push("kr_locked_fraction", locked_fraction(&r[start.min(r.len() - 1)..], &relative, osc.coupling)?);
    }
    Ok(trace)
}

fn initial_junction_phases(config: &RunConfig, n: usize) -> Vec<f64> {
    uniform_phases(n, 2.0 * PI, config.seed)
}

fn run_circuit(config: &RunConfig, ic: &IntegrationConfig, report: &mut Report) -> Result<SimulationTrace> {
    let arr = config.array.as_ref().expect("validated");
    let spec = junction_spec(config)?;
    let model = CircuitModel::new(&spec, arr.coupling_scale)?;
    let state = model.initial_state(initial_junction_phases(config, spec.len()), arr.load_start)?;
    let trace = integrate_rk4(&model, &state.to_vec(), ic)?;
    report.push("n", spec.len());
    report.push("identical", spec.is_identical(crate::jj::IDENTICAL_TOLERANCE));
    report.push("coupling_scale", arr.coupling_scale);
    report.push("time_unit_seconds", model.reference_time_scale() / model.reference_frequency());
    let sync = sync_report(config, &trace)?;
    push_sync(report, "", &sync);
    let from = ((trace.len() as f64) * (1.0 - config.analysis.tail_fraction)).floor() as usize;
    report.push_list("natural_angle_rates", &model.natural_angle_rates(&trace, from.min(trace.len() - 2))?);
    if arr.control {
        let control = model.uncoupled();
        let ctrace = integrate_rk4(&control, &state.to_vec(), ic)?;
        let csync = sync_report(config, &ctrace)?;
        push_sync(report, "control_", &csync);
        let ratio = if csync.frequency_band_width > 0.0 {
            sync.frequency_band_width / csync.frequency_band_width
        } else {
            f64::INFINITY
        };
        report.push("band_ratio", ratio);
        report.push("R_gain", sync.final_r - csync.final_r);
    }
    Ok(trace)
}

fn push_reduced(report: &mut Report, model: &ReducedModel) {
    report.push_list("K", &model.k);
    report.push_list("A", &model.a);
    report.push_list("zeta", &model.zeta);
    report.push_list("K_alternative", &model.printed_k);
    report.push_opt("K_identical", model.identical_k);
}

fn run_reduced(config: &RunConfig, ic: &IntegrationConfig, report: &mut Report) -> Result<SimulationTrace> {
    let arr = config.array.as_ref().expect("validated");
    let spec = junction_spec(config)?;
    let model = reduced_coefficients(&spec)?.with_coupling_scale(arr.coupling_scale);
    if config.mode == Mode::JjReducedIdentical && model.identical_k.is_none() {
        return Err(Error::param("array", "jj-reduced-identical needs identical junctions"));
    }
    let phi = initial_junction_phases(config, spec.len());
    let psi: Vec<f64> = phi
        .iter()
        .zip(&spec.junctions)
        .map(|(&p, j)| psi_of_phi(p, spec.bias_current / j.critical_current))
        .collect();
    let trace = integrate_rk4(&model, &psi, ic)?;
    report.push("n", spec.len());
    report.push("coupling_scale", arr.coupling_scale);
    push_reduced(report, &model);
    push_sync(report, "", &sync_report(config, &trace)?);
    Ok(trace)
}

/// Size of the sweep worker pool from `KURAMOTO_SYNC_THREADS`, None when
/// unset.
pub fn sweep_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::param("KURAMOTO_SYNC_THREADS", format!("must be a positive integer, got `{v}`"))),
        },
    }
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

fn run_sweep(config: &RunConfig, ic: &IntegrationConfig, report: &mut Report) -> Result<SweepResult> {
    let osc = config.oscillators.as_ref().expect("validated");
    let sw = config.sweep.as_ref().expect("validated");
    let dist = osc.distribution()?;
    let spec = SweepSpec {
        distribution: dist,
        n: osc.n,
        seed: config.seed,
        tail_fraction: config.analysis.tail_fraction,
        onset_rise: sw.onset_rise,
    };
    let grid = linear_grid(sw.k_min, sw.k_max, sw.points);
    let threads = sweep_threads()?;
    let result = match threads {
        None => sweep_coupling(&spec, &grid, ic)?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Io(format!("cannot start sweep workers: {e}")))?
            .install(|| sweep_coupling(&spec, &grid, ic))?,
    };
    report.push("n", osc.n);
    report.push("dt", ic.dt);
    report.push("t_end", ic.t_end);
    report.push("distribution", dist.kind.name());
    report.push("width", dist.width);
    report.push_opt("critical_coupling", critical_coupling(&dist).ok());
    report.push_list("k_values", &result.k_values);
    report.push_list("steady_R", &result.steady_r);
    report.push("baseline_R", result.baseline_r);
    report.push_opt("Kc_empirical", result.kc_empirical);
    report.push_opt("beta_fit", result.beta_fit);
    report.push("spearman", result.spearman);
    Ok(result)
}

/// `t,R,psi[,theta_0..theta_{N-1}]` with one row per recorded sample.
pub fn write_trace_csv<W: Write>(trace: &SimulationTrace, phases: bool, mut w: W) -> std::io::Result<()> {
    write!(w, "t,R,psi")?;
    if phases {
        for j in 0..trace.oscillator_count() {
            write!(w, ",theta_{j}")?;
        }
    }
    writeln!(w)?;
    for (i, t) in trace.times.iter().enumerate() {
        let o = trace.order[i];
        write!(w, "{t},{},{}", o.r, o.psi)?;
        if phases {
            for p in &trace.phases[i] {
                write!(w, ",{p}")?;
            }
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn write_sweep_csv<W: Write>(sweep: &SweepResult, mut w: W) -> std::io::Result<()> {
    writeln!(w, "K,R")?;
    for (k, r) in sweep.k_values.iter().zip(&sweep.steady_r) {
        writeln!(w, "{k},{r}")?;
    }
    w.flush()
}

/// The manifest text: the resolved config behind a comment header.
pub fn manifest_text(config: &RunConfig) -> Result<String> {
    let mut text = String::from(
        "# Resolved run manifest. Every default is written out; running this\n\
         # file as a config reproduces the run exactly.\n",
    );
    text.push_str(&config.to_toml()?);
    Ok(text)
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok((path, BufWriter::new(file)))
}

/// Writes trace (or sweep) CSV, report and manifest into `dir`, creating it
/// if needed. Returns the paths written.
pub fn write_artifacts(output: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let names = &output.config.output;
    let mut written = Vec::new();
    if let Some(trace) = &output.trace {
        let (path, w) = create(dir, &names.trace)?;
        write_trace_csv(trace, names.phases, w)?;
        written.push(path);
    }
    if let Some(sweep) = &output.sweep {
        let (path, w) = create(dir, SWEEP_FILE)?;
        write_sweep_csv(sweep, w)?;
        written.push(path);
    }
    let (path, mut w) = create(dir, &names.report)?;
    write!(w, "{}", output.report)?;
    w.flush()?;
    written.push(path);
    let (path, mut w) = create(dir, &names.manifest)?;
    w.write_all(manifest_text(&output.config)?.as_bytes())?;
    w.flush()?;
    written.push(path);
    Ok(written)
}
