//! Run configuration: a TOML document with one table per concern.
//!
//! ```toml
//! mode = "jj-full"
//! seed = 3
//!
//! [integration]
//! t_end = 25.0          # model time (τ̃ for junction arrays)
//! record_every = 20     # dt defaults per mode when omitted
//!
//! [array]
//! n = 100
//! critical_current = "10uA"
//! resistance = "4.2kohm"
//! ic_spread = 0.001
//! rho_spread = 0.0005
//! bias_current = "12uA"
//!
//! [load]
//! inductance = "1nH"
//! resistance = "2ohm"
//! capacitance = "1uF"
//! ```
//!
//! Physical quantities accept either a plain number in SI units or a string
//! with an SI prefix and unit suffix (`"10uA"`, `"4.2kohm"`, `"1nH"`). The
//! unit, when given, must match the field.
//!
//! A resolved config (all defaults filled in, quantities as SI numbers) is
//! what a run writes as its manifest; reading the manifest back reproduces
//! the run.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{DEFAULT_LOCK_TOLERANCE, DEFAULT_ONSET_RISE, DEFAULT_R_THRESHOLD, DEFAULT_TAIL_FRACTION};
use crate::distribution::{DistributionKind, FrequencyDistribution};
use crate::error::{Error, Result};
use crate::jj::LoadStart;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Kuramoto,
    KuramotoNoise,
    KuramotoNetwork,
    JjFull,
    JjReduced,
    JjReducedIdentical,
    Sweep,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Kuramoto => "kuramoto",
            Mode::KuramotoNoise => "kuramoto-noise",
            Mode::KuramotoNetwork => "kuramoto-network",
            Mode::JjFull => "jj-full",
            Mode::JjReduced => "jj-reduced",
            Mode::JjReducedIdentical => "jj-reduced-identical",
            Mode::Sweep => "sweep",
        }
    }

    pub fn is_junction_array(self) -> bool {
        matches!(self, Mode::JjFull | Mode::JjReduced | Mode::JjReducedIdentical)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Ampere,
    Ohm,
    Henry,
    Farad,
}

impl Unit {
    fn symbol(self) -> &'static str {
        match self {
            Unit::Ampere => "A",
            Unit::Ohm => "ohm",
            Unit::Henry => "H",
            Unit::Farad => "F",
        }
    }
}

/// A physical value in SI units, remembering the unit it was written with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Option<Unit>,
}

impl Quantity {
    pub fn si(value: f64) -> Self {
        Self { value, unit: None }
    }
}

impl From<f64> for Quantity {
    fn from(value: f64) -> Self {
        Self::si(value)
    }
}

/// Parses `"<number><prefix><unit>"`, e.g. `"4.2kohm"` → (4200, Ohm).
pub fn parse_quantity(text: &str) -> std::result::Result<Quantity, String> {
    let s = text.trim();
    let split = s
        .char_indices()
        .find(|&(i, c)| {
            c.is_alphabetic() && !((c == 'e' || c == 'E') && next_is_exponent(s, i)) || c == 'Ω' || c == 'µ'
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, suffix) = s.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("cannot read a number from `{text}`"))?;
    let suffix = suffix.trim();
    if suffix.is_empty() {
        return Ok(Quantity::si(value));
    }
    let units = [("ohm", Unit::Ohm), ("Ω", Unit::Ohm), ("A", Unit::Ampere), ("H", Unit::Henry), ("F", Unit::Farad)];
    let (prefix, unit) = units
        .iter()
        .find_map(|(sym, unit)| suffix.strip_suffix(sym).map(|p| (p, *unit)))
        .ok_or_else(|| format!("unknown unit in `{text}` (use A, ohm, H or F with an SI prefix)"))?;
    let scale = match prefix {
        "" => 1.0,
        "f" => 1e-15,
        "p" => 1e-12,
        "n" => 1e-9,
        "u" | "µ" | "μ" => 1e-6,
        "m" => 1e-3,
        "k" => 1e3,
        "M" => 1e6,
        "G" => 1e9,
        other => return Err(format!("unknown SI prefix `{other}` in `{text}`")),
    };
    Ok(Quantity {
        value: value * scale,
        unit: Some(unit),
    })
}

fn next_is_exponent(s: &str, i: usize) -> bool {
    let rest = &s[i + 1..];
    let rest = rest.strip_prefix(['+', '-']).unwrap_or(rest);
    rest.starts_with(|c: char| c.is_ascii_digit())
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct QVisitor;
        impl Visitor<'_> for QVisitor {
            type Value = Quantity;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string such as \"10uA\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Quantity, E> {
                Ok(Quantity::si(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Quantity, E> {
                Ok(Quantity::si(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Quantity, E> {
                Ok(Quantity::si(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Quantity, E> {
                parse_quantity(v).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(QVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationSection {
    /// Defaults to 1e-3 for Kuramoto modes and to 1/200 of the shortest
    /// junction period for junction arrays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub t_end: f64,
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSection {
    pub n: usize,
    /// Mean-field K (or the K of the complete-graph equivalent for networks).
    #[serde(default)]
    pub coupling: f64,
    pub distribution: DistributionKind,
    #[serde(default = "unit_width")]
    pub width: f64,
    #[serde(default)]
    pub mean: f64,
    /// Initial phases are uniform on [−spread/2, spread/2).
    #[serde(default = "two_pi")]
    pub phase_spread: f64,
}

fn unit_width() -> f64 {
    1.0
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

impl OscillatorSection {
    pub fn distribution(&self) -> Result<FrequencyDistribution> {
        FrequencyDistribution::new(self.distribution, self.width, self.mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default = "unit_width")]
    pub sigma: f64,
    #[serde(default)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Complete,
    Ring,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub topology: Topology,
    /// Neighbours on each side for rings.
    #[serde(default = "one")]
    pub neighbours: usize,
    /// Edge probability for random graphs.
    #[serde(default)]
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub n: usize,
    pub critical_current: Quantity,
    pub resistance: Quantity,
    #[serde(default)]
    pub ic_spread: f64,
    #[serde(default)]
    pub rho_spread: f64,
    pub bias_current: Quantity,
    /// Multiplies the load back-action; 0 gives uncoupled junctions.
    #[serde(default = "unit_width")]
    pub coupling_scale: f64,
    #[serde(default)]
    pub load_start: LoadStart,
    /// Also run the uncoupled circuit from the same start and report it.
    #[serde(default)]
    pub control: bool,
    /// Seed for the junction spread; defaults to the run seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junction_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSection {
    pub inductance: Quantity,
    pub resistance: Quantity,
    pub capacitance: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub k_min: f64,
    pub k_max: f64,
    pub points: usize,
    #[serde(default = "default_onset_rise")]
    pub onset_rise: f64,
}

fn default_onset_rise() -> f64 {
    DEFAULT_ONSET_RISE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default = "default_tail")]
    pub tail_fraction: f64,
    #[serde(default = "default_threshold")]
    pub r_threshold: f64,
    #[serde(default = "default_lock_tolerance")]
    pub lock_tolerance: f64,
}

fn default_tail() -> f64 {
    DEFAULT_TAIL_FRACTION
}

fn default_threshold() -> f64 {
    DEFAULT_R_THRESHOLD
}

fn default_lock_tolerance() -> f64 {
    DEFAULT_LOCK_TOLERANCE
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            tail_fraction: DEFAULT_TAIL_FRACTION,
            r_threshold: DEFAULT_R_THRESHOLD,
            lock_tolerance: DEFAULT_LOCK_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Append one θ column per oscillator to the trace CSV.
    #[serde(default = "yes")]
    pub phases: bool,
    #[serde(default = "trace_name")]
    pub trace: String,
    #[serde(default = "report_name")]
    pub report: String,
    #[serde(default = "manifest_name")]
    pub manifest: String,
}

fn yes() -> bool {
    true
}

fn trace_name() -> String {
    "trace.csv".into()
}

fn report_name() -> String {
    "report.txt".into()
}

fn manifest_name() -> String {
    "manifest.toml".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            phases: true,
            trace: trace_name(),
            report: report_name(),
            manifest: manifest_name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub integration: IntegrationSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillators: Option<OscillatorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub array: Option<ArraySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<LoadSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// 1-based line of `byte` in `text`.
fn line_of_offset(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].matches('\n').count() + 1
}

/// 1-based line where `key` is assigned inside `[section]` (top level when
/// `section` is empty); the section header line, or 1, when absent.
pub fn locate(text: &str, section: &str, key: &str) -> usize {
    let mut current = String::new();
    let mut header_line = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            if current == section {
                header_line = Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some(rest) = line.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return i + 1;
                }
            }
        }
    }
    header_line.unwrap_or(1)
}

impl RunConfig {
    /// Parses and validates; every error names the offending line.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config {
            line: e.span().map_or(1, |s| line_of_offset(text, s.start)),
            message: e.message().trim().to_string(),
        })?;
        cfg.check(text)?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(format!("cannot serialize config: {e}")))
    }

    fn check(&self, text: &str) -> Result<()> {
        let fail = |section: &str, key: &str, message: String| Error::Config {
            line: locate(text, section, key),
            message,
        };
        let i = &self.integration;
        if let Some(dt) = i.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(fail("integration", "dt", format!("dt must be positive, got {dt}")));
            }
        }
        if !(i.t_end > 0.0 && i.t_end.is_finite()) {
            return Err(fail("integration", "t_end", format!("t_end must be positive, got {}", i.t_end)));
        }
        if i.record_every == 0 {
            return Err(fail("integration", "record_every", "record_every must be >= 1".into()));
        }
        let a = &self.analysis;
        if !(a.tail_fraction > 0.0 && a.tail_fraction <= 0.5) {
            return Err(fail("analysis", "tail_fraction", "tail_fraction must lie in (0, 0.5]".into()));
        }
        if !(a.r_threshold > 0.0 && a.r_threshold < 1.0) {
            return Err(fail("analysis", "r_threshold", "r_threshold must lie in (0, 1)".into()));
        }

        let needs = |section: &'static str, present: bool| -> Result<()> {
            if present {
                Ok(())
            } else {
                Err(Error::Config {
                    line: locate(text, "", "mode"),
                    message: format!("mode `{}` needs a [{section}] table", self.mode.name()),
                })
            }
        };
        match self.mode {
            Mode::Kuramoto | Mode::KuramotoNoise | Mode::KuramotoNetwork | Mode::Sweep => {
                needs("oscillators", self.oscillators.is_some())?;
                let o = self.oscillators.as_ref().unwrap();
                if o.n == 0 {
                    return Err(fail("oscillators", "n", "n must be >= 1".into()));
                }
                if !(o.coupling >= 0.0 && o.coupling.is_finite()) {
                    return Err(fail("oscillators", "coupling", "coupling must be finite and >= 0".into()));
                }
                o.distribution()
                    .map_err(|e| fail("oscillators", "width", e.to_string()))?;
                if self.mode == Mode::KuramotoNoise {
                    needs("noise", self.noise.is_some())?;
                    let nz = self.noise.as_ref().unwrap();
                    if !(nz.sigma >= 0.0) {
                        return Err(fail("noise", "sigma", "sigma must be >= 0".into()));
                    }
                    if !(nz.gamma >= 0.0) {
                        return Err(fail("noise", "gamma", "gamma must be >= 0".into()));
                    }
                }
                if self.mode == Mode::KuramotoNetwork {
                    needs("network", self.network.is_some())?;
                    let net = self.network.as_ref().unwrap();
                    if net.topology == Topology::Random && !(0.0..=1.0).contains(&net.probability) {
                        return Err(fail("network", "probability", "probability must lie in [0, 1]".into()));
                    }
                }
                if self.mode == Mode::Sweep {
                    needs("sweep", self.sweep.is_some())?;
                    let s = self.sweep.as_ref().unwrap();
                    if s.points < 2 {
                        return Err(fail("sweep", "points", "a sweep needs at least 2 points".into()));
                    }
                    if !(s.k_min >= 0.0 && s.k_max > s.k_min) {
                        return Err(fail("sweep", "k_max", "need 0 <= k_min < k_max".into()));
                    }
                }
            }
            Mode::JjFull | Mode::JjReduced | Mode::JjReducedIdentical => {
                needs("array", self.array.is_some())?;
                needs("load", self.load.is_some())?;
                let arr = self.array.as_ref().unwrap();
                let load = self.load.as_ref().unwrap();
                if arr.n == 0 {
                    return Err(fail("array", "n", "n must be >= 1".into()));
                }
                let checks = [
                    ("array", "critical_current", arr.critical_current, Unit::Ampere),
                    ("array", "resistance", arr.resistance, Unit::Ohm),
                    ("array", "bias_current", arr.bias_current, Unit::Ampere),
                    ("load", "inductance", load.inductance, Unit::Henry),
                    ("load", "resistance", load.resistance, Unit::Ohm),
                    ("load", "capacitance", load.capacitance, Unit::Farad),
                ];
                for (section, key, q, unit) in checks {
                    if let Some(u) = q.unit {
                        if u != unit {
                            return Err(fail(
                                section,
                                key,
                                format!("{key} is in {}, not {}", unit.symbol(), u.symbol()),
                            ));
                        }
                    }
                    if !(q.value > 0.0 && q.value.is_finite()) {
                        return Err(fail(section, key, format!("{key} must be positive")));
                    }
                }
                for (key, s) in [("ic_spread", arr.ic_spread), ("rho_spread", arr.rho_spread)] {
                    if !(0.0..1.0).contains(&s) {
                        return Err(fail("array", key, format!("{key} must lie in [0, 1)")));
                    }
                }
                if arr.bias_current.value <= arr.critical_current.value * (1.0 + arr.ic_spread) {
                    return Err(fail(
                        "array",
                        "bias_current",
                        "bias_current must exceed every junction's critical current".into(),
                    ));
                }
                if !(arr.coupling_scale >= 0.0 && arr.coupling_scale.is_finite()) {
                    return Err(fail("array", "coupling_scale", "coupling_scale must be >= 0".into()));
                }
                if self.mode == Mode::JjReducedIdentical && (arr.ic_spread != 0.0 || arr.rho_spread != 0.0) {
                    return Err(fail("array", "ic_spread", "jj-reduced-identical needs zero spreads".into()));
                }
            }
        }
        Ok(())
    }
}
