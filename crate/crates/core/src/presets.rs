//! Built-in run configurations for the published figure parameter sets.
//!
//! Seeds and initial phase spreads are not part of the published parameter
//! sets; the values here are fixed choices and appear in each manifest.

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub struct Preset {
    pub name: &'static str,
    /// One line naming the parameters the preset encodes.
    pub summary: &'static str,
    pub toml: &'static str,
}

/// Appends the shared load: L=1nH, R=2ohm, C=1uF.
macro_rules! jj_preset {
    ($body:expr) => {
        concat!($body, "\n[load]\ninductance = \"1nH\"\nresistance = \"2ohm\"\ncapacitance = \"1uF\"\n")
    };
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        summary: "Kuramoto, N=100, K=4, Gaussian frequencies of unit width, t=25",
        toml: r#"mode = "kuramoto"
seed = 1
description = "N=100, K=4, unit-width Gaussian frequencies; seed and phase spread chosen here"

[integration]
t_end = 25.0
dt = 0.01
record_every = 10

[oscillators]
n = 100
coupling = 4.0
distribution = "gaussian"
width = 1.0
"#,
    },
    Preset {
        name: "fig3",
        summary: "Kuramoto, N=100, K=0.1, logistic frequencies of width 0.001, t=25",
        toml: r#"mode = "kuramoto"
seed = 1
description = "N=100, K=0.1, logistic width 0.001; seed and phase spread chosen here"

[integration]
t_end = 25.0
dt = 0.01
record_every = 10

[oscillators]
n = 100
coupling = 0.1
distribution = "logistic"
width = 0.001
"#,
    },
    Preset {
        name: "fig4",
        summary: "Kuramoto, N=100, K=0.509 (critical), logistic frequencies of width 0.2, t=100",
        toml: r#"mode = "kuramoto"
seed = 1
description = "N=100, K=0.509 at the critical coupling of a logistic density with width 0.2"

[integration]
t_end = 100.0
dt = 0.02
record_every = 10

[oscillators]
n = 100
coupling = 0.509
distribution = "logistic"
width = 0.2
"#,
    },
    Preset {
        name: "fig5",
        summary: "Kuramoto, N=100, K=0.4 (critical), Lorentzian frequencies of half width 0.2, t=100",
        toml: r#"mode = "kuramoto"
seed = 1
description = "N=100, K=0.4 at the critical coupling of a Lorentzian with half width 0.2"

[integration]
t_end = 100.0
dt = 0.02
record_every = 10

[oscillators]
n = 100
coupling = 0.4
distribution = "lorentzian"
width = 0.2
"#,
    },
    Preset {
        name: "fig6",
        summary: "JJ full circuit, N=100 non-identical, Ic=10uA +-0.1%, rho=4.2kohm +-0.05%, L=1nH, C=1uF, R=2ohm, Ib=12uA, t=25",
        toml: jj_preset!(
            r#"mode = "jj-full"
seed = 1
description = "N=100 non-identical junctions with an uncoupled control run"

[integration]
t_end = 25.0
record_every = 4

[array]
n = 100
critical_current = "10uA"
resistance = "4.2kohm"
ic_spread = 0.001
rho_spread = 0.0005
bias_current = "12uA"
control = true
"#
        ),
    },
    Preset {
        name: "fig7",
        summary: "JJ full circuit, N=100 identical, Ic=10uA, rho=4.2kohm, L=1nH, C=1uF, R=2ohm, Ib=12uA, t=25",
        toml: jj_preset!(
            r#"mode = "jj-full"
seed = 1
description = "N=100 identical junctions with an uncoupled control run"

[integration]
t_end = 25.0
record_every = 4

[array]
n = 100
critical_current = "10uA"
resistance = "4.2kohm"
bias_current = "12uA"
control = true
"#
        ),
    },
    Preset {
        name: "fig8",
        summary: "JJ full circuit, N=5 non-identical, Ic=10uA +-0.1%, rho=4.2kohm +-0.05%, Ib=10.8785uA, t=15",
        toml: jj_preset!(
            r#"mode = "jj-full"
seed = 47
description = "N=5 non-identical junctions biased close to threshold; partial locking"

[integration]
t_end = 15.0
record_every = 4

[array]
n = 5
critical_current = "10uA"
resistance = "4.2kohm"
ic_spread = 0.001
rho_spread = 0.0005
bias_current = "10.8785uA"
"#
        ),
    },
    Preset {
        name: "fig9",
        summary: "JJ full circuit, N=5 identical, Ic=10uA, rho=4.2kohm, Ib=10.877uA, t=15",
        toml: jj_preset!(
            r#"mode = "jj-full"
seed = 47
description = "N=5 identical junctions biased close to threshold; partial locking"

[integration]
t_end = 15.0
record_every = 4

[array]
n = 5
critical_current = "10uA"
resistance = "4.2kohm"
bias_current = "10.877uA"
"#
        ),
    },
    Preset {
        name: "async5",
        summary: "JJ full circuit, N=5 identical, Ic=10uA, rho=4.2kohm, Ib=12uA, t=25 (no lasting sync)",
        toml: jj_preset!(
            r#"mode = "jj-full"
seed = 5
description = "N=5 identical junctions at Ib=12uA; the order parameter keeps oscillating"

[integration]
t_end = 25.0
record_every = 4

[array]
n = 5
critical_current = "10uA"
resistance = "4.2kohm"
bias_current = "12uA"
"#
        ),
    },
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        Error::Unsupported(format!("unknown preset `{name}`; valid presets: {}", names().join(", ")))
    })
}

pub fn load(name: &str) -> Result<RunConfig> {
    RunConfig::from_toml(find(name)?.toml)
}

/// One line per preset: name, then its parameters.
pub fn listing() -> String {
    PRESETS.iter().map(|p| format!("{:<7} {}\n", p.name, p.summary)).collect()
}
