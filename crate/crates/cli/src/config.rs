//! TOML run configuration.
//!
//! ```toml
//! [params]
//! p = 2
//! q = 1
//! omega_x = 3.0
//! delta_gamma = 0.2   # or gamma_up / gamma_down
//!
//! [evolve]
//! n = [20, 40]
//! t_end = 30.0
//! ```
//!
//! Frequencies and rates are in units of `omega_z`, which defaults to 1.
//! Each subcommand reads its own section; missing sections use defaults.

use std::collections::BTreeMap;
use std::fmt;

use btc_core::{validate_params, Params64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Meanfield,
    Portrait,
    Evolve,
    Spectrum,
    Steadystate,
    Scaling,
    Phasediagram,
    AnsatzCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Meanfield => "meanfield",
            Command::Portrait => "portrait",
            Command::Evolve => "evolve",
            Command::Spectrum => "spectrum",
            Command::Steadystate => "steadystate",
            Command::Scaling => "scaling",
            Command::Phasediagram => "phasediagram",
            Command::AnsatzCheck => "ansatz-check",
        }
    }

    /// Commands that take `omega_x` and the rates from their own grid.
    fn sweeps_params(self) -> bool {
        matches!(self, Command::Phasediagram | Command::AnsatzCheck)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F64,
    F32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisChoice {
    Natural,
    Z,
    X,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeanfieldOpts {
    pub theta: f64,
    pub phi: f64,
    pub t_end: f64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub window_periods: usize,
    pub precision: Precision,
}

impl Default for MeanfieldOpts {
    fn default() -> Self {
        Self {
            theta: 1.47,
            phi: 3.10,
            t_end: 200.0,
            samples: 4000,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            window_periods: 20,
            precision: Precision::F64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortraitOpts {
    pub n_phi: usize,
    pub n_cos: usize,
    pub t_end: f64,
    pub samples: usize,
    pub axis: AxisChoice,
    pub precision: Precision,
}

impl Default for PortraitOpts {
    fn default() -> Self {
        Self {
            n_phi: 12,
            n_cos: 8,
            t_end: 30.0,
            samples: 600,
            axis: AxisChoice::Natural,
            precision: Precision::F64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveOpts {
    pub n: Vec<u32>,
    pub theta: f64,
    pub phi: f64,
    pub t_end: f64,
    pub samples: usize,
    pub check_positivity: bool,
}

impl Default for EvolveOpts {
    fn default() -> Self {
        Self {
            n: vec![20, 40, 60, 80],
            theta: 0.0,
            phi: 0.0,
            t_end: 30.0,
            samples: 1500,
            check_positivity: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumOpts {
    pub n: Vec<u32>,
    /// Eigenvalues kept per size.
    pub k: usize,
}

impl Default for SpectrumOpts {
    fn default() -> Self {
        Self {
            n: vec![10, 20, 30, 40],
            k: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SteadyOpts {
    pub n: u32,
}

impl Default for SteadyOpts {
    fn default() -> Self {
        Self { n: 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingOpts {
    pub n: Vec<u32>,
    pub theta: f64,
    pub phi: f64,
    pub t_end: f64,
    pub samples: usize,
    pub nu_min: f64,
    pub nu_max: f64,
    pub nu_step: f64,
}

impl Default for ScalingOpts {
    fn default() -> Self {
        Self {
            n: vec![20, 40, 60, 80],
            theta: 0.0,
            phi: 0.0,
            t_end: 40.0,
            samples: 2000,
            nu_min: 0.0,
            nu_max: 1.0,
            nu_step: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseOpts {
    pub omega_x: [f64; 2],
    pub delta_gamma: [f64; 2],
    /// Cells along `omega_x` and `delta_gamma`.
    pub cells: [usize; 2],
}

impl Default for PhaseOpts {
    fn default() -> Self {
        Self {
            omega_x: [0.0, 4.0],
            delta_gamma: [0.0, 1.4],
            cells: [40, 40],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzOpts {
    pub samples: usize,
    pub n_max: u32,
    pub seed: u64,
    /// Grid resolution in `a` for the maximum check.
    pub grid: usize,
}

impl Default for AnsatzOpts {
    fn default() -> Self {
        Self {
            samples: 200,
            n_max: 10,
            seed: 1,
            grid: 200,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    params: Option<toml::Table>,
    meanfield: Option<MeanfieldOpts>,
    portrait: Option<PortraitOpts>,
    evolve: Option<EvolveOpts>,
    spectrum: Option<SpectrumOpts>,
    steadystate: Option<SteadyOpts>,
    scaling: Option<ScalingOpts>,
    phasediagram: Option<PhaseOpts>,
    #[serde(rename = "ansatz-check")]
    ansatz: Option<AnsatzOpts>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Options {
    Meanfield(MeanfieldOpts),
    Portrait(PortraitOpts),
    Evolve(EvolveOpts),
    Spectrum(SpectrumOpts),
    Steadystate(SteadyOpts),
    Scaling(ScalingOpts),
    Phasediagram(PhaseOpts),
    AnsatzCheck(AnsatzOpts),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params64,
    /// Normalized parameter map, as hashed into the digest.
    pub raw_params: BTreeMap<String, String>,
    pub options: Options,
}

fn value_string(key: &str, v: &toml::Value) -> Result<String, CliError> {
    let real = key.starts_with("omega") || key.contains("gamma");
    match v {
        toml::Value::Integer(i) if real => Ok(format!("{:e}", *i as f64)),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(format!("{f:e}")),
        toml::Value::String(s) => Ok(s.clone()),
        other => Err(CliError::Config(format!(
            "params.{key}: expected a number or string, got {}",
            other.type_str()
        ))),
    }
}

fn params_map(table: &toml::Table, command: Command) -> Result<BTreeMap<String, String>, CliError> {
    const KEYS: [&str; 9] = [
        "p",
        "q",
        "omega_z",
        "omega_x",
        "gamma_up",
        "gamma_down",
        "delta_gamma",
        "n_spins",
        "n_string",
    ];
    let mut raw = BTreeMap::new();
    for (k, v) in table {
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Config(format!("params: unknown key `{k}`")));
        }
        raw.insert(k.clone(), value_string(k, v)?);
    }
    if let Some(dg) = raw.remove("delta_gamma") {
        if raw.contains_key("gamma_up") || raw.contains_key("gamma_down") {
            return Err(CliError::Config(
                "params: give either delta_gamma or gamma_up/gamma_down".into(),
            ));
        }
        let v: f64 = dg
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("params.delta_gamma: cannot parse `{dg}`")))?;
        let (up, down) = if v >= 0.0 { (v, 0.0) } else { (0.0, -v) };
        raw.insert("gamma_up".into(), format!("{up:e}"));
        raw.insert("gamma_down".into(), format!("{down:e}"));
    }
    raw.entry("omega_z".into()).or_insert_with(|| "1e0".into());
    if command.sweeps_params() {
        for k in ["omega_x", "gamma_up", "gamma_down"] {
            raw.entry(k.into()).or_insert_with(|| "0e0".into());
        }
        if command == Command::AnsatzCheck {
            raw.entry("p".into()).or_insert_with(|| "1".into());
            raw.entry("q".into()).or_insert_with(|| "1".into());
        }
    }
    Ok(raw)
}

fn check_sizes(name: &str, n: &[u32]) -> Result<(), CliError> {
    if n.is_empty() {
        return Err(CliError::Config(format!("{name}.n must not be empty")));
    }
    if n.contains(&0) {
        return Err(CliError::Config(format!("{name}.n entries must be >= 1")));
    }
    if n.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!("{name}.n must be strictly increasing")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be finite and positive, got {v}")))
    }
}

fn nonzero(name: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        Err(CliError::Config(format!("{name} must be >= 1")))
    } else {
        Ok(())
    }
}

impl Options {
    fn validate(&self) -> Result<(), CliError> {
        match self {
            Options::Meanfield(o) => {
                positive("meanfield.t_end", o.t_end)?;
                nonzero("meanfield.samples", o.samples)?;
                positive("meanfield.rel_tol", o.rel_tol)?;
                positive("meanfield.abs_tol", o.abs_tol)?;
            }
            Options::Portrait(o) => {
                positive("portrait.t_end", o.t_end)?;
                nonzero("portrait.samples", o.samples)?;
                nonzero("portrait.n_phi", o.n_phi)?;
                nonzero("portrait.n_cos", o.n_cos)?;
            }
            Options::Evolve(o) => {
                check_sizes("evolve", &o.n)?;
                positive("evolve.t_end", o.t_end)?;
                nonzero("evolve.samples", o.samples)?;
            }
            Options::Spectrum(o) => {
                check_sizes("spectrum", &o.n)?;
                nonzero("spectrum.k", o.k)?;
            }
            Options::Steadystate(o) => {
                if o.n == 0 {
                    return Err(CliError::Config("steadystate.n must be >= 1".into()));
                }
            }
            Options::Scaling(o) => {
                check_sizes("scaling", &o.n)?;
                positive("scaling.t_end", o.t_end)?;
                nonzero("scaling.samples", o.samples)?;
                positive("scaling.nu_step", o.nu_step)?;
                if !(o.nu_max >= o.nu_min) {
                    return Err(CliError::Config("scaling.nu_max must be >= nu_min".into()));
                }
            }
            Options::Phasediagram(o) => {
                nonzero("phasediagram.cells[0]", o.cells[0])?;
                nonzero("phasediagram.cells[1]", o.cells[1])?;
                for (name, r) in [("omega_x", o.omega_x), ("delta_gamma", o.delta_gamma)] {
                    if !(r[0] >= 0.0 && r[1] > r[0] && r[1].is_finite()) {
                        return Err(CliError::Config(format!(
                            "phasediagram.{name} must be an increasing nonnegative range"
                        )));
                    }
                }
            }
            Options::AnsatzCheck(o) => {
                nonzero("ansatz-check.samples", o.samples)?;
                nonzero("ansatz-check.grid", o.grid)?;
                if o.n_max == 0 {
                    return Err(CliError::Config("ansatz-check.n_max must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn parse(command: Command, text: &str) -> Result<Self, CliError> {
        if text.trim().is_empty() {
            return Err(CliError::Usage(
                "empty config; a [params] section with at least p and q is required".into(),
            ));
        }
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        let table = raw
            .params
            .ok_or_else(|| CliError::Usage("config has no [params] section".into()))?;
        let raw_params = params_map(&table, command)?;
        let params: Params64 = validate_params(&raw_params)?;
        let options = match command {
            Command::Meanfield => Options::Meanfield(raw.meanfield.unwrap_or_default()),
            Command::Portrait => Options::Portrait(raw.portrait.unwrap_or_default()),
            Command::Evolve => Options::Evolve(raw.evolve.unwrap_or_default()),
            Command::Spectrum => Options::Spectrum(raw.spectrum.unwrap_or_default()),
            Command::Steadystate => Options::Steadystate(raw.steadystate.unwrap_or_default()),
            Command::Scaling => Options::Scaling(raw.scaling.unwrap_or_default()),
            Command::Phasediagram => Options::Phasediagram(raw.phasediagram.unwrap_or_default()),
            Command::AnsatzCheck => Options::AnsatzCheck(raw.ansatz.unwrap_or_default()),
        };
        options.validate()?;
        Ok(Self {
            command,
            params,
            raw_params,
            options,
        })
    }

    /// SHA-256 of the normalized configuration: insensitive to formatting,
    /// key order and omitted defaults.
    pub fn digest(&self) -> String {
        let canonical = serde_json::json!({
            "command": self.command,
            "params": self.raw_params,
            "options": self.options,
        });
        let mut h = Sha256::new();
        h.update(canonical.to_string().as_bytes());
        format!("{:x}", h.finalize())
    }
}
