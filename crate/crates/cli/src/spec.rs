//! Experiment description: TOML file plus command-line overrides.
//!
//! ```toml
//! [network]
//! length = 50.0
//! alpha = 3.0
//! p_db = 100.0
//! lambda_e = 1e-5
//! epsilon = 0.05
//!
//! [design]
//! scheme = "both"
//! n_max = 50
//!
//! [sweep]
//! axis = "p_db"
//! min = 30.0
//! max = 120.0
//! points = 19
//! spacing = "linear"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use multihop_secrecy::model::{db_to_linear, NetworkConfig, SchemeKind};
use multihop_secrecy::optimizer::DEFAULT_N_MAX;
use multihop_secrecy::simulator::{MobilityModel, SimRegion, DEFAULT_SLOT_CAP};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Oft,
    Noft,
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> &'static [SchemeKind] {
        match self {
            SchemeChoice::Oft => &[SchemeKind::Oft],
            SchemeChoice::Noft => &[SchemeKind::Noft],
            SchemeChoice::Both => &SchemeKind::ALL,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeChoice::Oft => "oft",
            SchemeChoice::Noft => "noft",
            SchemeChoice::Both => "both",
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "oft" => Ok(SchemeChoice::Oft),
            "noft" => Ok(SchemeChoice::Noft),
            "both" => Ok(SchemeChoice::Both),
            other => Err(format!("unknown scheme '{other}' (expected oft, noft or both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    PDb,
    LambdaE,
    NHops,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::PDb => "p_db",
            SweepAxis::LambdaE => "lambda_e",
            SweepAxis::NHops => "n_hops",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl Spacing {
    pub fn as_str(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl SweepSpec {
    /// Sweep values in increasing order. Hop counts are rounded to integers.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let step = |i: usize| i as f64 / (n - 1) as f64;
        (0..n)
            .map(|i| {
                let v = match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * step(i),
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * step(i)).exp(),
                };
                // pin the endpoints against rounding in the log form
                let v = if i == 0 {
                    self.min
                } else if i == n - 1 {
                    self.max
                } else {
                    v
                };
                match self.axis {
                    SweepAxis::NHops => v.round(),
                    _ => v,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

pub fn parse_mobility(s: &str) -> Result<MobilityModel, String> {
    match s.to_ascii_lowercase().as_str() {
        "independent" => Ok(MobilityModel::IndependentPerHop),
        "fixed" => Ok(MobilityModel::FixedAcrossHops),
        other => Err(format!("unknown mobility '{other}' (expected independent or fixed)")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub trials: u64,
    pub master_seed: u64,
    pub mobility: MobilityModel,
    pub region_width: f64,
    pub region_height: f64,
    pub slot_cap: u64,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            trials: 100_000,
            master_seed: 42,
            mobility: MobilityModel::IndependentPerHop,
            region_width: 2000.0,
            region_height: 2000.0,
            slot_cap: DEFAULT_SLOT_CAP,
        }
    }
}

impl SimSpec {
    pub fn region(&self, config: &NetworkConfig) -> Result<SimRegion, CliError> {
        SimRegion::new(self.region_width, self.region_height, [0.5 * config.length, 0.0])
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Fully resolved experiment. `p_db` is kept for echoing; `config.p` is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub config: NetworkConfig,
    pub p_db: f64,
    pub scheme: SchemeChoice,
    pub n_hops: Option<usize>,
    pub n_max: usize,
    pub sweep: Option<SweepSpec>,
    /// `None` unless a `[sim]` block or a simulation flag was given.
    pub sim: Option<SimSpec>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            config: NetworkConfig::default(),
            p_db: 100.0,
            scheme: SchemeChoice::Both,
            n_hops: None,
            n_max: DEFAULT_N_MAX,
            sweep: None,
            sim: None,
            output_path: None,
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    #[serde(default)]
    network: NetworkSection,
    #[serde(default)]
    design: DesignSection,
    sweep: Option<SweepSpec>,
    sim: Option<SimSection>,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkSection {
    #[serde(alias = "L")]
    length: Option<f64>,
    alpha: Option<f64>,
    p_db: Option<f64>,
    lambda_e: Option<f64>,
    epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignSection {
    scheme: Option<SchemeChoice>,
    n_hops: Option<usize>,
    n_max: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimSection {
    trials: Option<u64>,
    master_seed: Option<u64>,
    mobility: Option<String>,
    region_width: Option<f64>,
    region_height: Option<f64>,
    slot_cap: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<PathBuf>,
    format: Option<OutputFormat>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scheme: Option<SchemeChoice>,
    pub n_hops: Option<usize>,
    pub n_max: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub mobility: Option<MobilityModel>,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl Overrides {
    fn touches_sim(&self) -> bool {
        self.trials.is_some() || self.seed.is_some() || self.mobility.is_some()
    }
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let file: FileSpec = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let defaults = Self::default();
        let base = defaults.config;
        let p_db = file.network.p_db.unwrap_or(defaults.p_db);
        let config = NetworkConfig {
            length: file.network.length.unwrap_or(base.length),
            alpha: file.network.alpha.unwrap_or(base.alpha),
            p: db_to_linear(p_db),
            lambda_e: file.network.lambda_e.unwrap_or(base.lambda_e),
            epsilon: file.network.epsilon.unwrap_or(base.epsilon),
        };
        let sim = match file.sim {
            None => None,
            Some(s) => {
                let d = SimSpec::default();
                Some(SimSpec {
                    trials: s.trials.unwrap_or(d.trials),
                    master_seed: s.master_seed.unwrap_or(d.master_seed),
                    mobility: match s.mobility {
                        Some(m) => parse_mobility(&m).map_err(CliError::Config)?,
                        None => d.mobility,
                    },
                    region_width: s.region_width.unwrap_or(d.region_width),
                    region_height: s.region_height.unwrap_or(d.region_height),
                    slot_cap: s.slot_cap.unwrap_or(d.slot_cap),
                })
            }
        };
        let spec = Self {
            config,
            p_db,
            scheme: file.design.scheme.unwrap_or(defaults.scheme),
            n_hops: file.design.n_hops,
            n_max: file.design.n_max.unwrap_or(defaults.n_max),
            sweep: file.sweep,
            sim,
            output_path: file.output.path,
            format: file.output.format.unwrap_or_default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(s) = o.scheme {
            self.scheme = s;
        }
        if o.n_hops.is_some() {
            self.n_hops = o.n_hops;
        }
        if let Some(n) = o.n_max {
            self.n_max = n;
        }
        if o.touches_sim() {
            let sim = self.sim.get_or_insert_with(SimSpec::default);
            if let Some(t) = o.trials {
                sim.trials = t;
            }
            if let Some(s) = o.seed {
                sim.master_seed = s;
            }
            if let Some(m) = o.mobility {
                sim.mobility = m;
            }
        }
        if o.output_path.is_some() {
            self.output_path = o.output_path.clone();
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |m: String| Err(CliError::Config(m));
        if !self.p_db.is_finite() {
            return invalid(format!("p_db must be finite (got {})", self.p_db));
        }
        self.config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.n_hops == Some(0) {
            return invalid("n_hops must be at least 1".into());
        }
        if self.n_max == 0 {
            return invalid("n_max must be at least 1".into());
        }
        if let Some(sim) = &self.sim {
            if sim.trials == 0 {
                return invalid("trials must be at least 1".into());
            }
            if sim.slot_cap == 0 {
                return invalid("slot_cap must be at least 1".into());
            }
            sim.region(&self.config)?;
        }
        if let Some(sw) = &self.sweep {
            self.validate_sweep(sw)?;
        }
        Ok(())
    }

    fn validate_sweep(&self, sw: &SweepSpec) -> Result<(), CliError> {
        let invalid = |m: String| Err(CliError::Config(m));
        if sw.points < 2 {
            return invalid(format!("sweep points must be at least 2 (got {})", sw.points));
        }
        if !(sw.min.is_finite() && sw.max.is_finite() && sw.min < sw.max) {
            return invalid(format!("sweep needs finite min < max (got {} .. {})", sw.min, sw.max));
        }
        if sw.spacing == Spacing::Log && sw.min <= 0.0 {
            return invalid(format!("log spacing needs min > 0 (got {})", sw.min));
        }
        match sw.axis {
            SweepAxis::PDb => {}
            SweepAxis::LambdaE => {
                if sw.min < 0.0 {
                    return invalid(format!("lambda_e sweep must be non-negative (got min {})", sw.min));
                }
            }
            SweepAxis::NHops => {
                if sw.min < 1.0 || sw.min.fract() != 0.0 || sw.max.fract() != 0.0 {
                    return invalid(format!(
                        "n_hops sweep bounds must be integers >= 1 (got {} .. {})",
                        sw.min, sw.max
                    ));
                }
            }
        }
        for v in sw.values() {
            self.at_sweep_value(sw.axis, v)?;
        }
        Ok(())
    }

    /// Configuration at one sweep point, plus the hop count the axis pins (if any).
    pub fn at_sweep_value(&self, axis: SweepAxis, value: f64) -> Result<(NetworkConfig, Option<usize>), CliError> {
        let cfg = |r: multihop_secrecy::Result<NetworkConfig>| r.map_err(|e| CliError::Config(e.to_string()));
        match axis {
            SweepAxis::PDb => Ok((cfg(self.config.with_p(db_to_linear(value)))?, self.n_hops)),
            SweepAxis::LambdaE => Ok((cfg(self.config.with_lambda_e(value))?, self.n_hops)),
            SweepAxis::NHops => Ok((self.config, Some(value as usize))),
        }
    }

    /// Key/value pairs echoed in the output header.
    pub fn echo(&self, command: &str) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = vec![
            ("tool".into(), "mhsec".into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), command.into()),
            ("length".into(), self.config.length.to_string()),
            ("alpha".into(), self.config.alpha.to_string()),
            ("p_db".into(), self.p_db.to_string()),
            ("lambda_e".into(), self.config.lambda_e.to_string()),
            ("epsilon".into(), self.config.epsilon.to_string()),
            ("scheme".into(), self.scheme.as_str().into()),
        ];
        if let Some(n) = self.n_hops {
            out.push(("n_hops".into(), n.to_string()));
        }
        out.push(("n_max".into(), self.n_max.to_string()));
        if let Some(sw) = &self.sweep {
            out.push(("sweep_axis".into(), sw.axis.as_str().into()));
            out.push(("sweep_min".into(), sw.min.to_string()));
            out.push(("sweep_max".into(), sw.max.to_string()));
            out.push(("sweep_points".into(), sw.points.to_string()));
            out.push(("sweep_spacing".into(), sw.spacing.as_str().into()));
        }
        if let Some(sim) = &self.sim {
            out.push(("trials".into(), sim.trials.to_string()));
            out.push(("seed".into(), sim.master_seed.to_string()));
            out.push(("mobility".into(), sim.mobility.as_str().into()));
            out.push(("region_width".into(), sim.region_width.to_string()));
            out.push(("region_height".into(), sim.region_height.to_string()));
            out.push(("slot_cap".into(), sim.slot_cap.to_string()));
        }
        out
    }
}

impl fmt::Display for ExperimentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .echo("-")
            .into_iter()
            .skip(3)
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}
