use std::path::{Path, PathBuf};

use bilateral_gamma::specfun::EvalPolicy;
use bilateral_gamma::BgParams;
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Symmetric about 0 with an even count, so 0 itself is not a node.
pub const DEFAULT_GRID: GridSpec = GridSpec { min: -4.0, max: 4.0, count: 400 };

/// Parameters in a config file: either `"a,b,c,d"` or an object.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ParamsEntry {
    Text(String),
    Object(BgParams),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    params: Option<Vec<ParamsEntry>>,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    grid: Option<GridSpec>,
    seed: Option<u64>,
    n: Option<usize>,
    starts: Option<usize>,
    tolerance_scale: Option<f64>,
    policy: Option<EvalPolicy>,
}

/// Settings after merging defaults, environment, config file and flags.
#[derive(Debug, Clone, Serialize)]
pub struct CliConfig {
    pub command: &'static str,
    pub params: Vec<BgParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance_scale: Option<f64>,
    pub policy: EvalPolicy,
}

pub fn parse_params(s: &str) -> Result<BgParams, Failure> {
    s.parse::<BgParams>()
        .map_err(|e| Failure::Usage(format!("invalid --params '{s}' (expected alpha+,lambda+,alpha-,lambda-): {e}")))
}

fn env_value<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Failure> {
    match std::env::var(name) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Failure::Usage(format!("cannot parse {name}='{v}'"))),
        Err(_) => Ok(None),
    }
}

/// Default policy with `BGAMMA_*` environment overrides.
fn env_policy() -> Result<EvalPolicy, Failure> {
    let mut p = EvalPolicy::default();
    if let Some(v) = env_value("BGAMMA_REL_TOL")? {
        p.rel_tol = v;
    }
    if let Some(v) = env_value("BGAMMA_MAX_TERMS")? {
        p.max_terms = v;
    }
    if let Some(v) = env_value("BGAMMA_QUAD_ABS_TOL")? {
        p.quad_abs_tol = v;
    }
    if let Some(v) = env_value("BGAMMA_ASYMPTOTIC_SWITCH_Z")? {
        p.asymptotic_switch_z = v;
    }
    Ok(p)
}

fn read_file_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
}

/// Flag values for one invocation; `None` means "not given".
#[derive(Debug, Default)]
pub struct Overrides {
    pub params: Vec<String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_count: Option<usize>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub starts: Option<usize>,
    pub tolerance_scale: Option<f64>,
}

pub fn resolve(command: &'static str, config: Option<&Path>, flags: Overrides) -> Result<CliConfig, Failure> {
    let file = match config {
        Some(p) => read_file_config(p)?,
        None => FileConfig::default(),
    };
    let params = if !flags.params.is_empty() {
        flags.params.iter().map(|s| parse_params(s)).collect::<Result<Vec<_>, _>>()?
    } else {
        file.params
            .unwrap_or_default()
            .into_iter()
            .map(|e| match e {
                ParamsEntry::Text(s) => parse_params(&s),
                ParamsEntry::Object(p) => Ok(p),
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut policy = env_policy()?;
    if let Some(p) = file.policy {
        policy = p;
    }
    policy.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let grid = match (file.grid, flags.grid_min, flags.grid_max, flags.grid_count) {
        (None, None, None, None) => None,
        (g, lo, hi, c) => {
            let base = g.unwrap_or(DEFAULT_GRID);
            Some(GridSpec { min: lo.unwrap_or(base.min), max: hi.unwrap_or(base.max), count: c.unwrap_or(base.count) })
        }
    };
    Ok(CliConfig {
        command,
        params,
        input: flags.input.or(file.input),
        output: flags.output.or(file.output),
        grid,
        seed: flags.seed.or(file.seed),
        n: flags.n.or(file.n),
        starts: flags.starts.or(file.starts),
        tolerance_scale: flags.tolerance_scale.or(file.tolerance_scale),
        policy,
    })
}

impl CliConfig {
    /// The single parameter set required by most commands.
    pub fn one_params(&self) -> Result<BgParams, Failure> {
        match self.params.as_slice() {
            [p] => Ok(*p),
            [] => Err(Failure::Usage(format!("{} requires --params alpha+,lambda+,alpha-,lambda-", self.command))),
            _ => Err(Failure::Usage(format!("{} takes exactly one --params", self.command))),
        }
    }
}
