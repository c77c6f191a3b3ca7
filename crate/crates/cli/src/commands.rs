use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use bilateral_gamma::analysis::{mode, shape_report, taxonomy};
use bilateral_gamma::density::pdf_with;
use bilateral_gamma::distribution::{cdf_with, moments, quantile_with};
use bilateral_gamma::oracle::verification_suite;
use bilateral_gamma::simfit::{fit_mle_with, sample, FitOptions, RngState};
use bilateral_gamma::{BgParams, Error};
use serde::Serialize;

use crate::config::{CliConfig, DEFAULT_GRID};
use crate::failure::Failure;

/// Text for standard output plus a failure to report after printing it.
pub struct Outcome {
    pub text: String,
    pub failure: Option<Failure>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

const DEFAULT_SAMPLE_SIZE: usize = 1000;

/// Illustrative panel, one member of each shape class at unit rates.
pub fn default_panel() -> Vec<BgParams> {
    [(0.4, 1.0, 0.4, 1.0), (0.7, 1.0, 0.6, 1.0), (1.3, 1.0, 0.5, 1.0), (1.0, 1.0, 1.0, 1.0), (2.5, 1.0, 2.5, 1.0)]
        .iter()
        .map(|&(a, b, c, d)| BgParams::new(a, b, c, d).expect("valid literal"))
        .collect()
}

fn config_line(cfg: &CliConfig) -> String {
    format!("# {}\n", serde_json::to_string(cfg).expect("config serializes"))
}

#[derive(Serialize)]
struct Document<'a, T> {
    config: &'a CliConfig,
    result: &'a T,
}

fn json_document<T: Serialize>(cfg: &CliConfig, result: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Document { config: cfg, result }).expect("result serializes");
    s.push('\n');
    s
}

/// One numeric column: `#` lines and blanks are skipped, the first
/// remaining line may be a header, anything else non-numeric is rejected.
pub fn parse_column(text: &str, source: &str) -> Result<Vec<f64>, Failure> {
    let mut values = Vec::new();
    let mut bad = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or("").trim();
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => bad.push(format!("line {}: non-finite value '{field}'", i + 1)),
            Err(_) if first => {}
            Err(_) => bad.push(format!("line {}: non-numeric value '{field}'", i + 1)),
        }
        first = false;
    }
    if !bad.is_empty() {
        return Err(Failure::Data(format!("{source}: {}", bad.join("; "))));
    }
    if values.is_empty() {
        return Err(Failure::Data(format!("{source}: no numeric values")));
    }
    Ok(values)
}

fn read_source(path: Option<&Path>) -> Result<(String, String), Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map(|t| (t, p.display().to_string()))
            .map_err(|e| Failure::Data(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut t = String::new();
            std::io::stdin().read_to_string(&mut t).map_err(|e| Failure::Data(format!("cannot read stdin: {e}")))?;
            Ok((t, "stdin".into()))
        }
    }
}

fn points_or_stdin(given: &[f64]) -> Result<Vec<f64>, Failure> {
    if !given.is_empty() {
        return Ok(given.to_vec());
    }
    let (text, source) = read_source(None)?;
    parse_column(&text, &source)
}

fn csv_table<F: FnMut(f64) -> Result<f64, Error>>(cfg: &CliConfig, xs: &[f64], mut f: F) -> Result<String, Failure> {
    let mut out = config_line(cfg);
    out.push_str("x,value\n");
    for &x in xs {
        let v = f(x)?;
        writeln!(out, "{x:?},{v:?}").unwrap();
    }
    Ok(out)
}

pub fn pdf_cmd(cfg: &CliConfig, x: &[f64]) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    let xs = points_or_stdin(x)?;
    Ok(csv_table(cfg, &xs, |x| pdf_with(&p, x, &cfg.policy))?.into())
}

pub fn cdf_cmd(cfg: &CliConfig, x: &[f64]) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    let xs = points_or_stdin(x)?;
    Ok(csv_table(cfg, &xs, |x| cdf_with(&p, x, &cfg.policy))?.into())
}

pub fn quantile_cmd(cfg: &CliConfig, u: &[f64]) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    let us = points_or_stdin(u)?;
    Ok(csv_table(cfg, &us, |u| quantile_with(&p, u, &cfg.policy))?.into())
}

pub fn moments_cmd(cfg: &CliConfig) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    Ok(json_document(cfg, &moments(&p)).into())
}

pub fn mode_cmd(cfg: &CliConfig) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    Ok(json_document(cfg, &mode(&p)?).into())
}

pub fn classify_cmd(cfg: &CliConfig) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    Ok(json_document(cfg, &shape_report(&p)?).into())
}

pub fn sample_cmd(cfg: &mut CliConfig) -> Result<Outcome, Failure> {
    let p = cfg.one_params()?;
    let n = *cfg.n.get_or_insert(DEFAULT_SAMPLE_SIZE);
    let seed = *cfg.seed.get_or_insert(0);
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let mut out = config_line(cfg);
    for v in sample(&p, n, &mut RngState::new(seed)) {
        writeln!(out, "{v:?}").unwrap();
    }
    Ok(out.into())
}

pub fn fit_cmd(cfg: &mut CliConfig) -> Result<Outcome, Failure> {
    let init = match cfg.params.as_slice() {
        [] => None,
        [p] => Some(*p),
        _ => return Err(Failure::Usage("fit takes at most one --params (the starting point)".into())),
    };
    let seed = *cfg.seed.get_or_insert(0);
    let mut opts = FitOptions { policy: cfg.policy, ..FitOptions::default() };
    if let Some(s) = cfg.starts {
        if s == 0 {
            return Err(Failure::Usage("--starts must be at least 1".into()));
        }
        opts.starts = s;
    }
    let (text, source) = read_source(cfg.input.as_deref())?;
    let data = parse_column(&text, &source)?;
    let result = fit_mle_with(&data, init, &mut RngState::new(seed), &opts)?;
    Ok(json_document(cfg, &result).into())
}

fn column_labels(sets: &[BgParams]) -> Vec<String> {
    let names: Vec<String> = sets.iter().map(|p| format!("{:?}", taxonomy(p))).collect();
    names
        .iter()
        .enumerate()
        .map(|(i, n)| if names.iter().filter(|m| *m == n).count() > 1 { format!("{n}_{}", i + 1) } else { n.clone() })
        .collect()
}

pub fn plot_data_cmd(cfg: &mut CliConfig) -> Result<Outcome, Failure> {
    if cfg.params.is_empty() {
        cfg.params = default_panel();
    }
    let grid = *cfg.grid.get_or_insert(DEFAULT_GRID);
    if !(grid.min.is_finite() && grid.max.is_finite() && grid.min < grid.max && grid.count >= 2) {
        return Err(Failure::Usage(format!(
            "grid needs finite min < max and count >= 2, got {}..{} with {} points",
            grid.min, grid.max, grid.count
        )));
    }
    let mut out = config_line(cfg);
    out.push('x');
    for l in column_labels(&cfg.params) {
        write!(out, ",{l}").unwrap();
    }
    out.push('\n');
    let step = (grid.max - grid.min) / (grid.count - 1) as f64;
    for k in 0..grid.count {
        let x = if k + 1 == grid.count { grid.max } else { grid.min + k as f64 * step };
        write!(out, "{x:?}").unwrap();
        for p in &cfg.params {
            let v = match pdf_with(p, x, &cfg.policy) {
                Ok(v) => v,
                Err(Error::Pole { .. }) => f64::INFINITY,
                Err(e) => return Err(e.into()),
            };
            write!(out, ",{v:?}").unwrap();
        }
        out.push('\n');
    }
    Ok(out.into())
}

pub fn verify_cmd(cfg: &mut CliConfig) -> Result<Outcome, Failure> {
    let scale = *cfg.tolerance_scale.get_or_insert(1.0);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Failure::Usage(format!("--tolerance-scale must be positive, got {scale}")));
    }
    let reports = verification_suite(scale)?;
    let mut text = serde_json::to_string_pretty(&reports).expect("reports serialize");
    text.push('\n');
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| match &r.params {
            Some(p) => format!("{} [{p}]", r.target),
            None => r.target.clone(),
        })
        .collect();
    let failure = (!failed.is_empty())
        .then(|| Failure::Verification(format!("{} of {} checks failed: {}", failed.len(), reports.len(), failed.join(", "))));
    Ok(Outcome { text, failure })
}
