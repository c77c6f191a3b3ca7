use serde::{Deserialize, Serialize};

use crate::density::{ln_pdf, pdf};
use crate::distribution::{moments, quantile, vg_params, vg_pdf};
use crate::error::Result;
use crate::params::BgParams;
use crate::simfit::RngState;

use super::mc::mc_moment_oracle;
use super::pdf::{default_fft_halfwidth, pdf_fft_oracle, pdf_quadrature_oracle};
use super::tanh_sinh::{ln_integral_half_line, Tolerance};

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub target: String,
    pub params: Option<BgParams>,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub abs_threshold: f64,
    pub rel_threshold: f64,
    pub grid: Vec<f64>,
    pub passed: bool,
}

impl OracleReport {
    /// `pairs` holds `(value, reference)` for each grid point.
    pub fn from_pairs(
        target: &str,
        params: Option<BgParams>,
        grid: Vec<f64>,
        pairs: &[(f64, f64)],
        abs_threshold: f64,
        rel_threshold: f64,
    ) -> Self {
        let mut max_abs: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        for &(v, r) in pairs {
            let d = (v - r).abs();
            max_abs = max_abs.max(d);
            max_rel = max_rel.max(if r == 0.0 { if d == 0.0 { 0.0 } else { f64::INFINITY } } else { d / r.abs() });
        }
        let passed = max_abs <= abs_threshold && max_rel <= rel_threshold;
        OracleReport {
            target: target.to_string(),
            params,
            max_abs_err: max_abs,
            max_rel_err: max_rel,
            abs_threshold,
            rel_threshold,
            grid,
            passed,
        }
    }
}

/// Stand-in threshold for an error measure a target does not constrain.
const UNCONSTRAINED: f64 = f64::MAX;

fn bg(a: f64, b: f64, c: f64, d: f64) -> BgParams {
    BgParams::new(a, b, c, d).expect("valid literal")
}

/// The representation-agreement parameter sets.
pub(crate) fn reference_sets() -> Vec<BgParams> {
    vec![
        bg(1.0, 1.0, 1.0, 1.0),
        bg(2.0, 1.0, 1.0, 1.0),
        bg(3.0, 2.0, 0.5, 1.0),
        bg(0.5, 1.0, 0.5, 1.0),
        bg(1.55, 133.96, 0.94, 88.92),
        bg(0.7, 2.0, 1.3, 3.0),
    ]
}

fn sd(p: &BgParams) -> f64 {
    moments(p).variance.sqrt()
}

fn signed_oracle(p: &BgParams, x: f64) -> Result<f64> {
    if x > 0.0 {
        pdf_quadrature_oracle(p, x)
    } else {
        pdf_quadrature_oracle(&p.reflect(), -x)
    }
}

fn quadrature_report(p: &BgParams, scale: f64) -> Result<OracleReport> {
    let s = sd(p);
    let mut grid = Vec::new();
    for k in 0..11 {
        let x = s * 0.01 * 500f64.powf(k as f64 / 10.0);
        grid.push(x);
        grid.push(-x);
    }
    let pairs = grid.iter().map(|&x| Ok((pdf(p, x)?, signed_oracle(p, x)?))).collect::<Result<Vec<_>>>()?;
    let peak = pairs.iter().map(|q| q.1).fold(0.0, f64::max);
    Ok(OracleReport::from_pairs("pdf_vs_quadrature", Some(*p), grid, &pairs, 1e-7 * peak * scale, 1e-7 * scale))
}

fn laplace_report(scale: f64) -> Result<OracleReport> {
    let p = bg(1.0, 1.0, 1.0, 1.0);
    let grid: Vec<f64> = (0..50).map(|k| -12.25 + 0.5 * k as f64).collect();
    let pairs = grid.iter().map(|&x| Ok((pdf(&p, x)?, 0.5 * (-x.abs()).exp()))).collect::<Result<Vec<_>>>()?;
    Ok(OracleReport::from_pairs("laplace_exact", Some(p), grid, &pairs, 1e-12 * scale, 1e-12 * scale))
}

fn vg_report(alpha: f64, scale: f64) -> Result<OracleReport> {
    let p = bg(alpha, 1.5, alpha, 0.8);
    let vg = vg_params(&p)?;
    let grid: Vec<f64> = (0..20).map(|k| -4.75 + 0.5 * k as f64).collect();
    let pairs = grid.iter().map(|&x| Ok((pdf(&p, x)?, vg_pdf(&vg, x)?))).collect::<Result<Vec<_>>>()?;
    let peak = pairs.iter().map(|q| q.1).fold(0.0, f64::max);
    Ok(OracleReport::from_pairs("vg_equivalence", Some(p), grid, &pairs, 1e-8 * peak * scale, 1e-8 * scale))
}

/// `∫ f` by exp-sinh on each half-line.
pub(crate) fn total_mass(p: &BgParams) -> Result<f64> {
    let tol = Tolerance { abs: 1e-13, rel: 1e-11 };
    let s = sd(p);
    let mut total = 0.0;
    for q in [*p, p.reflect()] {
        total += ln_integral_half_line(
            |y, _| if y > 0.0 { ln_pdf(&q, y).unwrap_or(f64::NAN) } else { f64::NEG_INFINITY },
            s,
            tol,
        )?
        .exp();
    }
    Ok(total)
}

fn normalization_report(p: &BgParams, scale: f64) -> Result<OracleReport> {
    let m = total_mass(p)?;
    Ok(OracleReport::from_pairs("normalization", Some(*p), vec![], &[(m, 1.0)], 1e-7 * scale, 1e-7 * scale))
}

/// FFT inversion compared on the central 99% of the mass.
pub(crate) fn fft_report(p: &BgParams, grid_size: usize, points: usize, scale: f64) -> Result<OracleReport> {
    let (xs, fs) = pdf_fft_oracle(p, grid_size, default_fft_halfwidth(p))?;
    let lo = quantile(p, 0.005)?;
    let hi = quantile(p, 0.995)?;
    let idx: Vec<usize> = (0..xs.len()).filter(|&j| xs[j] >= lo && xs[j] <= hi && xs[j] != 0.0).collect();
    let step = (idx.len() / points).max(1);
    let mut grid = Vec::new();
    let mut pairs = Vec::new();
    for &j in idx.iter().step_by(step) {
        grid.push(xs[j]);
        pairs.push((pdf(p, xs[j])?, fs[j]));
    }
    Ok(OracleReport::from_pairs("fft_inversion", Some(*p), grid, &pairs, 1e-5 * scale, UNCONSTRAINED))
}

/// Deviations from the moment table in jackknife standard errors
/// (reported as `max_abs_err`) and relative terms.
pub(crate) fn moments_report(p: &BgParams, n: usize, seed: u64, scale: f64) -> Result<OracleReport> {
    let mc = mc_moment_oracle(p, n, &mut RngState::new(seed))?;
    let t = moments(p);
    let rows = [
        (mc.estimate.mean, mc.std_error.mean, t.mean),
        (mc.estimate.variance, mc.std_error.variance, t.variance),
        (mc.estimate.skewness, mc.std_error.skewness, t.skewness),
        (mc.estimate.kurtosis, mc.std_error.kurtosis, t.kurtosis),
    ];
    let z = rows.iter().map(|(e, se, v)| (e - v).abs() / se).fold(0.0, f64::max);
    let rel = rows.iter().map(|(e, _, v)| if *v == 0.0 { (e - v).abs() } else { ((e - v) / v).abs() }).fold(0.0, f64::max);
    let passed = z <= 3.0 * scale;
    Ok(OracleReport {
        target: "mc_moments".into(),
        params: Some(*p),
        max_abs_err: z,
        max_rel_err: rel,
        abs_threshold: 3.0 * scale,
        rel_threshold: UNCONSTRAINED,
        grid: vec![],
        passed,
    })
}

/// Runs every oracle comparison with thresholds multiplied by `tolerance_scale`.
pub fn verification_suite(tolerance_scale: f64) -> Result<Vec<OracleReport>> {
    let scale = tolerance_scale;
    let mut out = Vec::new();
    for p in reference_sets() {
        out.push(quadrature_report(&p, scale)?);
    }
    out.push(laplace_report(scale)?);
    for a in [0.5, 1.0, 2.5] {
        out.push(vg_report(a, scale)?);
    }
    for p in reference_sets().into_iter().filter(|p| p.alpha_sum() > 1.0) {
        out.push(normalization_report(&p, scale)?);
    }
    for p in [bg(2.0, 1.0, 1.0, 1.0), bg(1.55, 133.96, 0.94, 88.92)] {
        out.push(fft_report(&p, 1 << 18, 200, scale)?);
    }
    for (p, seed) in [(bg(1.0, 1.0, 1.0, 1.0), 1), (bg(2.0, 5.0, 3.0, 7.0), 2)] {
        out.push(moments_report(&p, 200_000, seed, scale)?);
    }
    Ok(out)
}
