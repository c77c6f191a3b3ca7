use serde::{Deserialize, Serialize};

use crate::density::ln_pdf_with;
use crate::error::{Error, Result};
use crate::params::BgParams;
use crate::specfun::EvalPolicy;

use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::rng::RngState;
use super::spline::{SumWeights, UniformGrid};

const CLAMP_LO: f64 = 1e-3;
const CLAMP_HI: f64 = 1e4;
const ZERO_PERTURBATION: f64 = 1e-12;

/// Log-likelihood together with the zero-datum perturbation that was applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLikelihood {
    pub value: f64,
    /// Number of exact zeros moved off a pole at the origin.
    pub perturbed_zeros: usize,
    /// Magnitude of the move, `1e-12` times the data scale (0 if none).
    pub perturbation: f64,
}

fn data_scale(data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let rms = (data.iter().map(|x| x * x).sum::<f64>() / n).sqrt();
    if rms > 0.0 {
        rms
    } else {
        1.0
    }
}

fn check_data(data: &[f64], func: &'static str) -> Result<()> {
    if data.is_empty() {
        return Err(Error::domain(func, "data must be nonempty"));
    }
    if let Some((i, x)) = data.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::domain(func, format!("datum {i} is not finite ({x})")));
    }
    Ok(())
}

/// Contribution of `zeros` data points sitting exactly at the origin.
fn zero_term(p: &BgParams, zeros: usize, scale: f64, policy: &EvalPolicy) -> Result<(f64, f64)> {
    if zeros == 0 {
        return Ok((0.0, 0.0));
    }
    if p.alpha_sum() > 1.0 {
        return Ok((zeros as f64 * ln_pdf_with(p, 0.0, policy)?, 0.0));
    }
    // Alternate sides so neither tail is favoured.
    let eps = ZERO_PERTURBATION * scale;
    let up = zeros.div_ceil(2) as f64;
    let down = (zeros / 2) as f64;
    let v = up * ln_pdf_with(p, eps, policy)? + if down > 0.0 { down * ln_pdf_with(p, -eps, policy)? } else { 0.0 };
    Ok((v, eps))
}

/// `Σ ln f(x_i)` with the default evaluation policy.
pub fn loglik(p: &BgParams, data: &[f64]) -> Result<LogLikelihood> {
    loglik_with(p, data, &EvalPolicy::default())
}

pub fn loglik_with(p: &BgParams, data: &[f64], policy: &EvalPolicy) -> Result<LogLikelihood> {
    check_data(data, "loglik")?;
    let mut zeros = 0;
    let mut value = 0.0;
    for &x in data {
        if x == 0.0 {
            zeros += 1;
        } else {
            value += ln_pdf_with(p, x, policy)?;
        }
    }
    let (z, eps) = zero_term(p, zeros, data_scale(data), policy)?;
    let perturbed = if p.alpha_sum() > 1.0 { 0 } else { zeros };
    Ok(LogLikelihood { value: value + z, perturbed_zeros: perturbed, perturbation: eps })
}

fn clamp(v: f64) -> f64 {
    if v.is_finite() {
        v.clamp(CLAMP_LO, CLAMP_HI)
    } else {
        CLAMP_HI
    }
}

/// Moment-matching starting point.
///
/// Each side gets shape `3 / excess kurtosis` (exact for symmetric laws); the
/// variance is split by `1/2 + tanh(skew/2)/4`, and side means are shifted
/// equally until their difference is the sample mean.
pub fn moment_match_init(data: &[f64]) -> Result<BgParams> {
    if data.len() < 4 {
        return Err(Error::Fit(format!("moment matching needs at least 4 data, got {}", data.len())));
    }
    check_data(data, "moment_match_init")?;
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in data {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if !(m2 > 0.0) || m2 <= (mean.abs() * 1e-14).powi(2) {
        return Err(Error::Fit("sample variance is zero".into()));
    }
    let skew = m3 / m2.powf(1.5);
    let exkurt = m4 / (m2 * m2) - 3.0;
    let shape = if exkurt > 0.0 { (3.0 / exkurt).clamp(CLAMP_LO, CLAMP_HI) } else { CLAMP_HI };
    let w = 0.5 + 0.25 * (0.5 * skew).tanh();
    let (vp, vm) = (w * m2, (1.0 - w) * m2);
    let mut mp = (shape * vp).sqrt();
    let mut mm = (shape * vm).sqrt();
    let shift = 0.5 * (mean - (mp - mm));
    mp += shift;
    mm -= shift;
    // Keep both side means positive.
    let floor_p = 0.05 * vp.sqrt();
    let floor_m = 0.05 * vm.sqrt();
    if mp < floor_p {
        mm += floor_p - mp;
        mp = floor_p;
    }
    if mm < floor_m {
        mp += floor_m - mm;
        mm = floor_m;
    }
    BgParams::new(clamp(mp * mp / vp), clamp(mp / vp), clamp(mm * mm / vm), clamp(mm / vm))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub starts: usize,
    /// Standard deviation of the log-space perturbations of the extra starts.
    pub spread: f64,
    pub simplex: NelderMeadOptions,
    /// Spacing of the `ln|x|` interpolation grid used by the objective.
    pub grid_step: f64,
    pub policy: EvalPolicy,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            starts: 5,
            spread: 0.5,
            simplex: NelderMeadOptions { diameter_tol: 1e-8, max_iter: 2000, initial_step: 0.1 },
            grid_step: 0.04,
            policy: EvalPolicy::default(),
        }
    }
}

/// Fitted parameters and optimizer diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: BgParams,
    pub log_likelihood: f64,
    /// Simplex iterations summed over all starts.
    pub iterations: usize,
    pub converged: bool,
    pub init_params: BgParams,
    pub init_log_likelihood: f64,
    /// Max-norm simplex diameter in log-parameter space at termination.
    pub simplex_diameter: f64,
    /// Index of the winning start (0 is the initializer itself).
    pub best_start: usize,
    pub starts_converged: usize,
    pub evaluations: usize,
    pub perturbed_zeros: usize,
}

/// Smooth surrogate of the log-likelihood: `ln f` is tabulated on a uniform
/// `ln|x|` grid per side and the data enter through spline weights.
struct Objective {
    sides: Vec<(f64, SumWeights)>,
    zeros: usize,
    scale: f64,
    policy: EvalPolicy,
}

impl Objective {
    fn new(data: &[f64], step: f64, policy: EvalPolicy) -> Self {
        let mut sides = Vec::new();
        for sign in [1.0, -1.0] {
            let t: Vec<f64> = data.iter().filter(|&&x| x * sign > 0.0).map(|&x| (x * sign).ln()).collect();
            if t.is_empty() {
                continue;
            }
            let lo = t.iter().copied().fold(f64::INFINITY, f64::min) - 0.25;
            let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 0.25;
            sides.push((sign, SumWeights::new(UniformGrid::covering(lo, hi, step), &t)));
        }
        Objective { sides, zeros: data.iter().filter(|&&x| x == 0.0).count(), scale: data_scale(data), policy }
    }

    fn eval(&self, p: &BgParams) -> Result<f64> {
        let mut total = zero_term(p, self.zeros, self.scale, &self.policy)?.0;
        for (sign, w) in &self.sides {
            let y = (0..w.grid.n)
                .map(|k| ln_pdf_with(p, sign * w.grid.node(k).exp(), &self.policy))
                .collect::<Result<Vec<f64>>>()?;
            total += w.total(&y);
        }
        Ok(total)
    }
}

fn to_log(p: &BgParams) -> Vec<f64> {
    p.as_array().iter().map(|v| v.ln()).collect()
}

fn from_log(v: &[f64]) -> Option<BgParams> {
    // Bounds keep the density evaluations inside a sane range.
    if v.iter().any(|x| !(x.abs() <= 30.0)) {
        return None;
    }
    BgParams::new(v[0].exp(), v[1].exp(), v[2].exp(), v[3].exp()).ok()
}

/// Maximum-likelihood fit with default options.
pub fn fit_mle(data: &[f64], init: Option<BgParams>, rng: &mut RngState) -> Result<FitResult> {
    fit_mle_with(data, init, rng, &FitOptions::default())
}

/// Multi-start Nelder–Mead in log-parameters. Start 0 is `init` (moment
/// matching if absent); the others perturb it by `spread` normal noise in
/// log space. The winner is re-scored with the exact log-likelihood and is
/// never worse than the initializer.
pub fn fit_mle_with(data: &[f64], init: Option<BgParams>, rng: &mut RngState, opts: &FitOptions) -> Result<FitResult> {
    if data.len() < 20 {
        return Err(Error::Fit(format!("fitting needs at least 20 data, got {}", data.len())));
    }
    check_data(data, "fit_mle")?;
    let init = match init {
        Some(p) => p,
        None => moment_match_init(data)?,
    };
    let objective = Objective::new(data, opts.grid_step, opts.policy);
    let neg = |v: &[f64]| -> f64 {
        match from_log(v).map(|p| objective.eval(&p)) {
            Some(Ok(l)) if l.is_finite() => -l,
            _ => f64::INFINITY,
        }
    };

    let x0 = to_log(&init);
    let mut starts = vec![x0.clone()];
    for _ in 1..opts.starts.max(1) {
        starts.push(x0.iter().map(|v| v + opts.spread * rng.normal()).collect());
    }

    let mut evaluations = 0;
    let mut iterations = 0;
    let mut converged_count = 0;
    let mut best: Option<(usize, super::nelder_mead::NelderMeadResult)> = None;
    for (i, s) in starts.iter().enumerate() {
        let r = nelder_mead(neg, s, &opts.simplex);
        evaluations += r.evaluations;
        iterations += r.iterations;
        if r.converged {
            converged_count += 1;
        }
        let better = match &best {
            None => true,
            Some((_, b)) => (r.converged, -r.value) > (b.converged, -b.value),
        };
        if better {
            best = Some((i, r));
        }
    }
    let (best_start, r) = best.expect("at least one start");

    let init_ll = loglik_with(&init, data, &opts.policy)?;
    let candidate = from_log(&r.x).filter(|_| r.value.is_finite());
    let scored = match candidate {
        Some(p) => loglik_with(&p, data, &opts.policy).ok().map(|l| (p, l)),
        None => None,
    };
    let result = match scored {
        Some((p, l)) if l.value >= init_ll.value => FitResult {
            params: p,
            log_likelihood: l.value,
            iterations,
            converged: r.converged,
            init_params: init,
            init_log_likelihood: init_ll.value,
            simplex_diameter: r.diameter,
            best_start,
            starts_converged: converged_count,
            evaluations,
            perturbed_zeros: l.perturbed_zeros,
        },
        _ => FitResult {
            params: init,
            log_likelihood: init_ll.value,
            iterations,
            converged: false,
            init_params: init,
            init_log_likelihood: init_ll.value,
            simplex_diameter: r.diameter,
            best_start,
            starts_converged: converged_count,
            evaluations,
            perturbed_zeros: init_ll.perturbed_zeros,
        },
    };
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simfit::sample;

    #[test]
    fn laplace_single_datum() {
        let p = BgParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        for &x in &[-2.5, -0.1, 0.3, 4.0] {
            let l = loglik(&p, &[x]).unwrap();
            assert!((l.value - (0.5f64.ln() - x.abs())).abs() < 1e-13);
            assert_eq!(l.perturbed_zeros, 0);
        }
    }

    #[test]
    fn permutation_invariant() {
        let p = BgParams::new(0.7, 1.3, 2.2, 0.8).unwrap();
        let mut d = sample(&p, 50, &mut RngState::new(8));
        let a = loglik(&p, &d).unwrap().value;
        d.reverse();
        d.swap(3, 17);
        let b = loglik(&p, &d).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn zeros_under_pole_are_reported() {
        let p = BgParams::new(0.4, 1.0, 0.4, 1.0).unwrap();
        let l = loglik(&p, &[0.0, 1.0, -2.0, 0.0]).unwrap();
        assert_eq!(l.perturbed_zeros, 2);
        assert!(l.value.is_finite());
        let scale = (5.0f64 / 4.0).sqrt();
        assert!((l.perturbation - 1e-12 * scale).abs() < 1e-27);
        let smooth = BgParams::new(2.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(loglik(&smooth, &[0.0, 1.0]).unwrap().perturbed_zeros, 0);
    }

    #[test]
    fn non_finite_data() {
        let p = BgParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(loglik(&p, &[1.0, f64::NAN]), Err(Error::Domain { .. })));
        assert!(loglik(&p, &[]).is_err());
    }

    #[test]
    fn symmetric_init_is_balanced() {
        let p = BgParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let d = sample(&p, 100_000, &mut RngState::new(21));
        let q = moment_match_init(&d).unwrap();
        let ratio = (q.alpha_plus() / q.lambda_plus()) / (q.alpha_minus() / q.lambda_minus());
        assert!((ratio - 1.0).abs() < 0.2, "{q}");
    }

    #[test]
    fn init_recovers_skewed_sign() {
        let p = BgParams::new(3.0, 1.0, 1.0, 2.0).unwrap();
        let d = sample(&p, 50_000, &mut RngState::new(2));
        let q = moment_match_init(&d).unwrap();
        assert!(q.alpha_plus() / q.lambda_plus() > q.alpha_minus() / q.lambda_minus());
    }

    #[test]
    fn init_degenerate() {
        assert!(matches!(moment_match_init(&[2.0; 10]), Err(Error::Fit(_))));
        assert!(matches!(moment_match_init(&[1.0, 2.0, 3.0]), Err(Error::Fit(_))));
    }

    #[test]
    fn init_within_box() {
        for seed in 0..20 {
            let mut rng = RngState::new(seed);
            let d: Vec<f64> = (0..30).map(|_| 1e6 * rng.normal() + if seed % 2 == 0 { 1e9 } else { 0.0 }).collect();
            let q = moment_match_init(&d).unwrap();
            for v in q.as_array() {
                assert!((CLAMP_LO..=CLAMP_HI).contains(&v));
            }
        }
    }

    #[test]
    fn objective_tracks_exact_loglik() {
        let p = BgParams::new(1.3, 2.0, 0.8, 1.5).unwrap();
        let d = sample(&p, 2000, &mut RngState::new(4));
        let obj = Objective::new(&d, 0.04, EvalPolicy::default());
        for q in [p, BgParams::new(0.9, 1.7, 1.1, 1.2).unwrap()] {
            let exact = loglik(&q, &d).unwrap().value;
            assert!((obj.eval(&q).unwrap() - exact).abs() < 1e-4, "{q}");
        }
    }

    #[test]
    fn small_fit_is_reproducible_and_monotone() {
        let p = BgParams::new(1.5, 2.0, 0.9, 1.0).unwrap();
        let d = sample(&p, 400, &mut RngState::new(12));
        let opts = FitOptions { starts: 2, grid_step: 0.1, ..Default::default() };
        let a = fit_mle_with(&d, None, &mut RngState::new(1), &opts).unwrap();
        let b = fit_mle_with(&d, None, &mut RngState::new(1), &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.log_likelihood >= a.init_log_likelihood);
        if a.converged {
            assert!(a.simplex_diameter <= 1e-8);
        }
    }

    #[test]
    fn too_few_data() {
        assert!(matches!(fit_mle(&[1.0; 10], None, &mut RngState::new(0)), Err(Error::Fit(_))));
    }
}
