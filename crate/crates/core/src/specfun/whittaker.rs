//! Whittaker functions `W_{λ,μ}` and `M_{λ,μ}` for real arguments.
//!
//! `W` is evaluated from its Laplace-type integral
//!
//! ```text
//! W_{λ,μ}(z) = z^λ e^{-z/2} / Γ(μ-λ+1/2) ∫_0^∞ t^{μ-λ-1/2} e^{-t} (1 + t/z)^{μ+λ-1/2} dt,   μ - λ > -1/2
//! ```
//!
//! and, for large `z`, from `e^{-z/2} z^λ H(z)` with the divergent series `H`
//! cut at its smallest term. `M` (via Kummer's `Φ`) and the connection
//! formula expressing `W` through `M_{λ,±μ}` are kept as an independent route
//! for cross-checks; that route has poles at `2μ ∈ ℤ`.

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_with_breaks};

use super::gamma::{gamma, ln_gamma_unchecked, recip_gamma};
use super::kummer::kummer_phi_with;
use super::EvalPolicy;

fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// `ln ∫_0^∞ t^β e^{-t} (1 + t/z)^γ dt` for `β > -1`, `z > 0`.
///
/// The range is cut at `min(z, 1)` and `1`. On `[0, min(z,1)]` the power
/// substitution `t = a r^{1/(1+β)}` removes the endpoint singularity, on
/// `[z, 1]` (only when `z < 1`) a logarithmic variable flattens the power-law
/// stretch, and `[1, ∞)` is mapped to `[0, 1)`. Each piece is integrated with a
/// log-space shift so large exponents cannot overflow.
pub(crate) fn ln_shifted_gamma_integral(beta: f64, gam: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    const FUNC: &str = "whittaker_w";
    if !(beta > -1.0) {
        return Err(Error::domain(FUNC, format!("integral diverges at 0 for exponent {beta}")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(FUNC, format!("argument must be positive and finite, got {z}")));
    }
    let opts = policy.quad_options();
    let q = |t: f64| -t + gam * (t / z).ln_1p();
    let mut logs = Vec::with_capacity(3);

    // [0, a]
    let a = z.min(1.0);
    let p = 1.0 / (1.0 + beta);
    let t_star = (gam - z).clamp(0.0, a);
    let shift1 = q(0.0).max(q(a)).max(q(t_star));
    let piece1 = integrate(|r: f64| (q(a * r.powf(p)) - shift1).exp(), 0.0, 1.0, &opts)
        .map_err(|e| retag(e, "first piece"))?;
    logs.push((1.0 + beta) * a.ln() + p.ln() + shift1 + piece1.value.ln());

    // [z, 1] in u = ln t
    if z < 1.0 {
        let lo = z.ln();
        let phi = |u: f64| (beta + 1.0) * u + q(u.exp());
        let shift2 = (0..=32).map(|i| phi(lo * (1.0 - i as f64 / 32.0))).fold(f64::NEG_INFINITY, f64::max);
        let piece2 =
            integrate(|u: f64| (phi(u) - shift2).exp(), lo, 0.0, &opts).map_err(|e| retag(e, "middle piece"))?;
        logs.push(shift2 + piece2.value.ln());
    }

    // [1, ∞) via t = 1 + s / (1 - s)
    let psi = |t: f64| beta * t.ln() + q(t);
    let t_peak = (beta + gam).max(1.0);
    let shift3 = psi(1.0).max(psi(t_peak));
    let s_peak = (t_peak - 1.0) / t_peak;
    let mut breaks = vec![0.0];
    if s_peak > 1e-3 && s_peak < 1.0 - 1e-3 {
        breaks.push(s_peak);
    }
    breaks.push(1.0);
    let piece3 = integrate_with_breaks(
        |s: f64| {
            if s >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - s;
            let t = 1.0 + s / w;
            let v = (psi(t) - shift3).exp();
            if v == 0.0 {
                0.0
            } else {
                v / (w * w)
            }
        },
        &breaks,
        &opts,
    )
    .map_err(|e| retag(e, "tail piece"))?;
    if piece3.value > 0.0 {
        logs.push(shift3 + piece3.value.ln());
    }

    let ln_j = log_sum_exp(&logs);
    if !ln_j.is_finite() {
        return Err(Error::evaluation(FUNC, format!("non-finite integral (beta={beta}, gamma={gam}, z={z})")));
    }
    Ok(ln_j)
}

fn retag(e: Error, piece: &str) -> Error {
    match e {
        Error::Evaluation { msg, .. } => Error::evaluation("whittaker_w", format!("{piece}: {msg}")),
        other => other,
    }
}

fn check_args(lam: f64, mu: f64, z: f64) -> Result<()> {
    const FUNC: &str = "whittaker_w";
    if !(lam.is_finite() && mu.is_finite()) {
        return Err(Error::domain(FUNC, "indices must be finite"));
    }
    if !(mu - lam > -0.5) {
        return Err(Error::domain(FUNC, format!("requires mu - lambda > -1/2, got mu={mu}, lambda={lam}")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(FUNC, format!("argument must be positive and finite, got {z}")));
    }
    Ok(())
}

fn ln_w_quadrature(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    let b = mu - lam + 0.5;
    let ln_j = ln_shifted_gamma_integral(b - 1.0, mu + lam - 0.5, z, policy)?;
    Ok(lam * z.ln() - 0.5 * z - ln_gamma_unchecked(b) + ln_j)
}

/// Returns `ln H(z)` or an error when the smallest term is not below `rel_tol`.
fn ln_w_asymptotic(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    const FUNC: &str = "whittaker_w_asymptotic";
    let mu2 = mu * mu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut converged = false;
    for k in 1..=policy.max_terms {
        let kf = k as f64;
        let c = lam - kf + 0.5;
        let next = term * (mu2 - c * c) / (kf * z);
        if next == 0.0 {
            converged = true;
            break;
        }
        if next.abs() >= term.abs() {
            // Smallest term reached; it bounds the truncation error.
            converged = term.abs() <= policy.rel_tol * sum.abs();
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 0.1 * f64::EPSILON * sum.abs() {
            converged = true;
            break;
        }
    }
    if !converged || !(sum > 0.0) {
        return Err(Error::evaluation(
            FUNC,
            format!("expansion not accurate to {:e} at z={z} (lambda={lam}, mu={mu})", policy.rel_tol),
        ));
    }
    Ok(-0.5 * z + lam * z.ln() + sum.ln())
}

/// `ln W_{λ,μ}(z)` under an explicit policy.
pub fn ln_whittaker_w_with(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    check_args(lam, mu, z)?;
    if z > policy.asymptotic_switch_z {
        if let Ok(v) = ln_w_asymptotic(lam, mu, z, policy) {
            return Ok(v);
        }
    }
    ln_w_quadrature(lam, mu, z, policy)
}

/// `ln W_{λ,μ}(z)`; `W` is positive whenever `μ - λ > -1/2`.
pub fn ln_whittaker_w(lam: f64, mu: f64, z: f64) -> Result<f64> {
    ln_whittaker_w_with(lam, mu, z, &EvalPolicy::default())
}

/// Whittaker function `W_{λ,μ}(z)` for `μ - λ > -1/2`, `z > 0`.
pub fn whittaker_w(lam: f64, mu: f64, z: f64) -> Result<f64> {
    whittaker_w_with(lam, mu, z, &EvalPolicy::default())
}

pub fn whittaker_w_with(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    ln_whittaker_w_with(lam, mu, z, policy).map(f64::exp)
}

/// `W` forced through the integral representation.
pub fn whittaker_w_quadrature(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    check_args(lam, mu, z)?;
    ln_w_quadrature(lam, mu, z, policy).map(f64::exp)
}

/// `W` forced through the large-`z` expansion; errors when it cannot reach
/// `rel_tol`.
pub fn whittaker_w_asymptotic(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    check_args(lam, mu, z)?;
    ln_w_asymptotic(lam, mu, z, policy).map(f64::exp)
}

/// `M_{λ,μ}(z) = z^{μ+1/2} e^{-z/2} Φ(μ-λ+1/2, 2μ+1; z)`.
pub fn whittaker_m(lam: f64, mu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("whittaker_m", format!("argument must be positive and finite, got {z}")));
    }
    let phi = kummer_phi_with(mu - lam + 0.5, 2.0 * mu + 1.0, z, &EvalPolicy::default())?;
    Ok(((mu + 0.5) * z.ln() - 0.5 * z).exp() * phi)
}

/// `W` through the `M_{λ,±μ}` connection formula. Undefined when `2μ` is an
/// integer; loses accuracy to cancellation as `z` grows.
pub fn whittaker_w_via_m(lam: f64, mu: f64, z: f64) -> Result<f64> {
    let two_mu = 2.0 * mu;
    if (two_mu - two_mu.round()).abs() < 1e-12 {
        return Err(Error::domain("whittaker_w_via_m", format!("2mu = {two_mu} is an integer")));
    }
    let c1 = gamma(-two_mu)? * recip_gamma(0.5 - mu - lam)?;
    let c2 = gamma(two_mu)? * recip_gamma(0.5 + mu - lam)?;
    let m_plus = if c1 == 0.0 { 0.0 } else { whittaker_m(lam, mu, z)? };
    let m_minus = if c2 == 0.0 { 0.0 } else { whittaker_m(lam, -mu, z)? };
    Ok(c1 * m_plus + c2 * m_minus)
}
