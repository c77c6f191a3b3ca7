//! The bilateral Gamma density and its first derivative.
//!
//! For `x > 0` the density is evaluated by one of four representations:
//!
//! * a polynomial times an exponential when `alpha_plus` is a positive integer,
//! * a Bessel `K` form when the two shapes are equal,
//! * the general Whittaker `W` form,
//! * the convolution integral itself, used when the chosen form fails.
//!
//! Negative arguments are mapped to the positive axis through
//! `f(x; a+, l+, a-, l-) = f(-x; a-, l-, a+, l+)`, so both halves share the same
//! code path. Prefactors are assembled in log space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::BgParams;
use crate::quad::integrate_with_breaks;
use crate::specfun::{ln_bessel_k, ln_gamma_unchecked, ln_shifted_gamma_integral, ln_whittaker_w_with, EvalPolicy};

/// Absolute tolerance for treating a shape as an integer or two shapes as equal.
pub const SHAPE_TOL: f64 = 1e-12;

/// Largest integer shape handled by the polynomial form.
const MAX_INTEGER_SHAPE: u32 = 200;

/// Representation used for a density evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DensityBranch {
    IntegerShape,
    EqualAlphaBessel,
    WhittakerGeneral,
    QuadratureFallback,
}

pub(crate) fn positive_integer(a: f64) -> Option<u32> {
    let r = a.round();
    ((a - r).abs() <= SHAPE_TOL && r >= 1.0).then_some(r as u32)
}

fn equal_shapes(p: &BgParams) -> bool {
    (p.alpha_plus() - p.alpha_minus()).abs() <= SHAPE_TOL
}

/// Parameters oriented so that the evaluation point is positive.
fn orient(p: &BgParams, x: f64) -> (BgParams, f64) {
    if x < 0.0 {
        (p.reflect(), -x)
    } else {
        (*p, x)
    }
}

/// `α⁺ ln λ⁺ + α⁻ ln λ⁻`.
fn ln_rate_powers(p: &BgParams) -> f64 {
    p.alpha_plus() * p.lambda_plus().ln() + p.alpha_minus() * p.lambda_minus().ln()
}

/// Branch the dispatcher picks first for `x`.
pub fn branch_for(p: &BgParams, x: f64) -> DensityBranch {
    let (q, _) = orient(p, x);
    match positive_integer(q.alpha_plus()) {
        Some(n) if n <= MAX_INTEGER_SHAPE => DensityBranch::IntegerShape,
        _ if equal_shapes(&q) => DensityBranch::EqualAlphaBessel,
        _ => DensityBranch::WhittakerGeneral,
    }
}

/// `f(0)` when `α⁺ + α⁻ > 1`: the convolution integral at `x = 0` is a Gamma
/// integral, giving `λ⁺^{α⁺} λ⁻^{α⁻} Γ(S-1) / ((λ⁺+λ⁻)^{S-1} Γ(α⁺) Γ(α⁻))`.
fn ln_pdf_at_zero(p: &BgParams) -> Result<f64> {
    let s = p.alpha_sum();
    if s <= 1.0 {
        return Err(Error::Pole { sum: s });
    }
    Ok(ln_rate_powers(p) + ln_gamma_unchecked(s - 1.0)
        - (s - 1.0) * p.lambda_sum().ln()
        - ln_gamma_unchecked(p.alpha_plus())
        - ln_gamma_unchecked(p.alpha_minus()))
}

fn ln_integer_shape(p: &BgParams, n: u32, x: f64) -> f64 {
    let s = p.lambda_sum();
    let am = p.alpha_minus();
    let m = n - 1;
    // ln(a_k x^k), a_k = C(m, k) s^{-(m-k)} Π_{l=0}^{m-1-k} (α⁻ + l), built from k = m downwards.
    let mut terms = Vec::with_capacity(n as usize);
    let mut ln_binom = 0.0;
    let mut ln_prod = 0.0;
    let lx = x.ln();
    let ls = s.ln();
    for j in 0..=m {
        let k = m - j;
        if j > 0 {
            // C(m, k) from C(m, k + 1); product gains the factor α⁻ + (j - 1).
            ln_binom += ((k + 1) as f64).ln() - ((m - k) as f64).ln();
            ln_prod += (am + (j - 1) as f64).ln();
        }
        let lx_k = if k == 0 { 0.0 } else { k as f64 * lx };
        terms.push(ln_binom - j as f64 * ls + ln_prod + lx_k);
    }
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let poly = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    ln_rate_powers(p) - am * ls - ln_gamma_unchecked(n as f64) + poly - p.lambda_plus() * x
}

fn ln_equal_alpha(p: &BgParams, x: f64) -> Result<f64> {
    let a = p.alpha_plus();
    let s = p.lambda_sum();
    let ax = x.abs();
    let z = 0.5 * ax * s;
    Ok(-ln_gamma_unchecked(a) + a * (p.lambda_plus() * p.lambda_minus() / s).ln() + (a - 1.0) * ax.ln()
        - 0.5 * x * (p.lambda_plus() - p.lambda_minus())
        + 0.5 * (ax * s / std::f64::consts::PI).ln()
        + ln_bessel_k(a - 0.5, z)?)
}

fn ln_whittaker_form(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    let (ap, am) = (p.alpha_plus(), p.alpha_minus());
    let s = p.lambda_sum();
    let half_sum = 0.5 * (ap + am);
    let ln_w = ln_whittaker_w_with(0.5 * (ap - am), 0.5 * (ap + am - 1.0), x * s, policy)?;
    Ok(ln_rate_powers(p) - half_sum * s.ln() - ln_gamma_unchecked(ap) + (half_sum - 1.0) * x.ln()
        - 0.5 * x * (p.lambda_plus() - p.lambda_minus())
        + ln_w)
}

/// Direct quadrature of the convolution integral in `u = ln v`, with the
/// stretch below `ε = e^{u_lo}` added in closed form.
fn ln_convolution(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    let (ap, am) = (p.alpha_plus(), p.alpha_minus());
    let s = p.lambda_sum();
    let kink = (x * s).ln();
    let u_lo = kink.min(0.0) - 460.0;
    let u_hi = (800.0 + 4.0 * (ap + am)).ln();
    let g = |u: f64| am * u + (ap - 1.0) * (x + u.exp() / s).ln() - u.exp();
    let grid: Vec<f64> = (0..=256).map(|i| u_lo + (u_hi - u_lo) * i as f64 / 256.0).collect();
    let shift = grid.iter().map(|&u| g(u)).chain([g(kink.clamp(u_lo, u_hi))]).fold(f64::NEG_INFINITY, f64::max);
    let mut breaks = vec![u_lo];
    for b in [kink, 0.0, (ap + am).ln()] {
        if b > u_lo + 1.0 && b < u_hi - 1.0 {
            breaks.push(b);
        }
    }
    breaks.push(u_hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut opts = policy.quad_options();
    opts.max_subdivisions = 20_000;
    let body = integrate_with_breaks(|u| (g(u) - shift).exp(), &breaks, &opts)?;
    // ∫_0^ε v^{α⁻-1} (x + v/s)^{α⁺-1} e^{-v} dv ≈ ε^{α⁻} x^{α⁺-1} / α⁻ for ε ≪ min(1, xs)
    let ln_head = am * u_lo + (ap - 1.0) * x.ln() - am.ln();
    let ln_body = shift + body.value.ln();
    let hi = ln_body.max(ln_head);
    let ln_int = hi + ((ln_body - hi).exp() + (ln_head - hi).exp()).ln();
    if !ln_int.is_finite() {
        return Err(Error::evaluation("pdf", format!("convolution integral not finite at x = {x}")));
    }
    Ok(ln_rate_powers(p) - am * s.ln() - ln_gamma_unchecked(ap) - ln_gamma_unchecked(am) - p.lambda_plus() * x
        + ln_int)
}

/// `ln f(x)` for `x > 0` through a named branch.
fn ln_branch_positive(p: &BgParams, x: f64, branch: DensityBranch, policy: &EvalPolicy) -> Result<f64> {
    match branch {
        DensityBranch::IntegerShape => match positive_integer(p.alpha_plus()) {
            Some(n) if n <= MAX_INTEGER_SHAPE => Ok(ln_integer_shape(p, n, x)),
            _ => Err(Error::contract("pdf_integer_shape", format!("alpha_plus = {} is not a positive integer", p.alpha_plus()))),
        },
        DensityBranch::EqualAlphaBessel => {
            if !equal_shapes(p) {
                return Err(Error::contract(
                    "pdf_equal_alpha",
                    format!("requires alpha_plus = alpha_minus, got {} and {}", p.alpha_plus(), p.alpha_minus()),
                ));
            }
            ln_equal_alpha(p, x)
        }
        DensityBranch::WhittakerGeneral => ln_whittaker_form(p, x, policy),
        DensityBranch::QuadratureFallback => ln_convolution(p, x, policy),
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("pdf", format!("x must be finite, got {x}")))
    }
}

/// `ln f(x)` with the branch that produced it.
pub fn ln_pdf_traced(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<(f64, Option<DensityBranch>)> {
    check_x(x)?;
    if x == 0.0 {
        return ln_pdf_at_zero(p).map(|v| (v, None));
    }
    let branch = branch_for(p, x);
    let (q, y) = orient(p, x);
    match ln_branch_positive(&q, y, branch, policy) {
        Ok(v) => Ok((v, Some(branch))),
        Err(e) if e.is_numerical() => {
            ln_branch_positive(&q, y, DensityBranch::QuadratureFallback, policy)
                .map(|v| (v, Some(DensityBranch::QuadratureFallback)))
        }
        Err(e) => Err(e),
    }
}

pub fn ln_pdf_with(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    ln_pdf_traced(p, x, policy).map(|(v, _)| v)
}

/// `ln f(x)`; stays finite far into the tails where `f` underflows.
pub fn ln_pdf(p: &BgParams, x: f64) -> Result<f64> {
    ln_pdf_with(p, x, &EvalPolicy::default())
}

pub fn pdf_with(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    ln_pdf_with(p, x, policy).map(f64::exp)
}

/// Density `f(x)`. At `x = 0` this is the finite limit when
/// `α⁺ + α⁻ > 1` and a [`Error::Pole`] otherwise.
pub fn pdf(p: &BgParams, x: f64) -> Result<f64> {
    pdf_with(p, x, &EvalPolicy::default())
}

/// Density through one specific representation, for `x ≠ 0`. Errors with a
/// contract violation when the branch does not apply to the oriented
/// parameters.
pub fn pdf_branch(p: &BgParams, x: f64, branch: DensityBranch, policy: &EvalPolicy) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Err(Error::domain("pdf_branch", "x must be nonzero"));
    }
    let (q, y) = orient(p, x);
    ln_branch_positive(&q, y, branch, policy).map(f64::exp)
}

/// Polynomial-times-exponential form for integer `alpha_plus`, `x > 0`.
pub fn pdf_integer_shape(p: &BgParams, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("pdf_integer_shape", format!("x must be positive, got {x}")));
    }
    ln_branch_positive(p, x, DensityBranch::IntegerShape, &EvalPolicy::default()).map(f64::exp)
}

/// Bessel form for `alpha_plus = alpha_minus`, `x ≠ 0`.
pub fn pdf_equal_alpha(p: &BgParams, x: f64) -> Result<f64> {
    if !(x != 0.0 && x.is_finite()) {
        return Err(Error::domain("pdf_equal_alpha", format!("x must be finite and nonzero, got {x}")));
    }
    if !equal_shapes(p) {
        return Err(Error::contract(
            "pdf_equal_alpha",
            format!("requires alpha_plus = alpha_minus, got {} and {}", p.alpha_plus(), p.alpha_minus()),
        ));
    }
    ln_equal_alpha(p, x).map(f64::exp)
}

/// `f'(x)` for `x > 0` from the differentiated convolution integral:
/// `C e^{-λ⁺x} [ -λ⁺ I(α⁺-1) + (α⁺-1) I(α⁺-2) ]` with
/// `I(q) = ∫ v^{α⁻-1} (x + v/(λ⁺+λ⁻))^q e^{-v} dv`.
fn derivative_positive(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    let (ap, am) = (p.alpha_plus(), p.alpha_minus());
    let s = p.lambda_sum();
    let ln_c = ln_rate_powers(p) - am * s.ln() - ln_gamma_unchecked(ap) - ln_gamma_unchecked(am) - p.lambda_plus() * x;
    let lx = x.ln();
    let j1 = ln_shifted_gamma_integral(am - 1.0, ap - 1.0, x * s, policy)?;
    let first = -p.lambda_plus() * (ln_c + (ap - 1.0) * lx + j1).exp();
    if ap == 1.0 {
        return Ok(first);
    }
    let j2 = ln_shifted_gamma_integral(am - 1.0, ap - 2.0, x * s, policy)?;
    let second = (ap - 1.0) * (ln_c + (ap - 2.0) * lx + j2).exp();
    Ok(first + second)
}

pub fn pdf_derivative_with(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    if !(x != 0.0 && x.is_finite()) {
        return Err(Error::domain("pdf_derivative", format!("x must be finite and nonzero, got {x}")));
    }
    if x > 0.0 {
        derivative_positive(p, x, policy)
    } else {
        derivative_positive(&p.reflect(), -x, policy).map(|v| -v)
    }
}

/// `f'(x)` for `x ≠ 0`.
pub fn pdf_derivative(p: &BgParams, x: f64) -> Result<f64> {
    pdf_derivative_with(p, x, &EvalPolicy::default())
}

/// Closed form of `f'(0)`, defined when both shapes exceed 1.
pub fn f_prime_at_zero(p: &BgParams) -> Result<f64> {
    let (ap, am) = (p.alpha_plus(), p.alpha_minus());
    if !(ap > 1.0 && am > 1.0) {
        return Err(Error::contract("f_prime_at_zero", format!("requires both shapes > 1, got {ap} and {am}")));
    }
    let s = p.lambda_sum();
    let sum = ap + am;
    let ln_mag = ln_rate_powers(p) - (sum - 2.0) * s.ln() + ln_gamma_unchecked(sum - 2.0)
        - ln_gamma_unchecked(ap - 1.0)
        - ln_gamma_unchecked(am);
    let bracket = 1.0 - p.lambda_plus() / s * (sum - 2.0) / (ap - 1.0);
    Ok(ln_mag.exp() * bracket)
}
