//! Distribution-level quantities: characteristic function, Lévy data,
//! moments, closure under scaling and convolution, CDF, quantile, and the
//! Variance Gamma bridge for equal shapes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::SHAPE_TOL;
use crate::error::{Error, Result};
use crate::params::BgParams;
use crate::quad::integrate_with_breaks;
use crate::specfun::{ln_bessel_k, ln_gamma_unchecked, reg_incomplete_gamma_pair, EvalPolicy};

/// `φ(z) = (λ⁺/(λ⁺ - iz))^{α⁺} (λ⁻/(λ⁻ + iz))^{α⁻}` with principal-branch powers.
pub fn char_fn(p: &BgParams, z: f64) -> Complex64 {
    let side = |alpha: f64, lambda: f64, w: Complex64| -> Complex64 {
        // (λ / w)^α = exp(α (ln λ - Ln w)), Ln principal
        (alpha * (Complex64::new(lambda.ln(), 0.0) - w.ln())).exp()
    };
    side(p.alpha_plus(), p.lambda_plus(), Complex64::new(p.lambda_plus(), -z))
        * side(p.alpha_minus(), p.lambda_minus(), Complex64::new(p.lambda_minus(), z))
}

fn nonzero(func: &'static str, x: f64) -> Result<()> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::domain(func, format!("x must be finite and nonzero, got {x}")));
    }
    Ok(())
}

/// Lévy density `(α/|x|) e^{-λ|x|}` with the side's parameters.
pub fn levy_density(p: &BgParams, x: f64) -> Result<f64> {
    nonzero("levy_density", x)?;
    Ok(k_fn(p, x)? / x)
}

/// `k(x) = α⁺ e^{-λ⁺x}` for `x > 0`, `-α⁻ e^{-λ⁻|x|}` for `x < 0`.
pub fn k_fn(p: &BgParams, x: f64) -> Result<f64> {
    nonzero("k_fn", x)?;
    Ok(if x > 0.0 {
        p.alpha_plus() * (-p.lambda_plus() * x).exp()
    } else {
        -p.alpha_minus() * (p.lambda_minus() * x).exp()
    })
}

/// Mean, variance, skewness and (non-excess) kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

pub fn moments(p: &BgParams) -> MomentSet {
    let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
    let variance = ap / (lp * lp) + am / (lm * lm);
    MomentSet {
        mean: ap / lp - am / lm,
        variance,
        skewness: 2.0 * (ap / lp.powi(3) - am / lm.powi(3)) / variance.powf(1.5),
        kurtosis: 3.0 + 6.0 * (ap / lp.powi(4) + am / lm.powi(4)) / (variance * variance),
    }
}

/// Law of `c X`: rates divide by `c`.
pub fn scale(p: &BgParams, c: f64) -> Result<BgParams> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain("scale", format!("factor must be positive and finite, got {c}")));
    }
    BgParams::new(p.alpha_plus(), p.lambda_plus() / c, p.alpha_minus(), p.lambda_minus() / c)
}

fn same_rate(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Law of the sum of two independent bilateral Gamma variables with shared rates.
pub fn convolve(p1: &BgParams, p2: &BgParams) -> Result<BgParams> {
    if !(same_rate(p1.lambda_plus(), p2.lambda_plus()) && same_rate(p1.lambda_minus(), p2.lambda_minus())) {
        return Err(Error::contract("convolve", format!("rates differ: ({p1}) vs ({p2})")));
    }
    BgParams::new(
        p1.alpha_plus() + p2.alpha_plus(),
        p1.lambda_plus(),
        p1.alpha_minus() + p2.alpha_minus(),
        p1.lambda_minus(),
    )
}

/// Upper `1 - 1e-14` quantile of `Gamma(shape, rate)`, by bisection on `Q`.
fn gamma_upper_cut(shape: f64, rate: f64, policy: &EvalPolicy) -> Result<f64> {
    let target = 1e-14;
    let mut hi = shape + 10.0;
    while reg_incomplete_gamma_pair(shape, hi, policy)?.1 > target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reg_incomplete_gamma_pair(shape, mid, policy)?.1 > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(hi / rate)
}

/// `∫_0^∞ Q(a, l (d + y)) g(y) dy` with `g` the `Gamma(b, m)` density and `d >= 0`,
/// i.e. `P(X > d + Y)` for independent `X ~ Gamma(a, l)`, `Y ~ Gamma(b, m)`.
fn exceedance(a: f64, l: f64, b: f64, m: f64, d: f64, policy: &EvalPolicy) -> Result<f64> {
    let y_max = gamma_upper_cut(b, m, policy)?;
    let mut opts = policy.quad_options();
    opts.abs_tol = 1e-16;
    let q = |y: f64| reg_incomplete_gamma_pair(a, l * (d + y), policy).map(|v| v.1);
    let mut failure = None;
    let value = if b < 1.0 {
        // y = w^{1/b} absorbs y^{b-1}: g(y) dy = m^b / Γ(b+1) e^{-m y} dw
        let ln_c = b * m.ln() - ln_gamma_unchecked(b + 1.0);
        let w_max = y_max.powf(b);
        let w_mode = (b / m).powf(b).min(0.5 * w_max);
        integrate_with_breaks(
            |w: f64| {
                let y = w.powf(1.0 / b);
                match q(y) {
                    Ok(v) => v * (ln_c - m * y).exp(),
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            &[0.0, w_mode, w_max],
            &opts,
        )?
        .value
    } else {
        let ln_c = b * m.ln() - ln_gamma_unchecked(b);
        let y_mode = ((b - 1.0) / m).max(0.5 / m).min(0.5 * y_max);
        integrate_with_breaks(
            |y: f64| {
                if y == 0.0 {
                    return if b == 1.0 { q(0.0).map(|v| v * ln_c.exp()).unwrap_or(0.0) } else { 0.0 };
                }
                match q(y) {
                    Ok(v) => v * (ln_c + (b - 1.0) * y.ln() - m * y).exp(),
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            &[0.0, y_mode, y_max],
            &opts,
        )?
        .value
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(value.clamp(0.0, 1.0))
}

pub fn cdf_with(p: &BgParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("cdf", "x is NaN"));
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
    if x >= 0.0 {
        Ok(1.0 - exceedance(ap, lp, am, lm, x, policy)?)
    } else {
        // P(X - Y <= x) = P(Y > |x| + X)
        exceedance(am, lm, ap, lp, -x, policy)
    }
}

/// Distribution function `F(x) = P(X - Y <= x)`, integrating the Gamma
/// distribution function of one side against the density of the other.
pub fn cdf(p: &BgParams, x: f64) -> Result<f64> {
    cdf_with(p, x, &EvalPolicy::default())
}

/// Brent's method for a bracketed root, stopping once `|f| <= ftol`.
pub(crate) fn brent<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<f64> {
    if fa.abs() <= ftol {
        return Ok(a);
    }
    if fb.abs() <= ftol {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if fb.abs() <= ftol || m.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut pp, mut qq);
            if a == c {
                pp = 2.0 * m * s;
                qq = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                pp = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0));
                qq = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if pp > 0.0 {
                qq = -qq;
            } else {
                pp = -pp;
            }
            if 2.0 * pp < (3.0 * m * qq - (tol * qq).abs()).min((e * qq).abs()) {
                e = d;
                d = pp / qq;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::evaluation("brent", format!("no convergence after {max_iter} iterations")))
}

pub fn quantile_with(p: &BgParams, u: f64, policy: &EvalPolicy) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain("quantile", format!("probability must lie in (0, 1), got {u}")));
    }
    let m = moments(p);
    let sd = m.variance.sqrt();
    let g = |x: f64| cdf_with(p, x, policy).map(|v| v - u);
    let mut lo = m.mean - 20.0 * sd;
    let mut hi = m.mean + 20.0 * sd;
    let mut flo = g(lo)?;
    let mut fhi = g(hi)?;
    let mut doublings = 0;
    while flo > 0.0 || fhi < 0.0 {
        if doublings == 60 {
            return Err(Error::evaluation("quantile", format!("no bracket found for u = {u}")));
        }
        let w = hi - lo;
        if flo > 0.0 {
            lo -= w;
            flo = g(lo)?;
        }
        if fhi < 0.0 {
            hi += w;
            fhi = g(hi)?;
        }
        doublings += 1;
    }
    brent(g, lo, hi, flo, fhi, 1e-10, 500)
}

/// Inverse of [`cdf`] to `|F(x) - u| <= 1e-10`.
pub fn quantile(p: &BgParams, u: f64) -> Result<f64> {
    quantile_with(p, u, &EvalPolicy::default())
}

/// Variance Gamma parameters `(μ, σ², ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VgParams {
    pub mu: f64,
    pub sigma_sq: f64,
    pub nu: f64,
}

impl VgParams {
    pub fn new(mu: f64, sigma_sq: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma_sq > 0.0 && sigma_sq.is_finite() && nu > 0.0 && nu.is_finite()) {
            return Err(Error::domain(
                "VgParams::new",
                format!("need finite mu and positive sigma_sq, nu; got ({mu}, {sigma_sq}, {nu})"),
            ));
        }
        Ok(VgParams { mu, sigma_sq, nu })
    }
}

/// `(α/λ⁺ - α/λ⁻, 2α/(λ⁺λ⁻), 1/α)`; only defined for equal shapes.
pub fn vg_params(p: &BgParams) -> Result<VgParams> {
    let a = p.alpha_plus();
    if (a - p.alpha_minus()).abs() > SHAPE_TOL {
        return Err(Error::contract(
            "vg_params",
            format!("a Variance Gamma law needs alpha_plus = alpha_minus, got {a} and {}", p.alpha_minus()),
        ));
    }
    VgParams::new(a / p.lambda_plus() - a / p.lambda_minus(), 2.0 * a / (p.lambda_plus() * p.lambda_minus()), 1.0 / a)
}

/// Variance Gamma density at `x ≠ 0`.
pub fn vg_pdf(vg: &VgParams, x: f64) -> Result<f64> {
    nonzero("vg_pdf", x)?;
    let VgParams { mu, sigma_sq, nu } = *vg;
    let sigma = sigma_sq.sqrt();
    let inv_nu = 1.0 / nu;
    let w = 2.0 * sigma_sq / nu + mu * mu;
    let ln_v = std::f64::consts::LN_2 + mu * x / sigma_sq
        - inv_nu * nu.ln()
        - 0.5 * (2.0 * std::f64::consts::PI).ln()
        - sigma.ln()
        - ln_gamma_unchecked(inv_nu)
        + (0.5 * inv_nu - 0.25) * (x * x / w).ln()
        + ln_bessel_k(inv_nu - 0.5, (x * x * w).sqrt() / sigma_sq)?;
    Ok(ln_v.exp())
}
