//! Reference densities computed straight from the convolution integral and
//! from Fourier inversion of the characteristic function.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::params::BgParams;
use crate::specfun::ln_gamma;

use super::tanh_sinh::{ln_integral_half_line, ln_integral_unit, Tolerance};

fn ln_norm(p: &BgParams) -> Result<f64> {
    let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
    Ok(ap * lp.ln() + am * lm.ln() - ln_gamma(ap)? - ln_gamma(am)?)
}

/// `ln(a + b)` for `a, b > 0` given `ln a`, `ln b`.
fn ln_add(ln_a: f64, ln_b: f64) -> f64 {
    let (hi, lo) = if ln_a > ln_b { (ln_a, ln_b) } else { (ln_b, ln_a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Density at `x > 0` from
/// `f(x) = C e^{-λ⁺x} ∫_0^∞ v^{α⁻-1} (x+v)^{α⁺-1} e^{-(λ⁺+λ⁻)v} dv`,
/// split at `v = x`, absolute tolerance `1e-12`.
pub fn pdf_quadrature_oracle(p: &BgParams, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::oracle("pdf_quadrature_oracle", format!("x must be positive and finite, got {x}")));
    }
    let (ap, lp, am) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus());
    let s = p.lambda_plus() + p.lambda_minus();
    let ln_c = ln_norm(p)? - lp * x;
    let ln_x = x.ln();
    let tol = Tolerance { abs: 1e-12 * (-ln_c).exp(), rel: 1e-13 };

    // v = x w on [0, x]
    let inner = ln_integral_unit(
        |n| ln_x + (am - 1.0) * (ln_x + n.ln_w) + (ap - 1.0) * (ln_x + n.w.ln_1p()) - s * x * n.w,
        tol,
    )?;
    // v = x + y on [x, ∞)
    let outer = ln_integral_half_line(
        |y, ln_y| {
            let ln_v = ln_add(ln_x, ln_y);
            let ln_xv = ln_add(std::f64::consts::LN_2 + ln_x, ln_y);
            (am - 1.0) * ln_v + (ap - 1.0) * ln_xv - s * (x + y)
        },
        1.0 / s,
        tol,
    )?;
    let v = (ln_c + ln_add(inner, outer)).exp();
    if !v.is_finite() {
        return Err(Error::oracle("pdf_quadrature_oracle", format!("non-finite result at x = {x}")));
    }
    Ok(v)
}

/// `φ(u) = (λ⁺/(λ⁺ - iu))^{α⁺} (λ⁻/(λ⁻ + iu))^{α⁻}`.
fn phi(p: &BgParams, u: f64) -> Complex64 {
    let i = Complex64::i();
    let a = -(Complex64::new(1.0, 0.0) - i * (u / p.lambda_plus())).ln() * p.alpha_plus();
    let b = -(Complex64::new(1.0, 0.0) + i * (u / p.lambda_minus())).ln() * p.alpha_minus();
    (a + b).exp()
}

/// `|mean| + 40 sd`.
pub fn default_fft_halfwidth(p: &BgParams) -> f64 {
    let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
    let mean = ap / lp - am / lm;
    let sd = (ap / (lp * lp) + am / (lm * lm)).sqrt();
    mean.abs() + 40.0 * sd
}

/// Density on `x_j = -L + 2L j / N`, `j = 0..N`, by trapezoidal inversion of
/// `φ` over `|u| <= π N / (2L)`.
pub fn pdf_fft_oracle(p: &BgParams, grid_size: usize, domain_halfwidth: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    const FUNC: &str = "pdf_fft_oracle";
    if p.alpha_sum() <= 1.0 {
        return Err(Error::oracle(FUNC, format!("characteristic function not integrable (alpha sum {})", p.alpha_sum())));
    }
    if grid_size < 1 << 12 || !grid_size.is_power_of_two() {
        return Err(Error::oracle(FUNC, format!("grid size must be a power of two >= 4096, got {grid_size}")));
    }
    if !(domain_halfwidth > 0.0 && domain_halfwidth.is_finite()) {
        return Err(Error::oracle(FUNC, format!("half-width must be positive, got {domain_halfwidth}")));
    }
    let n = grid_size;
    let l = domain_halfwidth;
    let du = std::f64::consts::PI / l;
    let dx = 2.0 * l / n as f64;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let v = if k == 0 {
                // Both ends of the symmetric range, half weight each.
                Complex64::new(phi(p, (n / 2) as f64 * du).re, 0.0)
            } else {
                phi(p, (k as f64 - (n / 2) as f64) * du)
            };
            v * sign
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let c = du / (2.0 * std::f64::consts::PI);
    let xs = (0..n).map(|j| -l + j as f64 * dx).collect();
    let fs = buf
        .iter()
        .enumerate()
        .map(|(j, z)| if j % 2 == 0 { c * z.re } else { -c * z.re })
        .collect();
    Ok((xs, fs))
}
