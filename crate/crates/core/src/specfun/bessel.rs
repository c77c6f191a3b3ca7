//! Modified Bessel function of the third kind `K_ν(x)` for real order and
//! `x > 0`.
//!
//! The order is split as `ν = μ + n` with `|μ| <= 1/2`. `K_μ` and `K_{μ+1}`
//! come from Temme's series for `x < 2` and Steed's continued fraction for
//! `x >= 2`; forward recurrence then reaches `K_ν`, carried in log form so
//! large orders at small arguments do not overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::gamma::{recip_gamma_1p_series, RECIP_GAMMA_1P};

const MAX_ITER: usize = 10_000;

/// `(gam1, gam2)` of Temme's method: `gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)`,
/// `gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64) {
    let m2 = mu * mu;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, &c) in RECIP_GAMMA_1P.iter().enumerate().rev() {
        if k % 2 == 1 {
            odd = odd * m2 + c;
        } else {
            even = even * m2 + c;
        }
    }
    (-odd, even)
}

/// `(K_μ(x), K_{μ+1}(x))` for `|μ| <= 1/2`, `x < 2`.
fn temme(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < f64::EPSILON { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < f64::EPSILON { 1.0 } else { e.sinh() / e };
    let (gam1, gam2) = temme_gammas(mu);
    let gampl = recip_gamma_1p_series(mu);
    let gammi = recip_gamma_1p_series(-mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * p - fi * del;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::evaluation("bessel_k", format!("Temme series did not converge at x = {x}")))
}

/// `(e^x K_μ(x), e^x K_{μ+1}(x))` for `|μ| <= 1/2`, `x >= 2`.
fn steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            let h = a1 * h;
            let k_mu = (PI / (2.0 * x)).sqrt() / s;
            let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
            return Ok((k_mu, k_mu1));
        }
    }
    Err(Error::evaluation("bessel_k", format!("continued fraction did not converge at x = {x}")))
}

fn half_integer_order(nu: f64) -> Option<u32> {
    let n = nu - 0.5;
    (n == n.round() && n <= 60.0).then_some(n as u32)
}

/// `ln(e^x K_ν(x))` for `ν >= 0`.
fn ln_k_scaled(nu: f64, x: f64) -> Result<f64> {
    if let Some(n) = half_integer_order(nu) {
        // K_{n+1/2}(x) = sqrt(π/2x) e^{-x} Σ_k (n+k)! / (k! (n-k)!) (2x)^{-k}
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..n {
            let kf = k as f64;
            let nf = n as f64;
            term *= (nf + kf + 1.0) * (nf - kf) / ((kf + 1.0) * 2.0 * x);
            sum += term;
        }
        if sum.is_finite() {
            return Ok(0.5 * (PI / (2.0 * x)).ln() + sum.ln());
        }
    }
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (k0, k1) = if x < 2.0 {
        let (a, b) = temme(mu, x)?;
        (a * x.exp(), b * x.exp())
    } else {
        steed(mu, x)?
    };
    let mut ln_scale = 0.0;
    let (mut lo, mut hi) = (k0, k1);
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * (2.0 / x) * hi + lo;
        lo = hi;
        hi = next;
        if hi > 1e250 {
            ln_scale += hi.ln();
            lo /= hi;
            hi = 1.0;
        }
    }
    let v = ln_scale + lo.ln();
    if !v.is_finite() {
        return Err(Error::evaluation("bessel_k", format!("non-finite result for nu = {nu}, x = {x}")));
    }
    Ok(v)
}

fn check(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k", format!("order must be finite, got {nu}")));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("bessel_k", format!("argument must be positive and finite, got {x}")));
    }
    Ok(())
}

/// `ln K_ν(x)`.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    Ok(ln_k_scaled(nu.abs(), x)? - x)
}

/// `e^x K_ν(x)`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    let v = ln_k_scaled(nu.abs(), x)?.exp();
    if !v.is_finite() {
        return Err(Error::evaluation("bessel_k", format!("overflow for nu = {nu}, x = {x}")));
    }
    Ok(v)
}

/// `K_ν(x)` for `x > 0`; even in `ν`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let v = ln_bessel_k(nu, x)?.exp();
    if !v.is_finite() {
        return Err(Error::evaluation("bessel_k", format!("overflow for nu = {nu}, x = {x}")));
    }
    Ok(v)
}
