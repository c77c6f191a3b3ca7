//! Double-exponential quadrature carried in log space, so integrands with
//! endpoint singularities or tiny/huge prefactors never under- or overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_LEVEL: u32 = 12;
const T_MAX: f64 = 12.0;
/// Terms this far below the running maximum (in log units) end a sweep.
const NEGLIGIBLE: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

/// A point of `(0, 1)` with both logs computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct UnitNode {
    pub w: f64,
    pub ln_w: f64,
    pub ln_1mw: f64,
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln(h Σ_k exp(g(k h)))`, sweeping outwards from `t = 0` until terms are negligible.
fn ln_trapezoid<G: Fn(f64) -> Option<f64>>(g: &G, h: f64) -> Result<f64> {
    let mut terms = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    for dir in [1.0, -1.0] {
        let start = if dir > 0.0 { 0 } else { 1 };
        let mut k = start;
        loop {
            let t = dir * k as f64 * h;
            if t.abs() > T_MAX {
                break;
            }
            let Some(v) = g(t) else { break };
            if v.is_nan() {
                return Err(Error::oracle("tanh_sinh", format!("integrand is NaN at t = {t}")));
            }
            peak = peak.max(v);
            terms.push(v);
            if v < peak - NEGLIGIBLE && t.abs() > 1.0 {
                break;
            }
            k += 1;
        }
    }
    Ok(h.ln() + log_sum_exp(&terms))
}

fn refine<G: Fn(f64) -> Option<f64>>(g: G, tol: Tolerance, what: &str) -> Result<f64> {
    let mut prev = ln_trapezoid(&g, 0.5)?;
    for level in 2..=MAX_LEVEL {
        let cur = ln_trapezoid(&g, 0.5f64.powi(level as i32))?;
        let (a, b) = (prev.exp(), cur.exp());
        let diff = if a == b { 0.0 } else { (a - b).abs() };
        if level >= 4 && (diff <= tol.abs || diff <= tol.rel * b) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::oracle("tanh_sinh", format!("{what} did not converge by level {MAX_LEVEL}")))
}

/// `ln ∫_0^1 exp(ln_f(node)) dw` by the tanh-sinh rule.
pub fn ln_integral_unit<F: Fn(UnitNode) -> f64>(ln_f: F, tol: Tolerance) -> Result<f64> {
    refine(
        |t: f64| {
            let u = 0.5 * PI * t.sinh();
            let ln_w = -softplus(-2.0 * u);
            let ln_1mw = -softplus(2.0 * u);
            let node = UnitNode { w: ln_w.exp(), ln_w, ln_1mw };
            Some(ln_f(node) + ln_w + ln_1mw + (PI * t.cosh()).ln())
        },
        tol,
        "finite-interval integral",
    )
}

/// `ln ∫_0^∞ exp(ln_f(y, ln y)) dy` by the exp-sinh rule, nodes centred on `scale`.
pub fn ln_integral_half_line<F: Fn(f64, f64) -> f64>(ln_f: F, scale: f64, tol: Tolerance) -> Result<f64> {
    let ln_scale = scale.ln();
    refine(
        |t: f64| {
            let u = 0.5 * PI * t.sinh();
            let ln_y = ln_scale + u;
            if ln_y > 700.0 {
                return None;
            }
            Some(ln_f(ln_y.exp(), ln_y) + ln_y + (0.5 * PI * t.cosh()).ln())
        },
        tol,
        "half-line integral",
    )
}
