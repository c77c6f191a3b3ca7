use crate::error::{Error, Result};

use super::EULER_GAMMA;

/// Exponential integral `E1(x) = ∫_1^∞ e^{-xt} / t dt` for `x > 0`.
///
/// Power series `-γ - ln x - Σ (-1)^n x^n / (n n!)` for `x <= 1`, continued
/// fraction (modified Lentz) above.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    const FUNC: &str = "exp_integral_e1";
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::domain(FUNC, format!("argument must be positive, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..200 {
            let nf = n as f64;
            term *= -x / nf;
            let add = term / nf;
            sum += add;
            if add.abs() < sum.abs() * f64::EPSILON * 0.5 {
                break;
            }
        }
        return Ok(-EULER_GAMMA - x.ln() - sum);
    }
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h * (-x).exp());
        }
    }
    Err(Error::evaluation(FUNC, format!("continued fraction did not converge at x = {x}")))
}
