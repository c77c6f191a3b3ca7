//! Monte Carlo moments with delete-one jackknife standard errors.

use serde::{Deserialize, Serialize};

use crate::distribution::MomentSet;
use crate::error::{Error, Result};
use crate::params::BgParams;
use crate::simfit::{gamma_variate, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McMoments {
    pub estimate: MomentSet,
    pub std_error: MomentSet,
}

/// Mean, variance, skewness and kurtosis from centred power sums.
fn stats(shift: f64, n: f64, t: [f64; 4]) -> [f64; 4] {
    let m = t[0] / n;
    let e2 = t[1] / n;
    let e3 = t[2] / n;
    let e4 = t[3] / n;
    let c2 = e2 - m * m;
    let c3 = e3 - 3.0 * m * e2 + 2.0 * m * m * m;
    let c4 = e4 - 4.0 * m * e3 + 6.0 * m * m * e2 - 3.0 * m.powi(4);
    [shift + m, c2, c3 / c2.powf(1.5), c4 / (c2 * c2)]
}

/// Sample moments of `n` draws of `X - Y`.
pub fn mc_moment_oracle(p: &BgParams, n: usize, rng: &mut RngState) -> Result<McMoments> {
    if n < 10_000 {
        return Err(Error::oracle("mc_moment_oracle", format!("need at least 10^4 draws, got {n}")));
    }
    let data: Vec<f64> = (0..n)
        .map(|_| {
            gamma_variate(p.alpha_plus(), p.lambda_plus(), rng)
                .and_then(|x| Ok(x - gamma_variate(p.alpha_minus(), p.lambda_minus(), rng)?))
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let shift = data.iter().sum::<f64>() / nf;
    let mut s = [0.0; 4];
    for &x in &data {
        let y = x - shift;
        let y2 = y * y;
        s[0] += y;
        s[1] += y2;
        s[2] += y2 * y;
        s[3] += y2 * y2;
    }
    let full = stats(shift, nf, s);
    let mut acc = [0.0; 4];
    let mut acc2 = [0.0; 4];
    for &x in &data {
        let y = x - shift;
        let y2 = y * y;
        let t = [s[0] - y, s[1] - y2, s[2] - y2 * y, s[3] - y2 * y2];
        let th = stats(shift, nf - 1.0, t);
        for k in 0..4 {
            let d = th[k] - full[k];
            acc[k] += d;
            acc2[k] += d * d;
        }
    }
    let se: Vec<f64> = (0..4).map(|k| (((nf - 1.0) / nf) * (acc2[k] - acc[k] * acc[k] / nf)).max(0.0).sqrt()).collect();
    let set = |v: &[f64]| MomentSet { mean: v[0], variance: v[1], skewness: v[2], kurtosis: v[3] };
    Ok(McMoments { estimate: set(&full), std_error: set(&se) })
}
