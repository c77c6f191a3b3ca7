use crate::error::{Error, Result};

use super::EvalPolicy;

/// Confluent hypergeometric function `Φ(α, γ; z) = Σ (α)_k / (γ)_k z^k / k!`.
pub fn kummer_phi(alpha: f64, gamma_p: f64, z: f64) -> Result<f64> {
    kummer_phi_with(alpha, gamma_p, z, &EvalPolicy::default())
}

/// [`kummer_phi`] under an explicit policy. The sum stops once a term drops
/// below `rel_tol` relative to the partial sum past the largest term.
///
/// Large negative `z` suffers cancellation; callers stay at moderate `|z|`.
pub fn kummer_phi_with(alpha: f64, gamma_p: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    const FUNC: &str = "kummer_phi";
    if !(alpha.is_finite() && gamma_p.is_finite() && z.is_finite()) {
        return Err(Error::domain(FUNC, "arguments must be finite"));
    }
    if gamma_p <= 0.0 && gamma_p == gamma_p.floor() {
        return Err(Error::domain(FUNC, format!("gamma must not be a non-positive integer, got {gamma_p}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..policy.max_terms {
        let kf = k as f64;
        term *= (alpha + kf) / (gamma_p + kf) * z / (kf + 1.0);
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if !sum.is_finite() {
            return Err(Error::evaluation(FUNC, format!("overflow after {} terms", k + 1)));
        }
        // The ratio settles to z / k; only trust the test once it is contracting.
        let past_peak = kf + 1.0 > z.abs() && (alpha + kf + 1.0).abs() < (gamma_p + kf + 1.0).abs() * 2.0;
        if past_peak && term.abs() <= policy.rel_tol * sum.abs() * 1e-2 {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNotConverged { func: FUNC, terms: policy.max_terms, partial_sum: sum, last_term: term })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rational_series(alpha: (i64, i64), gamma: (i64, i64), z: (i64, i64), terms: usize) -> f64 {
        let r = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
        let (a, g, z) = (r(alpha), r(gamma), r(z));
        let one = r((1, 1));
        let mut term = one.clone();
        let mut sum = one.clone();
        for k in 0..terms {
            let kr = r((k as i64, 1));
            term = term * (&a + &kr) / (&g + &kr) * &z / (&kr + &one);
            sum += &term;
        }
        // Reduce to f64 through a scaled integer quotient.
        let scale = BigInt::from(10).pow(30);
        let scaled = (sum * BigRational::from_integer(scale.clone())).to_integer();
        scaled.to_string().parse::<f64>().unwrap() / 1e30
    }

    #[test]
    fn leading_term() {
        assert_eq!(kummer_phi(0.3, 1.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn collapses_to_exponential() {
        for i in -50..=50 {
            let z = i as f64 * 0.1;
            let v = kummer_phi(1.0, 1.0, z).unwrap();
            assert!((v / z.exp() - 1.0).abs() < 1e-10, "z={z}");
        }
    }

    #[test]
    fn matches_exact_rational_series() {
        let oracle = rational_series((1, 2), (3, 2), (3, 10), 200);
        let v = kummer_phi(0.5, 1.5, 0.3).unwrap();
        assert!((v - oracle).abs() < 1e-15 * oracle, "{v} vs {oracle}");
    }

    #[test]
    fn terminating_polynomial() {
        // Φ(-2, γ; z) = 1 - 2z/γ + z²/(γ(γ+1))
        let (g, z) = (2.5, 3.0);
        let exact = 1.0 - 2.0 * z / g + z * z / (g * (g + 1.0));
        assert!((kummer_phi(-2.0, g, z).unwrap() - exact).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(kummer_phi(1.0, -2.0, 1.0).is_err());
        assert!(kummer_phi(1.0, 0.0, 1.0).is_err());
        let tight = EvalPolicy { max_terms: 100, ..EvalPolicy::default() };
        match kummer_phi_with(1.0, 1.0, 400.0, &tight) {
            Err(Error::SeriesNotConverged { terms, partial_sum, .. }) => {
                assert_eq!(terms, 100);
                assert!(partial_sum > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
