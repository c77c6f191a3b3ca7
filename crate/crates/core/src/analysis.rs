//! Qualitative and asymptotic structure of the density: smoothness index,
//! mode, behaviour at zero, tails, the shape taxonomy, and a residual check
//! of the integro-differential equation satisfied by `f`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::density::{pdf, pdf_derivative, positive_integer, SHAPE_TOL};
use crate::distribution::brent;
use crate::error::{Error, Result};
use crate::params::BgParams;
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::specfun::ln_gamma_unchecked;

/// How `f^(N)` behaves as `x ↓ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum NearZeroClass {
    /// Finite one-sided limit.
    FiniteLimit,
    /// `f^(N)(x) ~ c1 / x^alpha_exp`.
    PowerDivergence { alpha_exp: f64, c1: f64 },
    /// Slowly varying divergence; `f^(N)(x) - f^(N)(-x) → c2`.
    SlowlyVaryingDivergence { c2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Taxonomy {
    Pole,
    SteepCusp,
    OffsetInfiniteSlope,
    ExponentialPeak,
    Smooth,
}

/// Mode with the interval it is known to lie in. A degenerate bracket
/// `[0, 0]` means the mode is exactly zero by theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeEstimate {
    pub mode: f64,
    pub bracket: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub params: BgParams,
    pub smoothness_n: u32,
    pub mode: f64,
    pub mode_bracket: [f64; 2],
    pub taxonomy: Taxonomy,
    pub near_zero_positive: NearZeroClass,
    pub near_zero_negative: NearZeroClass,
    /// `(α⁺ - 1, α⁻ - 1)`.
    pub tail_exponents: (f64, f64),
    /// `(λ⁺, λ⁻)`.
    pub tail_rates: (f64, f64),
    /// `(C₃, C₄)`.
    pub tail_constants: (f64, f64),
    /// Limits of `ln f(x) / x` at `+∞` and `-∞`.
    pub log_tail_slopes: (f64, f64),
}

/// `alpha_sum` snapped to an integer when within `SHAPE_TOL`.
fn snapped_sum(p: &BgParams) -> (f64, bool) {
    let s = p.alpha_sum();
    let r = s.round();
    if (s - r).abs() <= SHAPE_TOL {
        (r, true)
    } else {
        (s, false)
    }
}

/// The integer `N` with `N < α⁺ + α⁻ <= N + 1`.
pub fn smoothness_class(p: &BgParams) -> u32 {
    let (s, is_int) = snapped_sum(p);
    if is_int {
        (s as u32).saturating_sub(1)
    } else {
        (s.ceil() as u32).saturating_sub(1)
    }
}

fn ln_rate_powers(p: &BgParams) -> f64 {
    p.alpha_plus() * p.lambda_plus().ln() + p.alpha_minus() * p.lambda_minus().ln()
}

/// Behaviour of `f^(N)` as `x ↓ 0`; apply to `p.reflect()` for `x ↑ 0`.
pub fn near_zero_class(p: &BgParams) -> NearZeroClass {
    if positive_integer(p.alpha_plus()).is_some() {
        return NearZeroClass::FiniteLimit;
    }
    let n = smoothness_class(p) as f64;
    let (s, sum_is_int) = snapped_sum(p);
    let ap = p.alpha_plus();
    let am = p.alpha_minus();
    if sum_is_int {
        let sign = if (n as i64 + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let c2 = 0.5 * ln_rate_powers(p).exp() * (sign * (ap * PI).cos() + (am * PI).cos());
        NearZeroClass::SlowlyVaryingDivergence { c2 }
    } else {
        let c1 = ln_rate_powers(p).exp() * (ap * PI).sin() / ((s * PI).sin() * ln_gamma_unchecked(s - n).exp());
        NearZeroClass::PowerDivergence { alpha_exp: n + 1.0 - s, c1 }
    }
}

/// `(C₃, C₄)` of `f(x) ~ C₃ x^{α⁺-1} e^{-λ⁺x}` and `f(x) ~ C₄ |x|^{α⁻-1} e^{-λ⁻|x|}`.
pub fn tail_constants(p: &BgParams) -> (f64, f64) {
    let ln_s = p.lambda_sum().ln();
    let base = ln_rate_powers(p);
    (
        (base - p.alpha_minus() * ln_s - ln_gamma_unchecked(p.alpha_plus())).exp(),
        (base - p.alpha_plus() * ln_s - ln_gamma_unchecked(p.alpha_minus())).exp(),
    )
}

/// `(lim_{x→∞} ln f(x)/x, lim_{x→-∞} ln f(x)/x) = (-λ⁺, λ⁻)`.
pub fn log_tail_slopes(p: &BgParams) -> (f64, f64) {
    (-p.lambda_plus(), p.lambda_minus())
}

fn golden_max<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Half-bracket `(lo, hi)` with a nonzero mode, or `None` when the mode is 0.
fn mode_search_interval(p: &BgParams) -> ([f64; 2], Option<(f64, f64)>) {
    let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
    match (ap > 1.0, am > 1.0) {
        (false, false) => ([0.0, 0.0], None),
        (true, false) => {
            let hi = (ap - 1.0) / lp;
            ([0.0, hi], Some((0.0, hi)))
        }
        (false, true) => {
            let lo = -(am - 1.0) / lm;
            ([lo, 0.0], Some((lo, 0.0)))
        }
        (true, true) => {
            let lo = -(am - 1.0) / lm;
            let hi = (ap - 1.0) / lp;
            let d = mode_sign_discriminant(p);
            let scale = (lm * ap).abs().max((lp * am).abs()).max(lm).max(lp);
            if d.abs() <= 1e-12 * scale {
                ([lo, hi], None)
            } else if d > 0.0 {
                ([lo, hi], Some((0.0, hi)))
            } else {
                ([lo, hi], Some((lo, 0.0)))
            }
        }
    }
}

/// `λ⁻α⁺ - λ⁺α⁻ - (λ⁻ - λ⁺)`; its sign is the sign of the mode when both shapes exceed 1.
pub fn mode_sign_discriminant(p: &BgParams) -> f64 {
    p.lambda_minus() * p.alpha_plus() - p.lambda_plus() * p.alpha_minus() - (p.lambda_minus() - p.lambda_plus())
}

/// Location of the unique maximum of `f`.
///
/// Golden-section search on `f` inside the known bracket, followed by a root
/// polish on `f'` near the golden-section estimate.
pub fn mode(p: &BgParams) -> Result<ModeEstimate> {
    let (bracket, search) = mode_search_interval(p);
    let Some((lo, hi)) = search else {
        return Ok(ModeEstimate { mode: 0.0, bracket });
    };
    let width = hi - lo;
    let x = golden_max(|x| pdf(p, x), lo, hi, 1e-10 * width)?;
    // f' is continuous away from zero, so bracket its sign change near x.
    let mut delta = 1e-6 * width;
    let mut polished = x;
    for _ in 0..8 {
        let a = (x - delta).max(lo + 1e-3 * delta);
        let b = (x + delta).min(hi - 1e-3 * delta);
        if a == 0.0 || b == 0.0 || a >= b {
            break;
        }
        let (fa, fb) = (pdf_derivative(p, a)?, pdf_derivative(p, b)?);
        if fa > 0.0 && fb < 0.0 {
            polished = brent(|t| pdf_derivative(p, t), a, b, fa, fb, 0.0, 200)?;
            break;
        }
        delta *= 10.0;
    }
    Ok(ModeEstimate { mode: polished, bracket })
}

pub fn taxonomy(p: &BgParams) -> Taxonomy {
    let (s, _) = snapped_sum(p);
    let one = |a: f64| (a - 1.0).abs() <= SHAPE_TOL;
    let (ap, am) = (p.alpha_plus(), p.alpha_minus());
    if s <= 1.0 {
        Taxonomy::Pole
    } else if s > 2.0 {
        Taxonomy::Smooth
    } else if one(ap) && one(am) {
        Taxonomy::ExponentialPeak
    } else if (ap > 1.0 && !one(ap)) || (am > 1.0 && !one(am)) {
        Taxonomy::OffsetInfiniteSlope
    } else {
        Taxonomy::SteepCusp
    }
}

pub fn shape_report(p: &BgParams) -> Result<ShapeReport> {
    let m = mode(p)?;
    Ok(ShapeReport {
        params: *p,
        smoothness_n: smoothness_class(p),
        mode: m.mode,
        mode_bracket: m.bracket,
        taxonomy: taxonomy(p),
        near_zero_positive: near_zero_class(p),
        near_zero_negative: near_zero_class(&p.reflect()),
        tail_exponents: (p.alpha_plus() - 1.0, p.alpha_minus() - 1.0),
        tail_rates: (p.lambda_plus(), p.lambda_minus()),
        tail_constants: tail_constants(p),
        log_tail_slopes: log_tail_slopes(p),
    })
}

/// `∫_0^len g(t) dt` for `g` possibly behaving like `t^{S-1}` at 0.
fn from_zero<F: FnMut(f64) -> f64>(mut g: F, len: f64, s: f64, opts: &QuadOptions) -> Result<f64> {
    if s >= 1.0 {
        return Ok(integrate(g, 0.0, len, opts)?.value);
    }
    // t = len r^{1/S}
    let q = 1.0 / s;
    Ok(integrate(|r: f64| g(len * r.powf(q)) * len * q * r.powf(q - 1.0), 0.0, 1.0, opts)?.value)
}

/// `∫_0^∞ g(t) dt` with the same allowance at 0.
fn from_zero_to_infinity<F: FnMut(f64) -> f64>(mut g: F, cut: f64, s: f64, opts: &QuadOptions) -> Result<f64> {
    let head = from_zero(&mut g, cut, s, opts)?;
    Ok(head + integrate_to_infinity(&mut g, cut, opts)?.value)
}

/// Residual of `x f'(x) = (S-1) f(x) - α⁺λ⁺ ∫_0^∞ f(x-u) e^{-λ⁺u} du - α⁻λ⁻ ∫_0^∞ f(x+u) e^{-λ⁻u} du`.
pub fn integro_diff_residual(p: &BgParams, x: f64) -> Result<f64> {
    if !(x != 0.0 && x.is_finite()) {
        return Err(Error::domain("integro_diff_residual", format!("x must be finite and nonzero, got {x}")));
    }
    let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
    let s = p.alpha_sum();
    let opts = QuadOptions::with_tolerances(1e-14, 1e-10);
    let mut failure: Option<Error> = None;
    let mut f = |y: f64| match pdf(p, y) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let cut_l = 1.0 / lm;
    let cut_r = 1.0 / lp;
    // A = ∫_{-∞}^x f(y) e^{-λ⁺(x-y)} dy,  B = ∫_x^∞ f(y) e^{-λ⁻(y-x)} dy
    let (a, b) = if x > 0.0 {
        let a_neg = from_zero_to_infinity(|t| f(-t) * (-lp * (x + t)).exp(), cut_l, s, &opts)?;
        let a_pos = from_zero(|t| f(t) * (-lp * (x - t)).exp(), x, s, &opts)?;
        let b = integrate_to_infinity(|y| f(y) * (-lm * (y - x)).exp(), x, &opts)?.value;
        (a_neg + a_pos, b)
    } else {
        let ax = -x;
        let a = integrate_to_infinity(|t| f(-t) * (-lp * (t - ax)).exp(), ax, &opts)?.value;
        let b_neg = from_zero(|t| f(-t) * (-lm * (ax - t)).exp(), ax, s, &opts)?;
        let b_pos = from_zero_to_infinity(|t| f(t) * (-lm * (t + ax)).exp(), cut_r, s, &opts)?;
        (a, b_neg + b_pos)
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let fx = pdf(p, x)?;
    let dfx = pdf_derivative(p, x)?;
    Ok(x * dfx - (s - 1.0) * fx + ap * lp * a + am * lm * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bg(a: f64, b: f64, c: f64, d: f64) -> BgParams {
        BgParams::new(a, b, c, d).unwrap()
    }

    #[test]
    fn smoothness_index() {
        assert_eq!(smoothness_class(&bg(0.5, 1.0, 0.3, 1.0)), 0);
        assert_eq!(smoothness_class(&bg(1.0, 1.0, 1.0, 1.0)), 1);
        assert_eq!(smoothness_class(&bg(1.55, 1.0, 0.94, 1.0)), 2);
        assert_eq!(smoothness_class(&bg(0.7, 1.0, 0.3, 1.0)), 0);
        assert_eq!(smoothness_class(&bg(2.0, 1.0, 1.0, 1.0)), 2);
        assert_eq!(smoothness_class(&bg(2.0, 1.0, 1.0 + 1e-9, 1.0)), 3);
    }

    #[test]
    fn modes() {
        assert_eq!(mode(&bg(1.0, 1.0, 1.0, 1.0)).unwrap().mode, 0.0);
        assert_eq!(mode(&bg(0.3, 1.0, 0.9, 4.0)).unwrap().mode, 0.0);
        assert_eq!(mode(&bg(2.0, 1.0, 2.0, 1.0)).unwrap().mode, 0.0);
        let m = mode(&bg(2.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((m.mode - 0.5).abs() < 1e-8, "{}", m.mode);
        assert_eq!(m.bracket, [0.0, 1.0]);
        let m = mode(&bg(1.0, 1.0, 2.0, 1.0)).unwrap();
        assert!((m.mode + 0.5).abs() < 1e-8);
    }

    #[test]
    fn mode_matches_derivative_root() {
        let p = bg(3.0, 2.0, 1.5, 0.7);
        let m = mode(&p).unwrap();
        assert!(m.bracket[0] < m.mode && m.mode < m.bracket[1]);
        assert!(pdf_derivative(&p, m.mode).unwrap().abs() < 1e-10);
        assert_eq!(m.mode.signum(), mode_sign_discriminant(&p).signum());
    }

    #[test]
    fn near_zero_classes() {
        assert_eq!(near_zero_class(&bg(2.0, 1.0, 0.5, 1.0)), NearZeroClass::FiniteLimit);
        match near_zero_class(&bg(0.5, 1.0, 0.3, 1.0)) {
            NearZeroClass::PowerDivergence { alpha_exp, c1 } => {
                assert!((alpha_exp - 0.2).abs() < 1e-14);
                let expect = (0.5 * PI).sin() / (ln_gamma_unchecked(0.8).exp() * (0.8 * PI).sin());
                assert!((c1 - expect).abs() < 1e-14 * expect);
            }
            other => panic!("{other:?}"),
        }
        match near_zero_class(&bg(0.5, 1.0, 0.5, 1.0)) {
            NearZeroClass::SlowlyVaryingDivergence { c2 } => assert!(c2.abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(near_zero_class(&bg(0.7, 1.0, 0.3, 2.0)), NearZeroClass::SlowlyVaryingDivergence { .. }));
    }

    #[test]
    fn power_law_at_zero() {
        let p = bg(0.5, 1.0, 0.3, 1.0);
        let NearZeroClass::PowerDivergence { alpha_exp, c1 } = near_zero_class(&p) else { panic!() };
        let (x1, x2) = (1e-12, 1e-9);
        let slope = (pdf(&p, x2).unwrap().ln() - pdf(&p, x1).unwrap().ln()) / (x2 / x1).ln();
        assert!((slope + alpha_exp).abs() < 0.01, "{slope}");
        let level = pdf(&p, 1e-12).unwrap() * 1e-12f64.powf(alpha_exp);
        assert!((level / c1 - 1.0).abs() < 0.01, "{level} vs {c1}");
    }

    #[test]
    fn tails() {
        assert_eq!(tail_constants(&bg(1.0, 1.0, 1.0, 1.0)), (0.5, 0.5));
        let (c3, c4) = tail_constants(&bg(0.8, 2.0, 0.8, 2.0));
        assert!((c3 - c4).abs() < 1e-15 * c3);
        assert_eq!(log_tail_slopes(&bg(2.0, 5.0, 3.0, 7.0)), (-5.0, 7.0));
        let q = crate::distribution::scale(&bg(2.0, 5.0, 3.0, 7.0), 2.0).unwrap();
        assert_eq!(log_tail_slopes(&q), (-2.5, 3.5));
    }

    #[test]
    fn taxonomy_table() {
        assert_eq!(taxonomy(&bg(0.4, 1.0, 0.4, 1.0)), Taxonomy::Pole);
        assert_eq!(taxonomy(&bg(0.7, 1.0, 0.3, 1.0)), Taxonomy::Pole);
        assert_eq!(taxonomy(&bg(0.7, 1.0, 0.6, 1.0)), Taxonomy::SteepCusp);
        assert_eq!(taxonomy(&bg(1.0, 1.0, 0.6, 1.0)), Taxonomy::SteepCusp);
        assert_eq!(taxonomy(&bg(1.5, 1.0, 0.3, 1.0)), Taxonomy::OffsetInfiniteSlope);
        assert_eq!(taxonomy(&bg(0.3, 1.0, 1.5, 1.0)), Taxonomy::OffsetInfiniteSlope);
        assert_eq!(taxonomy(&bg(1.0, 1.0, 1.0, 1.0)), Taxonomy::ExponentialPeak);
        assert_eq!(taxonomy(&bg(1.55, 133.96, 0.94, 88.92)), Taxonomy::Smooth);
    }

    #[test]
    fn report_for_fitted_parameters() {
        let r = shape_report(&bg(1.55, 133.96, 0.94, 88.92)).unwrap();
        assert_eq!(r.smoothness_n, 2);
        assert_eq!(r.taxonomy, Taxonomy::Smooth);
        assert!(r.mode > 0.0 && r.mode < 0.55 / 133.96);
        assert!(r.tail_constants.0 > 0.0 && r.tail_constants.1 > 0.0);
    }

    #[test]
    fn residual_laplace_and_integer() {
        for &x in &[0.5, -0.5, 1.0, -2.0] {
            let r = integro_diff_residual(&bg(1.0, 1.0, 1.0, 1.0), x).unwrap();
            assert!(r.abs() < 1e-9, "x={x}: {r}");
        }
        let r = integro_diff_residual(&bg(2.0, 1.0, 1.0, 1.0), 1.0).unwrap();
        assert!(r.abs() < 1e-9, "{r}");
    }

    #[test]
    fn residual_with_pole() {
        let p = bg(0.4, 1.3, 0.5, 0.8);
        for &x in &[0.3, -0.7] {
            let r = integro_diff_residual(&p, x).unwrap();
            let scale = (x * pdf_derivative(&p, x).unwrap()).abs().max(1.0);
            assert!(r.abs() <= 1e-5 * scale, "x={x}: {r}");
        }
    }

    #[test]
    fn residual_reflects() {
        let p = bg(1.5, 2.0, 1.5, 2.0);
        let a = integro_diff_residual(&p, 0.8).unwrap();
        let b = integro_diff_residual(&p.reflect(), -0.8).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn mode_in_bracket_and_sign_rule(a in 1.05f64..5.0, b in 0.2f64..5.0, c in 1.05f64..5.0, d in 0.2f64..5.0) {
            let p = bg(a, b, c, d);
            let m = mode(&p).unwrap();
            prop_assert!(m.bracket[0] < m.mode && m.mode < m.bracket[1] || m.mode == 0.0);
            let sign = |v: f64| if v == 0.0 { 0 } else if v > 0.0 { 1 } else { -1 };
            let disc = mode_sign_discriminant(&p);
            let expected = if disc.abs() <= 1e-12 * (a * d).max(b * c).max(b).max(d) { 0 } else { sign(disc) };
            prop_assert_eq!(sign(m.mode), expected);
        }

        #[test]
        fn smoothness_bounds(a in 0.01f64..6.0, c in 0.01f64..6.0) {
            let p = bg(a, 1.0, c, 1.0);
            let n = smoothness_class(&p) as f64;
            prop_assert!(n < a + c && a + c <= n + 1.0);
        }
    }
}
