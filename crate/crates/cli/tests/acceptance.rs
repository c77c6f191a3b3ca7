//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::time::Instant;

use bilateral_gamma::analysis::{
    integro_diff_residual, mode, mode_sign_discriminant, near_zero_class, smoothness_class, tail_constants,
    NearZeroClass,
};
use bilateral_gamma::density::{ln_pdf, pdf};
use bilateral_gamma::distribution::{moments, quantile, vg_params, vg_pdf};
use bilateral_gamma::oracle::{
    default_fft_halfwidth, ln_integral_half_line, mc_moment_oracle, pdf_fft_oracle, pdf_quadrature_oracle, Tolerance,
};
use bilateral_gamma::simfit::{fit_mle, sample, RngState};
use bilateral_gamma::BgParams;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn bg(a: f64, b: f64, c: f64, d: f64) -> BgParams {
    BgParams::new(a, b, c, d).unwrap()
}

fn reference_sets() -> Vec<BgParams> {
    vec![
        bg(1.0, 1.0, 1.0, 1.0),
        bg(2.0, 1.0, 1.0, 1.0),
        bg(3.0, 2.0, 0.5, 1.0),
        bg(0.5, 1.0, 0.5, 1.0),
        bg(1.55, 133.96, 0.94, 88.92),
        bg(0.7, 2.0, 1.3, 3.0),
    ]
}

fn sd(p: &BgParams) -> f64 {
    moments(p).variance.sqrt()
}

fn oracle(p: &BgParams, x: f64) -> f64 {
    if x > 0.0 {
        pdf_quadrature_oracle(p, x).unwrap()
    } else {
        pdf_quadrature_oracle(&p.reflect(), -x).unwrap()
    }
}

fn uniform(rng: &mut RngState, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform_open0()
}

fn log_uniform(rng: &mut RngState, lo: f64, hi: f64) -> f64 {
    uniform(rng, lo.ln(), hi.ln()).exp()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_representations() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for p in reference_sets() {
        for k in 0..11 {
            let x = sd(&p) * 0.01 * 500f64.powf(k as f64 / 10.0);
            for x in [x, -x] {
                worst = worst.max(rel(pdf(&p, x).unwrap(), oracle(&p, x)));
            }
        }
    }
    (worst <= 1e-7, format!("max rel err {worst:.2e} (limit 1e-7), {:.1}s", t.elapsed().as_secs_f64()))
}

fn c2_laplace() -> Outcome {
    let p = bg(1.0, 1.0, 1.0, 1.0);
    let worst = (0..50)
        .map(|k| -12.25 + 0.5 * k as f64)
        .map(|x| rel(pdf(&p, x).unwrap(), 0.5 * (-x.abs()).exp()))
        .fold(0.0, f64::max);
    (worst <= 1e-12, format!("max rel err {worst:.2e} on 50 points (limit 1e-12)"))
}

fn mass(p: &BgParams) -> f64 {
    let tol = Tolerance { abs: 1e-13, rel: 1e-11 };
    [*p, p.reflect()]
        .iter()
        .map(|q| ln_integral_half_line(|y, _| ln_pdf(q, y).unwrap(), sd(p), tol).unwrap().exp())
        .sum()
}

fn c3_normalization() -> Outcome {
    let t = Instant::now();
    let mut rng = RngState::new(3);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 50 {
        let p = bg(
            uniform(&mut rng, 0.2, 4.0),
            log_uniform(&mut rng, 0.2, 20.0),
            uniform(&mut rng, 0.2, 4.0),
            log_uniform(&mut rng, 0.2, 20.0),
        );
        if p.alpha_sum() <= 1.0 {
            continue;
        }
        worst = worst.max((mass(&p) - 1.0).abs());
        count += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    (worst <= 1e-7 && secs < 60.0, format!("max |mass - 1| {worst:.2e} over 50 sets (limit 1e-7), {secs:.1}s"))
}

fn c4_variance_gamma() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.5] {
        let p = bg(a, 1.5, a, 0.8);
        let vg = vg_params(&p).unwrap();
        for k in 0..20 {
            let x = -4.75 + 0.5 * k as f64;
            worst = worst.max(rel(pdf(&p, x).unwrap(), vg_pdf(&vg, x).unwrap()));
        }
    }
    (worst <= 1e-8, format!("max rel err {worst:.2e} (limit 1e-8)"))
}

fn c5_fft() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for p in reference_sets().into_iter().filter(|p| p.alpha_sum() > 1.0) {
        let (xs, fs) = pdf_fft_oracle(&p, 1 << 22, default_fft_halfwidth(&p)).unwrap();
        let lo = quantile(&p, 0.005).unwrap();
        let hi = quantile(&p, 0.995).unwrap();
        let idx: Vec<usize> = (0..xs.len()).filter(|&j| xs[j] >= lo && xs[j] <= hi && xs[j] != 0.0).collect();
        let near_zero = idx.iter().copied().filter(|&j| xs[j].abs() <= 2.0 * (xs[1] - xs[0]));
        let step = (idx.len() / 2000).max(1);
        let mut e: f64 = 0.0;
        for j in idx.iter().copied().step_by(step).chain(near_zero) {
            e = e.max((pdf(&p, xs[j]).unwrap() - fs[j]).abs());
        }
        details.push(format!("{e:.1e}"));
        worst = worst.max(e);
    }
    (worst <= 1e-5, format!("max abs err {worst:.2e} (limit 1e-5); per set [{}]", details.join(", ")))
}

fn c6_moments() -> Outcome {
    let sets = [
        bg(1.0, 1.0, 1.0, 1.0),
        bg(2.0, 5.0, 3.0, 7.0),
        bg(0.5, 1.0, 0.5, 1.0),
        bg(1.55, 133.96, 0.94, 88.92),
        bg(3.0, 2.0, 0.5, 1.0),
        bg(0.7, 2.0, 1.3, 3.0),
        bg(2.0, 1.0, 1.0, 1.0),
        bg(4.0, 1.5, 2.0, 0.5),
        bg(1.2, 0.8, 0.3, 2.0),
        bg(5.0, 5.0, 5.0, 5.0),
    ];
    let mut worst: f64 = 0.0;
    for (i, p) in sets.iter().enumerate() {
        let mc = mc_moment_oracle(p, 1_000_000, &mut RngState::new(600 + i as u64)).unwrap();
        let t = moments(p);
        for (e, se, v) in [
            (mc.estimate.mean, mc.std_error.mean, t.mean),
            (mc.estimate.variance, mc.std_error.variance, t.variance),
            (mc.estimate.skewness, mc.std_error.skewness, t.skewness),
            (mc.estimate.kurtosis, mc.std_error.kurtosis, t.kurtosis),
        ] {
            worst = worst.max((e - v).abs() / se);
        }
    }
    (worst <= 3.0, format!("max deviation {worst:.2} jackknife s.e. over 10 sets x 4 moments (limit 3)"))
}

fn c7_mode() -> Outcome {
    let mut msgs = Vec::new();
    let mut ok = true;
    let m0 = mode(&bg(1.0, 1.0, 1.0, 1.0)).unwrap().mode;
    ok &= m0 == 0.0;
    msgs.push(format!("mode(1,1,1,1) = {m0:?}"));
    let m1 = mode(&bg(2.0, 1.0, 1.0, 1.0)).unwrap().mode;
    ok &= (m1 - 0.5).abs() <= 1e-8;
    msgs.push(format!("|mode(2,1,1,1) - 0.5| = {:.1e}", (m1 - 0.5).abs()));

    let mut rng = RngState::new(7);
    let mut sign_bad = 0;
    let mut bracket_bad = 0;
    for _ in 0..100 {
        let (ap, am) = (uniform(&mut rng, 1.01, 6.0), uniform(&mut rng, 1.01, 6.0));
        let (lp, lm) = (log_uniform(&mut rng, 0.2, 10.0), log_uniform(&mut rng, 0.2, 10.0));
        let p = bg(ap, lp, am, lm);
        let m = mode(&p).unwrap().mode;
        let d = lm * ap - lp * am - lm + lp;
        let scale = (lm * ap).max(lp * am).max(lm).max(lp);
        let expected = if d.abs() <= 1e-12 * scale { 0.0 } else { d.signum() };
        let got = if m == 0.0 { 0.0 } else { m.signum() };
        if got != expected || mode_sign_discriminant(&p).signum() != d.signum() {
            sign_bad += 1;
        }
        let inside = if d > 0.0 { m > 0.0 && m < (ap - 1.0) / lp } else { m < 0.0 && m > -(am - 1.0) / lm };
        if !inside {
            bracket_bad += 1;
        }
    }
    ok &= sign_bad == 0 && bracket_bad == 0;
    msgs.push(format!("sign rule violations {sign_bad}/100, bracket violations {bracket_bad}/100"));

    let mut uni_bad = 0;
    let mut count = 0;
    while count < 50 {
        let p = bg(
            uniform(&mut rng, 0.3, 4.0),
            log_uniform(&mut rng, 0.3, 5.0),
            uniform(&mut rng, 0.3, 4.0),
            log_uniform(&mut rng, 0.3, 5.0),
        );
        if p.alpha_sum() <= 1.0 {
            continue;
        }
        count += 1;
        let m = mode(&p).unwrap().mode;
        let h = 2.0 * sd(&p) / 20.0;
        let left: Vec<f64> = (0..=20).rev().map(|k| pdf(&p, m - k as f64 * h).unwrap()).collect();
        let right: Vec<f64> = (0..=20).map(|k| pdf(&p, m + k as f64 * h).unwrap()).collect();
        if !(left.windows(2).all(|w| w[0] < w[1]) && right.windows(2).all(|w| w[0] > w[1])) {
            uni_bad += 1;
        }
    }
    ok &= uni_bad == 0;
    msgs.push(format!("unimodality failures {uni_bad}/50"));
    (ok, msgs.join("; "))
}

fn c8_smoothness() -> Outcome {
    let table: [(BgParams, u32); 12] = [
        (bg(0.2, 1.0, 0.3, 1.0), 0),
        (bg(0.4, 4.0, 0.4, 4.0), 0),
        (bg(0.5, 10.0, 0.5, 10.0), 0),
        (bg(0.7, 1.0, 0.6, 1.0), 1),
        (bg(0.6, 1.0, 0.5, 1.0), 1),
        (bg(1.0, 1.0, 1.0, 1.0), 1),
        (bg(1.5, 1.0, 0.5, 2.0), 1),
        (bg(1.55, 133.96, 0.94, 88.92), 2),
        (bg(2.0, 1.0, 1.0, 1.0), 2),
        (bg(1.2, 1.0, 1.8, 1.0), 2),
        (bg(3.0, 2.0, 0.5, 1.0), 3),
        (bg(5.0, 5.0, 5.0, 5.0), 9),
    ];
    let mut msgs = Vec::new();
    let mismatches: Vec<String> = table
        .iter()
        .filter(|(p, n)| smoothness_class(p) != *n)
        .map(|(p, n)| format!("{p}: got {} want {n}", smoothness_class(p)))
        .collect();
    let mut ok = mismatches.is_empty();
    msgs.push(format!("N mismatches {}/12 {:?}", mismatches.len(), mismatches));
    let mut min_ratio = f64::INFINITY;
    let mut min_slope = f64::INFINITY;
    for (p, _) in &table {
        let (ap, am) = (p.alpha_plus(), p.alpha_minus());
        if p.alpha_sum() <= 1.0 {
            let r = pdf(p, 1e-8).unwrap() / pdf(p, 1.0).unwrap();
            min_ratio = min_ratio.min(r);
            ok &= r > 1e3;
        } else if p.alpha_sum() <= 2.0 && ap < 1.0 && am < 1.0 {
            let h = 1e-8;
            let slope = |x: f64| (pdf(p, x + h).unwrap() - pdf(p, x - h).unwrap()) / (2.0 * h);
            let (r, l) = (slope(1e-6), slope(-1e-6));
            ok &= r < -1e3 && l > 1e3;
            min_slope = min_slope.min(r.abs()).min(l.abs());
        }
    }
    msgs.push(format!("pole witness min pdf(1e-8)/pdf(1) = {min_ratio:.3e} (> 1e3)"));
    msgs.push(format!("slope witness min |f'(+-1e-6)| = {min_slope:.3e} (> 1e3, opposite signs)"));
    (ok, msgs.join("; "))
}

fn c9_near_zero() -> Outcome {
    let mut ok = true;
    let mut msgs = Vec::new();
    let p = bg(0.5, 1.0, 0.3, 1.0);
    match near_zero_class(&p) {
        NearZeroClass::PowerDivergence { alpha_exp, c1 } => {
            let xs: Vec<f64> = (0..=30).map(|k| 1e-8 * 1000f64.powf(k as f64 / 30.0)).collect();
            let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
            let slope_of = |ly: &[f64]| {
                let n = lx.len() as f64;
                let mx = lx.iter().sum::<f64>() / n;
                let my = ly.iter().sum::<f64>() / n;
                let sxy: f64 = lx.iter().zip(ly).map(|(a, b)| (a - mx) * (b - my)).sum();
                let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
                sxy / sxx
            };
            let s_pdf = slope_of(&xs.iter().map(|&x| pdf(&p, x).unwrap().ln()).collect::<Vec<_>>());
            let s_orc = slope_of(&xs.iter().map(|&x| oracle(&p, x).ln()).collect::<Vec<_>>());
            let lvl_orc = oracle(&p, 1e-8) * 1e-8f64.powf(alpha_exp) / c1;
            let lvl_pdf = pdf(&p, 1e-8).unwrap() * 1e-8f64.powf(alpha_exp) / c1;
            ok &= (s_pdf + 0.2).abs() <= 0.01 && (s_orc + 0.2).abs() <= 0.01;
            ok &= (lvl_orc - 1.0).abs() <= 0.01 && (lvl_pdf - 1.0).abs() <= 0.01;
            msgs.push(format!(
                "(0.5,1,0.3,1): slope {s_pdf:.5} (oracle {s_orc:.5}), f x^0.2 / C1 at 1e-8 = {lvl_orc:.5} (pdf {lvl_pdf:.5}), limit 1 +- 0.01"
            ));
        }
        other => {
            ok = false;
            msgs.push(format!("(0.5,1,0.3,1) classified {other:?}"));
        }
    }
    let sym = bg(0.5, 1.0, 0.5, 1.0);
    match near_zero_class(&sym) {
        NearZeroClass::SlowlyVaryingDivergence { c2 } => {
            let diff = [1e-8, 1e-4, 0.3, 2.0].iter().map(|&x| (pdf(&sym, x).unwrap() - pdf(&sym, -x).unwrap()).abs()).fold(0.0, f64::max);
            ok &= c2.abs() < 1e-15 && diff == 0.0;
            msgs.push(format!("symmetric C2 = {c2:.1e}, max |f(x)-f(-x)| = {diff:.1e}"));
        }
        other => {
            ok = false;
            msgs.push(format!("(0.5,1,0.5,1) classified {other:?}"));
        }
    }
    let asym = bg(0.7, 1.0, 0.3, 2.0);
    match near_zero_class(&asym) {
        NearZeroClass::SlowlyVaryingDivergence { c2 } => {
            let f = pdf(&asym, 1e-8).unwrap();
            let d = f - pdf(&asym, -1e-8).unwrap();
            let tol = (0.01 * c2.abs()).max(1e-6 * f);
            ok &= (d - c2).abs() <= tol;
            msgs.push(format!("(0.7,1,0.3,2): f(x)-f(-x) = {d:.6}, C2 = {c2:.6}"));
        }
        other => {
            ok = false;
            msgs.push(format!("(0.7,1,0.3,2) classified {other:?}"));
        }
    }
    (ok, msgs.join("; "))
}

fn c10_tails() -> Outcome {
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    let mut worst_slope: f64 = 0.0;
    let mut bad = Vec::new();
    for p in reference_sets() {
        let (c3, c4) = tail_constants(&p);
        let (ap, lp, am, lm) = (p.alpha_plus(), p.lambda_plus(), p.alpha_minus(), p.lambda_minus());
        let x = 30.0 / lp;
        let r_plus = pdf(&p, x).unwrap() / (c3 * x.powf(ap - 1.0) * (-lp * x).exp());
        let s_plus = rel(ln_pdf(&p, x).unwrap() / x, -lp);
        let y = 30.0 / lm;
        let r_minus = pdf(&p, -y).unwrap() / (c4 * y.powf(am - 1.0) * (-lm * y).exp());
        let s_minus = rel(ln_pdf(&p, -y).unwrap() / -y, lm);
        for (side, r, s) in [("+", r_plus, s_plus), ("-", r_minus, s_minus)] {
            worst_ratio = worst_ratio.max((r - 1.0).abs());
            worst_slope = worst_slope.max(s);
            if !(0.99..=1.01).contains(&r) || s > 0.02 {
                ok = false;
                bad.push(format!("{p}{side}: ratio {r:.4}, slope dev {:.1}%", 100.0 * s));
            }
        }
    }
    (
        ok,
        format!(
            "max |ratio - 1| {worst_ratio:.4} (limit 0.01), max ln-slope rel dev {worst_slope:.4} (limit 0.02); failing: [{}]",
            bad.join("; ")
        ),
    )
}

fn c11_residual() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [bg(2.0, 1.0, 1.0, 1.0), bg(1.0, 1.0, 1.0, 1.0)] {
        for x in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
            worst = worst.max(integro_diff_residual(&p, x).unwrap().abs());
        }
    }
    (worst <= 1e-5, format!("max |residual| {worst:.2e} (limit 1e-5)"))
}

fn c12_fit() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut msgs = Vec::new();
    for (p, seed) in [(bg(1.55, 133.96, 0.94, 88.92), 20), (bg(1.0, 1.0, 1.0, 1.0), 21)] {
        let data = sample(&p, 100_000, &mut RngState::new(seed));
        let r = fit_mle(&data, None, &mut RngState::new(seed + 100)).unwrap();
        let worst = p.as_array().iter().zip(r.params.as_array()).map(|(a, b)| rel(b, *a)).fold(0.0, f64::max);
        ok &= r.converged && worst <= 0.1;
        msgs.push(format!("{p} -> {} (max rel err {:.3}, converged {})", r.params, worst, r.converged));
    }
    let secs = t.elapsed().as_secs_f64();
    ok &= secs <= 300.0;
    msgs.push(format!("{secs:.0}s total (limit 300s)"));
    (ok, msgs.join("; "))
}

fn c13_cli() -> Outcome {
    let failures: Vec<String> = common::GOLDEN.iter().filter_map(|c| common::check_golden(c).err()).collect();
    let tight = common::run(&["verify", "--tolerance-scale", "1e-30"]);
    let ok = failures.is_empty() && tight.code == 5;
    (
        ok,
        format!(
            "{}/{} golden outputs match; tightened verify exit {} (want 5){}",
            common::GOLDEN.len() - failures.len(),
            common::GOLDEN.len(),
            tight.code,
            if failures.is_empty() { String::new() } else { format!("; {failures:?}") }
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 13] = [
        ("representation agreement", c1_representations),
        ("Laplace exactness", c2_laplace),
        ("normalization", c3_normalization),
        ("variance-gamma equivalence", c4_variance_gamma),
        ("FFT inversion", c5_fft),
        ("moments", c6_moments),
        ("mode", c7_mode),
        ("smoothness index", c8_smoothness),
        ("near-zero asymptotics", c9_near_zero),
        ("tail asymptotics", c10_tails),
        ("integro-differential identity", c11_residual),
        ("fit round trip", c12_fit),
        ("CLI determinism and exit codes", c13_cli),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        println!("{} criterion {:>2} ({name}): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
