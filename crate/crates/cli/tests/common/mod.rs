#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs `bgamma` from the crate directory with a clean `BGAMMA_*` environment.
pub fn run_with(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bgamma"));
    cmd.args(args).current_dir(manifest_dir());
    for v in ["BGAMMA_REL_TOL", "BGAMMA_MAX_TERMS", "BGAMMA_QUAD_ABS_TOL", "BGAMMA_ASYMPTOTIC_SWITCH_Z"] {
        cmd.env_remove(v);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn bgamma");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().expect("wait for bgamma");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn run(args: &[&str]) -> Run {
    run_with(args, None, &[])
}

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdin: Option<&'static str>,
}

/// One case per subcommand (pdf twice: flags and stdin).
pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase { name: "pdf", args: &["pdf", "--params", "1,1,1,1", "--x", "0.7", "--x", "-1.5", "--x", "3"], stdin: None },
    GoldenCase {
        name: "pdf_stdin",
        args: &["pdf", "--params", "1.55,133.96,0.94,88.92"],
        stdin: Some("x\n0.001\n-0.004\n0.02\n"),
    },
    GoldenCase { name: "cdf", args: &["cdf", "--params", "2,1,1,1", "--x", "-1", "--x", "0", "--x", "0.5", "--x", "2"], stdin: None },
    GoldenCase {
        name: "quantile",
        args: &["quantile", "--params", "0.7,2,1.3,3", "--u", "0.05", "--u", "0.5", "--u", "0.95"],
        stdin: None,
    },
    GoldenCase { name: "moments", args: &["moments", "--params", "2,5,3,7"], stdin: None },
    GoldenCase { name: "mode", args: &["mode", "--params", "2,1,1,1"], stdin: None },
    GoldenCase { name: "classify", args: &["classify", "--params", "1.55,133.96,0.94,88.92"], stdin: None },
    GoldenCase { name: "sample", args: &["sample", "--params", "0.7,2,1.3,3", "--n", "20", "--seed", "7"], stdin: None },
    GoldenCase {
        name: "fit",
        args: &["fit", "--input", "tests/golden/fit_input.csv", "--seed", "7", "--starts", "2"],
        stdin: None,
    },
    GoldenCase { name: "plot_data", args: &["plot-data", "--grid-count", "41"], stdin: None },
    GoldenCase { name: "verify", args: &["verify"], stdin: None },
];

/// Compares stdout with `tests/golden/<name>.out`; `BGAMMA_BLESS=1` rewrites it.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let r = run_with(case.args, case.stdin, &[]);
    if r.code != 0 {
        return Err(format!("{}: exit {} ({})", case.name, r.code, r.stderr.trim()));
    }
    let path = manifest_dir().join("tests/golden").join(format!("{}.out", case.name));
    if std::env::var("BGAMMA_BLESS").as_deref() == Ok("1") {
        std::fs::write(&path, &r.stdout).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != r.stdout {
        return Err(format!("{}: output differs from {}", case.name, path.display()));
    }
    Ok(())
}
