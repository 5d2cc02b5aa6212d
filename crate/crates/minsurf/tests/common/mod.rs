#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use minsurf_core::grid::{Field, GridPatch};
use minsurf_core::linalg::Vec5;
use minsurf_core::surface::Immersion;
use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built `minsurf` binary.
pub fn minsurf(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_minsurf")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("file exists")).expect("valid json")
}

pub fn error_code(run: &Run) -> String {
    let v: Value = serde_json::from_str(&run.stderr).unwrap_or_else(|_| panic!("stderr is not JSON: {}", run.stderr));
    v["error"]["code"].as_str().expect("error code").to_string()
}

/// `value` of the named entry in a `quantities` or `checks` list.
pub fn entry<'a>(list: &'a Value, name: &str) -> &'a Value {
    list.as_array().expect("list").iter().find(|q| q["name"] == name).unwrap_or_else(|| panic!("no entry {name}"))
}

/// Lawson's torus `(cos mx cos y, sin mx cos y, cos kx sin y, sin kx sin y, 0)`:
/// minimal in a great S³ with a non-constant curvature ellipse.
pub fn lawson(m: f64, k: f64, n: usize) -> Immersion {
    let patch = GridPatch::torus(n, n, 2.0 * PI, 2.0 * PI).unwrap();
    let pos = Field::from_fn(patch, |i, j| {
        let (x, y) = patch.coords(i, j);
        Vec5::new((m * x).cos() * y.cos(), (m * x).sin() * y.cos(), (k * x).cos() * y.sin(), (k * x).sin() * y.sin(), 0.0)
    });
    Immersion::new(pos, None).unwrap()
}
