//! Helpers shared by the CLI integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lasso_screen::LassoProblem;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lasso-screen"));
    cmd.env("SOURCE_DATE_EPOCH", "1700000000");
    cmd
}

/// Runs the binary with `args`, writing into `out_dir`.
pub fn run_in(out_dir: &Path, args: &[&str]) -> Output {
    bin()
        .arg("--out-dir")
        .arg(out_dir)
        .args(args)
        .output()
        .expect("failed to launch lasso-screen")
}

/// Every file of a directory, by name.
pub fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gap of `x` with the dual point obtained by rescaling its residual,
/// computed from scratch.
pub fn reference_gap(p: &LassoProblem, x: &[f64]) -> f64 {
    let a = p.dictionary();
    let y = p.observation();
    let lambda = p.lambda();
    let ax = a.matvec(x);
    let r: Vec<f64> = y.iter().zip(&ax).map(|(yi, v)| yi - v).collect();
    let corr = a.columns().map(|c| dot(c, &r).abs()).fold(0.0, f64::max);
    let scale = (corr / lambda).max(1.0);
    let primal = 0.5 * dot(&r, &r) + lambda * x.iter().map(|v| v.abs()).sum::<f64>();
    let dual_dist: f64 = y
        .iter()
        .zip(&r)
        .map(|(yi, ri)| (yi - ri / scale).powi(2))
        .sum();
    let dual = 0.5 * dot(y, y) - 0.5 * dual_dist;
    primal - dual
}

/// Cyclic coordinate descent with active-set sweeps, run until the
/// duality gap drops to `tol`. Returns the solution and its gap.
pub fn coordinate_descent(p: &LassoProblem, tol: f64, max_sweeps: usize) -> (Vec<f64>, f64) {
    let a = p.dictionary();
    let y = p.observation();
    let lambda = p.lambda();
    let n = p.n();
    let sq: Vec<f64> = a.columns().map(|c| dot(c, c)).collect();
    let mut x = vec![0.0; n];
    let mut r = y.to_vec();

    let sweep = |x: &mut [f64], r: &mut [f64], coords: &mut dyn Iterator<Item = usize>| {
        for j in coords {
            if sq[j] == 0.0 {
                continue;
            }
            let col = a.column(j);
            let z = x[j] + dot(col, r) / sq[j];
            let t = lambda / sq[j];
            let new = z.signum() * (z.abs() - t).max(0.0);
            let step = new - x[j];
            if step != 0.0 {
                for (ri, ci) in r.iter_mut().zip(col) {
                    *ri -= step * ci;
                }
                x[j] = new;
            }
        }
    };

    let mut gap = f64::INFINITY;
    for _ in 0..max_sweeps {
        sweep(&mut x, &mut r, &mut (0..n));
        let support: Vec<usize> = (0..n).filter(|&j| x[j] != 0.0).collect();
        for _ in 0..20 {
            sweep(&mut x, &mut r, &mut support.iter().copied());
        }
        // refresh the residual so rounding drift does not accumulate
        let ax = a.matvec(&x);
        for ((ri, yi), v) in r.iter_mut().zip(y).zip(&ax) {
            *ri = yi - v;
        }
        gap = reference_gap(p, &x);
        if gap <= tol {
            break;
        }
    }
    (x, gap)
}
