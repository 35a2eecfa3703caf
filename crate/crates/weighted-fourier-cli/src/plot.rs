//! Plot-ready CSV series.

use crate::app::Report;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use weighted_fourier::criteria::{u_func, xi_func, ExponentConfig, Xi};
use weighted_fourier::funcspace::WeightSpec;
use weighted_fourier::Exponent;

/// `t` runs over `10^-6 .. 10^6`, ten points per decade.
const XI_DECADES: i32 = 6;
const XI_PER_DECADE: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiPoint {
    pub t: f64,
    pub xi: f64,
    #[serde(rename = "U")]
    pub big_u: f64,
    pub ratio: f64,
}

/// `ξ(t)/U(t)` on a geometric grid; empty when `q ≥ 2`, `ξ ≡ ∞` or the inputs
/// are rejected.
pub fn xi_over_u_series(u: &WeightSpec, cfg: &ExponentConfig) -> Vec<XiPoint> {
    if !cfg.q.lt(&Exponent::from_int(2)) {
        return Vec::new();
    }
    let xi = match xi_func(u, cfg.q) {
        Ok(Xi::Finite(c)) => c,
        _ => return Vec::new(),
    };
    let big_u = match u_func(u, cfg.q) {
        Ok(c) => c,
        Err(_) => return Vec::new(),
    };
    (-XI_DECADES * XI_PER_DECADE..=XI_DECADES * XI_PER_DECADE)
        .filter_map(|k| {
            let t = 10f64.powf(k as f64 / XI_PER_DECADE as f64);
            let (x, b) = (xi.eval(t), big_u.eval(t));
            let ratio = x / b;
            (x.is_finite() && b.is_finite() && ratio.is_finite()).then_some(XiPoint { t, xi: x, big_u: b, ratio })
        })
        .collect()
}

/// Writes the CSV series carried by `report` into `dir`; returns the files
/// written (none for reports without series).
pub fn emit_plot_data(report: &Report, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    match report {
        Report::Criteria { xi_over_u, .. } if !xi_over_u.is_empty() => {
            let mut s = String::from("t,xi,U,xi_over_U\n");
            for p in xi_over_u {
                let _ = writeln!(s, "{},{},{},{}", p.t, p.xi, p.big_u, p.ratio);
            }
            files.push(write(dir, "xi_over_U.csv", &s)?);
        }
        Report::Estimate(e) => {
            let b = &e.bracket;
            let n = e.budget.res.n;
            let mut s = String::from("N,L,lower\n");
            let _ = writeln!(s, "{},{},{}", n / 2, e.budget.res.length, b.lower_half);
            let _ = writeln!(s, "{},{},{}", n, e.budget.res.length, b.lower);
            files.push(write(dir, "ratio_vs_resolution.csv", &s)?);
        }
        _ => {}
    }
    Ok(files)
}

fn write(dir: &Path, name: &str, body: &str) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, body)?;
    Ok(path)
}
